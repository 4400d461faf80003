"""Compile consistency relations between tree types into link-carrying lenses.

A program in the ``.lens`` DSL declares algebraic data types and ordered
inductive rules relating a source type to a view type.  Every declared
relation yields a lens whose ``get`` produces provenance links alongside the
view and whose ``put`` consumes (possibly edited) links to retain the linked
source regions, guarded by a ``check`` procedure that decides put's domain.
"""

from .compose import CompositeLens
from .edits import (
    Copy,
    Delete,
    EditContext,
    EditState,
    Insert,
    Move,
    Replace,
    Swap,
    apply_op,
    apply_script,
    parse_script,
    render_script,
)
from .engine import (
    CheckFailure,
    IllTypedInput,
    InvalidLinks,
    LensHandle,
    UnknownRelation,
    add_v_prefix,
    divide,
    lens,
)
from .frontend import (
    NoConversion,
    Program,
    ValidatedProgram,
    ValidationError,
    interchangeable_pairs,
    load_program,
    parse_program,
    render_program,
    synthesize_inj,
    validate_program,
)
from .harness import LawSummary, TrialReport, gen_script, gen_tree, verify_laws
from .schema import (
    IllTyped,
    NoFiniteDefault,
    Schema,
    check_pattern_type,
    check_tree_type,
    default_value,
)
from .text import (
    LensSyntaxError,
    parse_links,
    parse_path,
    parse_pattern,
    parse_tree,
    read_tree_file,
    render_link,
    render_links,
    render_path,
    render_pattern,
    render_tree,
    write_tree_file,
)
from .trees import (
    IntLeaf,
    Link,
    LinkSet,
    Node,
    Path,
    Pattern,
    PInt,
    PNode,
    PStr,
    Region,
    StrLeaf,
    Tree,
    Var,
    WILDCARD,
    Wildcard,
    canonical_links,
    decompose,
    erase_vars,
    fill_wildcards,
    fst_projection,
    is_match,
    link_compose,
    link_converse,
    links_valid,
    reconstruct,
    region_contains,
    sel,
    var_path,
)

__all__ = [name for name in dir() if not name.startswith("_")]
