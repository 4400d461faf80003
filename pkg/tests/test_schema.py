import itertools

import pytest

from treelens import (
    IntLeaf,
    Node,
    StrLeaf,
    check_pattern_type,
    check_tree_type,
    default_value,
    parse_pattern,
    parse_tree,
)
from treelens.schema import IllTyped, NoFiniteDefault
from treelens.frontend import load_program


def test_check_tree_type_accepts(arith):
    typed = check_tree_type(arith.schema, "Term", parse_tree('Lit "x" 5'))
    assert typed.root_type == "Term"
    assert typed.type_at(()) == "Term"
    assert typed.type_at((0,)) == "String"
    assert typed.type_at((1,)) == "Int"


def test_check_tree_type_primitive(arith):
    typed = check_tree_type(arith.schema, "Int", IntLeaf(3))
    assert typed.type_at(()) == "Int"


def test_check_tree_type_wrong_type(arith):
    with pytest.raises(IllTyped) as e:
        check_tree_type(arith.schema, "Expr", parse_tree('Lit "x" 5'))
    assert e.value.path == ()
    assert e.value.expected == "Expr"
    assert e.value.found == "Term"


def test_check_pattern_type_annotations(arith):
    tp = check_pattern_type(arith.schema, "Expr", parse_pattern("Plus _ x y"))
    assert tp.type_at((0,)) == "String"  # Annot resolves to String
    assert tp.type_at((1,)) == "Expr"
    assert tp.type_at((2,)) == "Term"


def test_check_pattern_type_bare_var(arith):
    tp = check_pattern_type(arith.schema, "Arith", parse_pattern("t"))
    assert tp.type_at(()) == "Arith"


def test_check_pattern_type_rejects(arith):
    with pytest.raises(IllTyped):
        check_pattern_type(arith.schema, "Arith", parse_pattern("Plus _ x y"))


def test_default_values(arith):
    assert default_value(arith.schema, "Annot") == StrLeaf("")
    assert default_value(arith.schema, "Arith") == parse_tree("Num 0")
    assert default_value(arith.schema, "Expr") == parse_tree('FromT "" (Lit "" 0)')
    assert default_value(arith.schema, "Int") == IntLeaf(0)


def _enumerate_trees(sch, ty, max_size):
    """All well-typed trees of ``ty`` with at most ``max_size`` nodes."""
    ty = sch.resolve(ty)
    if ty == "Int":
        return [IntLeaf(0)] if max_size >= 1 else []
    if ty == "String":
        return [StrLeaf("")] if max_size >= 1 else []
    out = []
    for c in sch.types[ty]:
        budget = max_size - 1
        if budget < 0:
            continue
        pools = []
        for a in c.arg_types:
            pools.append(_enumerate_trees(sch, a, budget))
        for combo in itertools.product(*pools):
            t = Node(c.name, tuple(combo))
            from treelens.trees import tree_size

            if tree_size(t) <= max_size:
                out.append(t)
    return out


def test_default_is_global_minimizer(arith):
    # Exhaustive enumeration oracle: nothing smaller exists, and the default
    # itself appears among the minimum-size trees, first in declaration order.
    from treelens.trees import tree_size

    for ty in ("Arith", "Term", "Expr"):
        d = default_value(arith.schema, ty)
        all_small = _enumerate_trees(arith.schema, ty, tree_size(d))
        assert d in all_small
        assert min(tree_size(t) for t in all_small) == tree_size(d)


def test_no_finite_default():
    vp = load_program(
        """data Stream = More Stream
data Unit = MkUnit

Unit <---> Unit
  MkUnit ~ MkUnit
"""
    )
    with pytest.raises(NoFiniteDefault):
        default_value(vp.schema, "Stream")


def test_generic_instances(addrbook):
    sch = addrbook.schema
    assert "List Person" in sch.types
    assert "List String" in sch.types  # List Name resolves through the synonym
    assert sch.resolve("Name") == "String"
    cons = sch.constructor("List Person", "Cons")
    assert cons is not None and cons.arg_types == ("Person", "List Person")


def test_min_sizes(arith):
    sizes = arith.schema.min_sizes()
    assert sizes["Arith"] == 2  # Num 0
    assert sizes["Term"] == 3  # Lit "" 0
    assert sizes["Expr"] == 5  # FromT "" (Lit "" 0)
