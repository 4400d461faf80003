"""Universal trees, patterns, paths, regions, and link relations.

Every value the rest of the toolkit manipulates bottoms out here: trees are
finitely branching constructor applications over integer and text leaves,
patterns add variables and a wildcard, and links are finite relations between
(pattern, path) regions of two trees.  All values are immutable and freely
shareable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union


class TreeError(Exception):
    """Base class for tree/pattern operation failures."""


class PathOutOfRange(TreeError):
    """A path index does not resolve in the given tree."""


class MatchFailure(TreeError):
    """A pattern was applied to a tree it does not match."""


class WildcardPresent(TreeError):
    """Reconstruction requires a wildcard-free pattern."""


class UnboundVariable(TreeError):
    """Reconstruction found a variable missing from the binding."""


class VariableAbsent(TreeError):
    """The requested variable does not occur in the pattern."""


Path = tuple[int, ...]


@dataclass(frozen=True)
class Node:
    """Constructor node with an ordered tuple of children."""

    ctor: str
    children: tuple["Tree", ...] = ()


@dataclass(frozen=True)
class IntLeaf:
    value: int


@dataclass(frozen=True)
class StrLeaf:
    value: str


Tree = Union[Node, IntLeaf, StrLeaf]


@dataclass(frozen=True)
class Wildcard:
    """The don't-care pattern; marks excluded subtrees in a region."""


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class PNode:
    ctor: str
    args: tuple["Pattern", ...] = ()


@dataclass(frozen=True)
class PInt:
    value: int


@dataclass(frozen=True)
class PStr:
    value: str


Pattern = Union[Wildcard, Var, PNode, PInt, PStr]

WILDCARD = Wildcard()


@dataclass(frozen=True)
class Region:
    """A partial subtree: a variable-free pattern rooted at a path."""

    pattern: Pattern
    path: Path


@dataclass(frozen=True)
class Link:
    """A correspondence between a source region and a view region."""

    source: Region
    view: Region


LinkSet = frozenset  # frozenset[Link]

EMPTY_LINKS: LinkSet = frozenset()


def sel(t: Tree, p: Path) -> Tree:
    """Subtree of ``t`` at path ``p``; the empty path addresses the root."""
    cur = t
    for depth, i in enumerate(p):
        if not isinstance(cur, Node) or i < 0 or i >= len(cur.children):
            raise PathOutOfRange(f"path {list(p)} stops resolving at depth {depth}")
        cur = cur.children[i]
    return cur


def is_match(p: Pattern, t: Tree) -> bool:
    """True iff ``t`` agrees with ``p`` everywhere outside wildcards/variables."""
    if isinstance(p, (Wildcard, Var)):
        return True
    if isinstance(p, PInt):
        return isinstance(t, IntLeaf) and t.value == p.value
    if isinstance(p, PStr):
        return isinstance(t, StrLeaf) and t.value == p.value
    return (
        isinstance(t, Node)
        and t.ctor == p.ctor
        and len(t.children) == len(p.args)
        and all(is_match(q, c) for q, c in zip(p.args, t.children))
    )


def vars_of(p: Pattern) -> tuple[str, ...]:
    """Variable names of ``p`` in left-to-right occurrence order."""
    out: list[str] = []

    def walk(q: Pattern) -> None:
        if isinstance(q, Var):
            out.append(q.name)
        elif isinstance(q, PNode):
            for a in q.args:
                walk(a)

    walk(p)
    return tuple(out)


def decompose(p: Pattern, t: Tree) -> dict[str, Tree]:
    """Map every variable of ``p`` to the subtree of ``t`` it matches."""
    out: dict[str, Tree] = {}

    def walk(q: Pattern, u: Tree) -> None:
        if isinstance(q, Var):
            out[q.name] = u
        elif isinstance(q, Wildcard):
            pass
        elif isinstance(q, PInt):
            if not (isinstance(u, IntLeaf) and u.value == q.value):
                raise MatchFailure(f"expected integer {q.value}")
        elif isinstance(q, PStr):
            if not (isinstance(u, StrLeaf) and u.value == q.value):
                raise MatchFailure(f"expected string {q.value!r}")
        else:
            if not (isinstance(u, Node) and u.ctor == q.ctor and len(u.children) == len(q.args)):
                raise MatchFailure(f"tree does not match constructor {q.ctor}")
            for a, c in zip(q.args, u.children):
                walk(a, c)

    walk(p, t)
    return out


def reconstruct(p: Pattern, b: Mapping[str, Tree]) -> Tree:
    """Tree equal to ``p`` with every variable replaced per ``b``."""
    if isinstance(p, Wildcard):
        raise WildcardPresent("cannot reconstruct through a wildcard")
    if isinstance(p, Var):
        if p.name not in b:
            raise UnboundVariable(p.name)
        return b[p.name]
    if isinstance(p, PInt):
        return IntLeaf(p.value)
    if isinstance(p, PStr):
        return StrLeaf(p.value)
    return Node(p.ctor, tuple(reconstruct(a, b) for a in p.args))


def tree_to_pattern(t: Tree) -> Pattern:
    """The evident ground pattern matching exactly ``t``."""
    if isinstance(t, IntLeaf):
        return PInt(t.value)
    if isinstance(t, StrLeaf):
        return PStr(t.value)
    return PNode(t.ctor, tuple(tree_to_pattern(c) for c in t.children))


def fill_wildcards(p: Pattern, t: Tree) -> Pattern:
    """Replace the wildcards of ``p`` with the matching subtrees of ``t``."""
    if isinstance(p, Wildcard):
        return tree_to_pattern(t)
    if isinstance(p, Var):
        return p
    if isinstance(p, (PInt, PStr)):
        if not is_match(p, t):
            raise MatchFailure("literal pattern does not match tree")
        return p
    if not (isinstance(t, Node) and t.ctor == p.ctor and len(t.children) == len(p.args)):
        raise MatchFailure(f"tree does not match constructor {p.ctor}")
    return PNode(p.ctor, tuple(fill_wildcards(a, c) for a, c in zip(p.args, t.children)))


def erase_vars(p: Pattern) -> Pattern:
    """Replace every variable of ``p`` with a wildcard."""
    if isinstance(p, Var):
        return WILDCARD
    if isinstance(p, PNode):
        return PNode(p.ctor, tuple(erase_vars(a) for a in p.args))
    return p


def var_path(p: Pattern, x: str) -> Path:
    """Path from the root of ``p`` to the (unique) occurrence of variable ``x``."""

    def walk(q: Pattern, acc: Path) -> Path | None:
        if isinstance(q, Var) and q.name == x:
            return acc
        if isinstance(q, PNode):
            for i, a in enumerate(q.args):
                hit = walk(a, acc + (i,))
                if hit is not None:
                    return hit
        return None

    found = walk(p, ())
    if found is None:
        raise VariableAbsent(x)
    return found


def is_ground(p: Pattern) -> bool:
    """True iff ``p`` contains no wildcard and no variable."""
    if isinstance(p, (Wildcard, Var)):
        return False
    if isinstance(p, PNode):
        return all(is_ground(a) for a in p.args)
    return True


def region_contains(t: Tree, regions) -> bool:
    """True iff every region resolves in ``t`` and its pattern matches there."""
    for r in regions:
        try:
            sub = sel(t, r.path)
        except PathOutOfRange:
            return False
        if not is_match(r.pattern, sub):
            return False
    return True


def links_valid(t: Tree, u: Tree, ls) -> bool:
    """True iff ``t`` contains every source region and ``u`` every view region."""
    return region_contains(t, (l.source for l in ls)) and region_contains(
        u, (l.view for l in ls)
    )


def link_compose(ls1, ls2) -> LinkSet:
    """Relational composition of two link sets, matching on full region equality."""
    by_left: dict[Region, list[Region]] = {}
    for l in ls2:
        by_left.setdefault(l.source, []).append(l.view)
    return frozenset(
        Link(l.source, right) for l in ls1 for right in by_left.get(l.view, ())
    )


def link_converse(ls) -> LinkSet:
    """Converse relation: every link flipped."""
    return frozenset(Link(l.view, l.source) for l in ls)


def fst_projection(ls) -> frozenset:
    """Links with the source path dropped: the part put must preserve."""
    return frozenset((l.source.pattern, l.view) for l in ls)


def pattern_key(p: Pattern):
    """Total order key on patterns; fixes the canonical link ordering."""
    if isinstance(p, Wildcard):
        return (0,)
    if isinstance(p, Var):
        return (1, p.name)
    if isinstance(p, PInt):
        return (2, p.value)
    if isinstance(p, PStr):
        return (3, p.value)
    return (4, p.ctor, tuple(pattern_key(a) for a in p.args))


def canonical_links(ls) -> list[Link]:
    """Links sorted by source path, view path, then pattern order."""
    return sorted(
        ls,
        key=lambda l: (
            l.source.path,
            l.view.path,
            pattern_key(l.source.pattern),
            pattern_key(l.view.pattern),
        ),
    )


def tree_size(t: Tree) -> int:
    """Node count, leaves included."""
    if isinstance(t, Node):
        return 1 + sum(tree_size(c) for c in t.children)
    return 1


def tree_paths(t: Tree) -> Iterator[tuple[Path, Tree]]:
    """All (path, subtree) pairs of ``t`` in preorder."""
    stack: list[tuple[Path, Tree]] = [((), t)]
    while stack:
        path, cur = stack.pop()
        yield path, cur
        if isinstance(cur, Node):
            for i in range(len(cur.children) - 1, -1, -1):
                stack.append((path + (i,), cur.children[i]))
