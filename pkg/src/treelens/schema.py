"""Type declarations, schema-directed typing, and default-value synthesis.

A schema maps type names to ordered constructor lists over the two built-in
primitive types ``Int`` and ``String``.  Generic declarations are
monomorphized by the frontend before they reach a ``Schema``; here every type
name is ground (e.g. ``List Person``).  Declared synonyms resolve to their
target before any lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .trees import (
    IntLeaf,
    Node,
    Path,
    Pattern,
    PInt,
    PNode,
    PStr,
    StrLeaf,
    Tree,
    Var,
    Wildcard,
)

INT = "Int"
STRING = "String"
PRIMITIVES = (INT, STRING)


class SchemaError(Exception):
    """Base class for schema construction and typing failures."""


class UnknownType(SchemaError):
    pass


class NoFiniteDefault(SchemaError):
    """Every constructor of the type recurses; no finite value exists."""


class IllTyped(SchemaError):
    """First position where a tree or pattern disagrees with the schema."""

    def __init__(self, path: Path, expected: str, found: str):
        super().__init__(f"at {list(path)}: expected {expected}, found {found}")
        self.path = path
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class Constructor:
    name: str
    arg_types: tuple[str, ...]


@dataclass
class Schema:
    """Ordered map from ground type name to constructors, plus synonyms."""

    types: dict[str, tuple[Constructor, ...]] = field(default_factory=dict)
    synonyms: dict[str, str] = field(default_factory=dict)

    def resolve(self, name: str) -> str:
        seen = set()
        while name in self.synonyms:
            if name in seen:
                raise UnknownType(f"cyclic type synonym {name}")
            seen.add(name)
            name = self.synonyms[name]
        return name

    def is_primitive(self, name: str) -> bool:
        return self.resolve(name) in PRIMITIVES

    def constructors(self, name: str) -> tuple[Constructor, ...]:
        name = self.resolve(name)
        if name in PRIMITIVES:
            raise UnknownType(f"{name} is primitive and has no constructors")
        if name not in self.types:
            raise UnknownType(name)
        return self.types[name]

    def constructor(self, ty: str, ctor: str) -> Constructor | None:
        for c in self.constructors(ty):
            if c.name == ctor:
                return c
        return None

    def owner_of(self, ctor: str) -> str | None:
        """Some declared type owning ``ctor``, for diagnostics."""
        for name, ctors in self.types.items():
            if any(c.name == ctor for c in ctors):
                return name
        return None

    def min_sizes(self) -> dict[str, int]:
        """Least node count of a value of each type (least fixed point)."""
        sizes: dict[str, int] = {INT: 1, STRING: 1}
        changed = True
        while changed:
            changed = False
            for name, ctors in self.types.items():
                best = sizes.get(name)
                for c in ctors:
                    args = [sizes.get(self.resolve(a)) for a in c.arg_types]
                    if any(a is None for a in args):
                        continue
                    cand = 1 + sum(args)  # type: ignore[arg-type]
                    if best is None or cand < best:
                        best = cand
                if best is not None and sizes.get(name) != best:
                    sizes[name] = best
                    changed = True
        return sizes


@dataclass
class TypedTree:
    """A tree together with its type annotation at every position."""

    tree: Tree
    root_type: str
    types: dict[Path, str]

    def type_at(self, path: Path) -> str:
        return self.types[path]


@dataclass
class TypedPattern:
    """A pattern together with its type annotation at every position."""

    pattern: Pattern
    root_type: str
    types: dict[Path, str]

    def type_at(self, path: Path) -> str:
        return self.types[path]


def _found_name(sch: Schema, t: Tree | Pattern) -> str:
    if isinstance(t, (IntLeaf, PInt)):
        return INT
    if isinstance(t, (StrLeaf, PStr)):
        return STRING
    ctor = t.ctor  # type: ignore[union-attr]
    owner = sch.owner_of(ctor)
    return owner if owner is not None else f"constructor {ctor}"


def check_tree_type(sch: Schema, ty: str, t: Tree) -> TypedTree:
    """Annotate ``t`` against ``ty`` or fail with the first offending path."""
    root = sch.resolve(ty)
    types: dict[Path, str] = {}

    def walk(expected: str, u: Tree, path: Path) -> None:
        types[path] = expected
        if expected == INT:
            if not isinstance(u, IntLeaf):
                raise IllTyped(path, expected, _found_name(sch, u))
            return
        if expected == STRING:
            if not isinstance(u, StrLeaf):
                raise IllTyped(path, expected, _found_name(sch, u))
            return
        if expected not in sch.types:
            raise UnknownType(expected)
        if not isinstance(u, Node):
            raise IllTyped(path, expected, _found_name(sch, u))
        ctor = sch.constructor(expected, u.ctor)
        if ctor is None:
            raise IllTyped(path, expected, _found_name(sch, u))
        if len(ctor.arg_types) != len(u.children):
            raise IllTyped(
                path, expected, f"{u.ctor} applied to {len(u.children)} argument(s)"
            )
        for i, (a, c) in enumerate(zip(ctor.arg_types, u.children)):
            walk(sch.resolve(a), c, path + (i,))

    walk(root, t, ())
    return TypedTree(t, root, types)


def check_pattern_type(sch: Schema, ty: str, p: Pattern) -> TypedPattern:
    """Annotate ``p`` against ``ty``; wildcards and variables take the demanded type."""
    root = sch.resolve(ty)
    types: dict[Path, str] = {}

    def walk(expected: str, q: Pattern, path: Path) -> None:
        types[path] = expected
        if isinstance(q, (Wildcard, Var)):
            return
        if expected == INT:
            if not isinstance(q, PInt):
                raise IllTyped(path, expected, _found_name(sch, q))
            return
        if expected == STRING:
            if not isinstance(q, PStr):
                raise IllTyped(path, expected, _found_name(sch, q))
            return
        if expected not in sch.types:
            raise UnknownType(expected)
        if not isinstance(q, PNode):
            raise IllTyped(path, expected, _found_name(sch, q))
        ctor = sch.constructor(expected, q.ctor)
        if ctor is None:
            raise IllTyped(path, expected, _found_name(sch, q))
        if len(ctor.arg_types) != len(q.args):
            raise IllTyped(
                path, expected, f"{q.ctor} applied to {len(q.args)} argument(s)"
            )
        for i, (a, c) in enumerate(zip(ctor.arg_types, q.args)):
            walk(sch.resolve(a), c, path + (i,))

    walk(root, p, ())
    return TypedPattern(p, root, types)


def default_value(sch: Schema, ty: str) -> Tree:
    """Minimum-size well-typed tree of ``ty``; ties go to declaration order."""
    name = sch.resolve(ty)
    if name == INT:
        return IntLeaf(0)
    if name == STRING:
        return StrLeaf("")
    sizes = sch.min_sizes()
    return _build_default(sch, name, sizes)


def _build_default(sch: Schema, name: str, sizes: dict[str, int]) -> Tree:
    if name == INT:
        return IntLeaf(0)
    if name == STRING:
        return StrLeaf("")
    if name not in sizes:
        raise NoFiniteDefault(name)
    best: Constructor | None = None
    for c in sch.constructors(name):
        args = [sizes.get(sch.resolve(a)) for a in c.arg_types]
        if any(a is None for a in args):
            continue
        if best is None and 1 + sum(args) == sizes[name]:  # type: ignore[arg-type]
            best = c
    if best is None:
        raise NoFiniteDefault(name)
    return Node(
        best.name,
        tuple(_build_default(sch, sch.resolve(a), sizes) for a in best.arg_types),
    )


def fill_wildcards_default(tp: TypedPattern, sch: Schema) -> Pattern:
    """Replace every wildcard of an annotated pattern by its type's default."""
    from .trees import tree_to_pattern

    def walk(q: Pattern, path: Path) -> Pattern:
        if isinstance(q, Wildcard):
            return tree_to_pattern(default_value(sch, tp.type_at(path)))
        if isinstance(q, PNode):
            return PNode(
                q.ctor, tuple(walk(a, path + (i,)) for i, a in enumerate(q.args))
            )
        return q

    return walk(tp.pattern, ())
