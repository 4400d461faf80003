"""The derived lens: link-producing get, link-consuming put, and check.

``get`` pairs the computed view with a link set relating source regions to
view regions.  ``put`` rebuilds a source from a view and a link set, grabbing
the linked source region whenever a link ends at the current view root and
falling back to defaults otherwise.  ``check`` decides put's domain exactly:
``put`` succeeds if and only if ``check`` accepts.

The recursion mirrors the rule structure: at each view node either no input
link ends here (rebuild case: pick the first matching rule, preferring one
whose view pattern is not a bare variable) or some link does (retain case:
pick the link with the shortest source path, find the unique rule able to
generate its regions — the current relation first, then the other relations
sharing the view type — keep the region's content and recurse into the
holes).  Retained regions whose rule belongs to a different source type are
wrapped by the synthesized conversion chain for the two interchangeable
types.
"""

from __future__ import annotations

from dataclasses import dataclass

from .frontend import Relation, Rule, ValidatedProgram, normalize_type_name
from .schema import IllTyped, PRIMITIVES, check_tree_type
from .text import render_path, render_pattern
from .trees import (
    EMPTY_LINKS,
    Link,
    LinkSet,
    Path,
    Pattern,
    PInt,
    PNode,
    PStr,
    Region,
    Tree,
    Var,
    Wildcard,
    decompose,
    erase_vars,
    fill_wildcards,
    is_ground,
    is_match,
    pattern_key,
    reconstruct,
    sel,
    PathOutOfRange,
)


class EngineError(Exception):
    pass


class IllTypedInput(EngineError):
    """An input tree does not type-check at the expected type."""


class UnknownRelation(EngineError):
    """The requested (source, view) pair is not declared by the program."""


@dataclass
class CheckFailure:
    """Why check rejected, anchored at a view path for CLI reporting."""

    code: str
    message: str
    view_path: Path
    link: Link | None = None

    def __str__(self) -> str:
        loc = f"at view path {render_path(self.view_path)}"
        out = f"{self.code} {loc}: {self.message}"
        if self.link is not None:
            from .text import render_link

            out += f" [{render_link(self.link)}]"
        return out


class InvalidLinks(EngineError):
    """put rejected its input links; carries the check failure."""

    def __init__(self, failure: CheckFailure):
        super().__init__(str(failure))
        self.failure = failure


def divide(prefix: Path, ls) -> LinkSet:
    """Links whose view path starts with ``prefix``, with the prefix stripped."""
    n = len(prefix)
    return frozenset(
        Link(l.source, Region(l.view.pattern, l.view.path[n:]))
        for l in ls
        if l.view.path[:n] == prefix
    )


def add_v_prefix(prefix: Path, ls) -> LinkSet:
    """Inverse of ``divide`` on the view path."""
    return frozenset(
        Link(l.source, Region(l.view.pattern, prefix + l.view.path)) for l in ls
    )


def _merge_region(rule_source: Pattern, region: Pattern) -> Pattern | None:
    """Fill the wildcards of ``rule_source`` from ``region`` if shapes agree.

    ``region`` must look like the rule's source pattern after a match: a
    wildcard exactly at each variable position and ground content at each
    wildcard position.  Returns the rule pattern with its wildcards replaced
    by that ground content (variables kept), or None when incompatible.
    """
    if isinstance(rule_source, Var):
        return rule_source if isinstance(region, Wildcard) else None
    if isinstance(rule_source, Wildcard):
        return region if is_ground(region) else None
    if isinstance(rule_source, (PInt, PStr)):
        return rule_source if region == rule_source else None
    if not (
        isinstance(region, PNode)
        and region.ctor == rule_source.ctor
        and len(region.args) == len(rule_source.args)
    ):
        return None
    merged = []
    for a, b in zip(rule_source.args, region.args):
        m = _merge_region(a, b)
        if m is None:
            return None
        merged.append(m)
    return PNode(rule_source.ctor, tuple(merged))


def _select_rebuild_rule(rel: Relation, v: Tree) -> Rule | None:
    """First rule whose view pattern matches ``v``, preferring non-bare ones."""
    first_bare: Rule | None = None
    for rule in rel.rules:
        if is_match(rule.view, v):
            if rule.bare_view_var is None:
                return rule
            if first_bare is None:
                first_bare = rule
    return first_bare


def _generating_rules(
    vp: ValidatedProgram, sty: str, vty: str, l: Link
) -> list[tuple[Relation, Rule, Pattern]]:
    """Rules able to generate link ``l`` at view type ``vty``.

    The current relation's rules take precedence: a link produced here by get
    always resolves to them (uniquely, by source disjointness).  Only when the
    current relation cannot have generated the link are the other relations
    with the same view type searched — that is the retained-foreign-region
    case, which a conversion must then bridge.
    """
    current, foreign = [], []
    for rel in vp.relations_with_view(vty):
        for rule in rel.rules:
            if rule.view_erased != l.view.pattern:
                continue
            merged = _merge_region(rule.source, l.source.pattern)
            if merged is not None:
                bucket = current if rel.source_type == sty else foreign
                bucket.append((rel, rule, merged))
    return current if current else foreign


def _shortest_root_link(roots: list[Link]) -> Link:
    # Shortest source path wins; remaining ties resolve structurally so the
    # choice never depends on set iteration order.
    return min(
        roots,
        key=lambda l: (
            len(l.source.path),
            l.source.path,
            pattern_key(l.source.pattern),
            pattern_key(l.view.pattern),
        ),
    )


def _get(vp: ValidatedProgram, sty: str, vty: str, s: Tree) -> tuple[Tree, LinkSet]:
    if sty in PRIMITIVES:
        return s, EMPTY_LINKS
    rel = vp.relation(sty, vty)
    if rel is None:
        raise UnknownRelation(f"{sty} <---> {vty}")
    rule = next((r for r in rel.rules if is_match(r.source, s)), None)
    if rule is None:
        raise IllTypedInput(f"no rule of {sty} <---> {vty} matches the source")
    bindings = decompose(rule.source, s)
    views: dict[str, Tree] = {}
    links: set[Link] = set()
    for x in rule.variables:
        xv, xls = _get(vp, rule.var_src_type[x], rule.var_view_type[x], bindings[x])
        views[x] = xv
        sp, vpth = rule.var_src_path[x], rule.var_view_path[x]
        for l in xls:
            links.add(
                Link(
                    Region(l.source.pattern, sp + l.source.path),
                    Region(l.view.pattern, vpth + l.view.path),
                )
            )
    view = reconstruct(rule.view, views)
    links.add(
        Link(Region(erase_vars(fill_wildcards(rule.source, s)), ()), Region(rule.view_erased, ()))
    )
    return view, frozenset(links)


def _check(
    vp: ValidatedProgram,
    sty: str,
    vty: str,
    s: Tree,
    v: Tree,
    ls,
    chain: int,
    at: Path,
) -> CheckFailure | None:
    if sty in PRIMITIVES:
        if ls:
            return CheckFailure(
                "E-link-at-leaf", "links may not end inside a primitive value", at, next(iter(ls))
            )
        return None
    rel = vp.relation(sty, vty)
    if rel is None:
        return CheckFailure("E-no-relation", f"no relation {sty} <---> {vty}", at)
    roots = [l for l in ls if l.view.path == ()]
    if not roots:
        rule = _select_rebuild_rule(rel, v)
        if rule is None:
            return CheckFailure(
                "E-no-rule", f"no view pattern of {sty} <---> {vty} matches here", at
            )
        if rule.bare_view_var is not None:
            # Bounded rounds: consecutive bare-variable selections consume no
            # view constructor, so more than one round per relation definition
            # (plus one) proves a cycle.
            if chain + 1 > vp.bare_chain_bound:
                return CheckFailure(
                    "E-sugar-cycle",
                    "bare-variable rules recurse without consuming the view",
                    at,
                )
            x = rule.bare_view_var
            return _check(vp, rule.var_src_type[x], vty, s, v, ls, chain + 1, at)
        for l in ls:
            if not any(
                l.view.path[: len(rule.var_view_path[x])] == rule.var_view_path[x]
                for x in rule.variables
            ):
                return CheckFailure(
                    "E-stray-link", "link is not scoped under any rule variable", at, l
                )
        vb = decompose(rule.view, v)
        for x in rule.variables:
            vpth = rule.var_view_path[x]
            f = _check(
                vp,
                rule.var_src_type[x],
                rule.var_view_type[x],
                s,
                vb[x],
                divide(vpth, ls),
                0,
                at + vpth,
            )
            if f is not None:
                return f
        return None

    l = _shortest_root_link(roots)
    try:
        ssub = sel(s, l.source.path)
    except PathOutOfRange:
        return CheckFailure("E-dangling-source", "source path does not resolve", at, l)
    if not is_match(l.source.pattern, ssub):
        return CheckFailure(
            "E-source-mismatch",
            f"source does not contain region {render_pattern(l.source.pattern)}",
            at,
            l,
        )
    if not is_match(l.view.pattern, v):
        return CheckFailure(
            "E-view-mismatch",
            f"view does not contain region {render_pattern(l.view.pattern)}",
            at,
            l,
        )
    cands = _generating_rules(vp, sty, vty, l)
    if not cands:
        return CheckFailure(
            "E-no-generating-rule", "no rule can generate this link", at, l
        )
    if len(cands) > 1:
        return CheckFailure(
            "E-ambiguous-link", "more than one rule can generate this link", at, l
        )
    rel2, rule, _merged = cands[0]
    if rel2.source_type != sty and (rel2.source_type, sty, vty) not in vp.inj_table:
        return CheckFailure(
            "E-no-conversion",
            f"region of type {rel2.source_type} cannot be converted to {sty}",
            at,
            l,
        )
    rest = ls - {l}
    for other in rest:
        if not any(
            other.view.path[: len(rule.var_view_path[x])] == rule.var_view_path[x]
            for x in rule.variables
        ):
            return CheckFailure(
                "E-overlapping-regions",
                "second link ends inside this view region",
                at,
                other,
            )
    vb = decompose(rule.view, v)
    for x in rule.variables:
        vpth = rule.var_view_path[x]
        f = _check(
            vp,
            rule.var_src_type[x],
            rule.var_view_type[x],
            s,
            vb[x],
            divide(vpth, rest),
            0,
            at + vpth,
        )
        if f is not None:
            return f
    return None


def _apply_inj(vp: ValidatedProgram, frm: str, to: str, vty: str, t: Tree) -> Tree:
    if frm == to:
        return t
    steps = vp.inj_table.get((frm, to, vty))
    if steps is None:
        raise InvalidLinks(
            CheckFailure("E-no-conversion", f"no conversion from {frm} to {to}", ())
        )
    for step in steps:
        t = reconstruct(step.pattern, {step.var: t})
    return t


def _put(
    vp: ValidatedProgram, sty: str, vty: str, s: Tree, v: Tree, ls, chain: int
) -> Tree:
    if sty in PRIMITIVES:
        if ls:
            raise InvalidLinks(
                CheckFailure("E-link-at-leaf", "link ends inside a primitive value", ())
            )
        return v
    rel = vp.relation(sty, vty)
    if rel is None:
        raise UnknownRelation(f"{sty} <---> {vty}")
    roots = [l for l in ls if l.view.path == ()]
    if not roots:
        rule = _select_rebuild_rule(rel, v)
        if rule is None:
            raise InvalidLinks(CheckFailure("E-no-rule", "no applicable rule", ()))
        if rule.bare_view_var is not None and chain + 1 > vp.bare_chain_bound:
            raise InvalidLinks(CheckFailure("E-sugar-cycle", "unbounded rule chain", ()))
        bump = chain + 1 if rule.bare_view_var is not None else 0
        vb = decompose(rule.view, v)
        parts = {
            x: _put(
                vp,
                rule.var_src_type[x],
                rule.var_view_type[x],
                s,
                vb[x],
                divide(rule.var_view_path[x], ls),
                bump,
            )
            for x in rule.variables
        }
        return reconstruct(rule.source_defaulted, parts)

    l = _shortest_root_link(roots)
    cands = _generating_rules(vp, sty, vty, l)
    if len(cands) != 1:
        raise InvalidLinks(
            CheckFailure("E-no-generating-rule", "link has no unique generating rule", (), l)
        )
    rel2, rule, merged = cands[0]
    rest = ls - {l}
    vb = decompose(rule.view, v)
    parts = {
        x: _put(
            vp,
            rule.var_src_type[x],
            rule.var_view_type[x],
            s,
            vb[x],
            divide(rule.var_view_path[x], rest),
            0,
        )
        for x in rule.variables
    }
    core = reconstruct(merged, parts)
    return _apply_inj(vp, rel2.source_type, sty, vty, core)


@dataclass
class LensHandle:
    """A validated relation plus the derived get/put/check functions."""

    program: ValidatedProgram
    source_type: str
    view_type: str

    @property
    def source_schema(self):
        return self.program.schema

    @property
    def view_schema(self):
        return self.program.schema

    def get(self, s: Tree) -> tuple[Tree, LinkSet]:
        """View of ``s`` plus the links relating source and view regions."""
        self._require_source_type(s)
        return _get(self.program, self.source_type, self.view_type, s)

    def put(self, s: Tree, v: Tree, ls) -> Tree:
        """New source retaining every linked region; rejects invalid links."""
        self._require_view_type(v)
        failure = _check(self.program, self.source_type, self.view_type, s, v, frozenset(ls), 0, ())
        if failure is not None:
            raise InvalidLinks(failure)
        return _put(self.program, self.source_type, self.view_type, s, v, frozenset(ls), 0)

    def check(self, s: Tree, v: Tree, ls) -> bool:
        return self.check_explain(s, v, ls) is None

    def check_explain(self, s: Tree, v: Tree, ls) -> CheckFailure | None:
        """None when put would succeed, otherwise the first failure found."""
        try:
            check_tree_type(self.program.schema, self.view_type, v)
        except IllTyped as e:
            return CheckFailure("E-ill-typed-view", str(e), ())
        return _check(self.program, self.source_type, self.view_type, s, v, frozenset(ls), 0, ())

    def _require_view_type(self, v: Tree) -> None:
        try:
            check_tree_type(self.program.schema, self.view_type, v)
        except IllTyped as e:
            raise IllTypedInput(f"view: {e}") from e

    def _require_source_type(self, s: Tree) -> None:
        try:
            check_tree_type(self.program.schema, self.source_type, s)
        except IllTyped as e:
            raise IllTypedInput(f"source: {e}") from e


def lens(program: ValidatedProgram, source_type: str, view_type: str) -> LensHandle:
    """Resolve type names and build a handle; the relation must be declared."""
    sty = normalize_type_name(program, source_type)
    vty = normalize_type_name(program, view_type)
    if sty in PRIMITIVES and sty == vty:
        return LensHandle(program, sty, vty)
    if program.relation(sty, vty) is None:
        raise UnknownRelation(f"{sty} <---> {vty}")
    return LensHandle(program, sty, vty)
