"""Randomized law verification: generators, trials, and verdict reports.

Each trial generates a well-typed source, runs the lens round trip, applies a
random (type-correct) edit script to the view with link maintenance, and
checks: Hippocraticness (put of an unmodified get is the identity),
Correctness (the written-back source presents exactly the edited view),
Retentiveness (every input link's source pattern and view region reappear in
the new links), agreement of check with get, and put-succeeds-iff-check-true,
including a deliberately corrupted link set per trial.

Reports are deterministic per seed, bit for bit; failures carry a
script-prefix-minimized counterexample.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .edits import (
    Copy,
    Delete,
    EditContext,
    EditOp,
    EditState,
    Insert,
    Move,
    Replace,
    Swap,
    apply_script,
    render_script,
)
from .engine import InvalidLinks
from .schema import Schema, check_tree_type, default_value
from .text import render_links, render_tree
from .trees import (
    IntLeaf,
    Link,
    Node,
    PNode,
    Region,
    StrLeaf,
    Tree,
    canonical_links,
    fst_projection,
)

_STRINGS = ("", "a", "b", "xy", "note", "k")

LAWS = ("hippocratic", "correct", "retentive", "check_get", "put_iff_check", "adversarial")


def gen_tree(sch: Schema, ty: str, size_bound: int, seed: int) -> Tree:
    """Well-typed tree of ``ty`` with at most ``size_bound`` nodes."""
    rng = random.Random(seed)
    sizes = sch.min_sizes()
    return _gen(sch, sch.resolve(ty), max(size_bound, sizes.get(sch.resolve(ty), 1)), rng, sizes)


def _gen(sch: Schema, ty: str, budget: int, rng: random.Random, sizes: dict[str, int]) -> Tree:
    if ty == "Int":
        return IntLeaf(rng.randint(-9, 99))
    if ty == "String":
        return StrLeaf(rng.choice(_STRINGS))
    fitting = [
        c
        for c in sch.constructors(ty)
        if all(sch.resolve(a) in sizes for a in c.arg_types)
        and 1 + sum(sizes[sch.resolve(a)] for a in c.arg_types) <= budget
    ]
    if not fitting:
        return default_value(sch, ty)
    ctor = rng.choice(fitting)
    args = [sch.resolve(a) for a in ctor.arg_types]
    slack = budget - 1 - sum(sizes[a] for a in args)
    children = []
    for a in args:
        extra = rng.randint(0, slack)
        slack -= extra
        children.append(_gen(sch, a, sizes[a] + extra, rng, sizes))
    return Node(ctor.name, tuple(children))


def _list_shapes(sch: Schema) -> dict[str, tuple[str, str]]:
    """Types with a Cons/Nil spine shape: type -> (cons name, element type)."""
    out: dict[str, tuple[str, str]] = {}
    for ty, ctors in sch.types.items():
        cons = next(
            (c for c in ctors if len(c.arg_types) == 2 and sch.resolve(c.arg_types[1]) == ty),
            None,
        )
        nil = next((c for c in ctors if not c.arg_types), None)
        if cons is not None and nil is not None:
            out[ty] = (cons.name, sch.resolve(cons.arg_types[0]))
    return out


def _spine_length(view: Tree, path) -> int:
    from .trees import sel

    node = sel(view, path)
    n = 0
    while isinstance(node, Node) and len(node.children) == 2:
        n += 1
        node = node.children[1]
    return n


def gen_script(
    sch: Schema, view_type: str, view: Tree, length: int, seed: int
) -> list[EditOp]:
    """Random type-correct edit script; paths are drawn from the evolving view."""
    rng = random.Random(seed)
    ctx = EditContext(sch, view_type)
    lists = _list_shapes(sch)
    ops: list[EditOp] = []
    state = EditState(view, frozenset())
    for _ in range(length):
        typed = check_tree_type(sch, view_type, state.view)
        positions = sorted(typed.types.items())
        by_type: dict[str, list] = {}
        for p, ty in positions:
            by_type.setdefault(ty, []).append(p)
        kinds = ["replace"]
        pairs = [
            (a, b)
            for ps in by_type.values()
            for a in ps
            for b in ps
            if a != b and a != b[: len(a)] and b != a[: len(b)]
        ]
        if pairs:
            kinds += ["copy", "move", "swap"]
        spines = [
            (p, ty) for p, ty in positions if ty in lists and _is_spine(state.view, p)
        ]
        if spines:
            kinds.append("insert")
            if any(_spine_length(state.view, p) > 0 for p, _ in spines):
                kinds.append("delete")
        kind = rng.choice(kinds)
        op: EditOp
        if kind == "replace":
            p, ty = positions[rng.randrange(len(positions))]
            op = Replace(p, _gen_budget(sch, ty, rng))
        elif kind in ("copy", "move", "swap"):
            frm, to = pairs[rng.randrange(len(pairs))]
            if kind == "copy":
                op = Copy(frm, to)
            elif kind == "swap":
                op = Swap(frm, to)
            else:
                op = Move(frm, to, _gen_budget(sch, typed.types[frm], rng))
        elif kind == "insert":
            p, ty = spines[rng.randrange(len(spines))]
            n = _spine_length(state.view, p)
            _cons, elem_ty = lists[ty]
            op = Insert(p, rng.randint(0, n), _gen_budget(sch, elem_ty, rng))
        else:
            candidates = [p for p, _ in spines if _spine_length(state.view, p) > 0]
            p = candidates[rng.randrange(len(candidates))]
            op = Delete(p, rng.randrange(_spine_length(state.view, p)))
        state = apply_script(state, [op], ctx)
        ops.append(op)
    return ops


def _is_spine(view: Tree, path) -> bool:
    from .trees import sel

    node = sel(view, path)
    cons = None
    while True:
        if not isinstance(node, Node):
            return False
        if len(node.children) == 0:
            return True
        if len(node.children) != 2 or (cons is not None and node.ctor != cons):
            return False
        cons = node.ctor
        node = node.children[1]


def _gen_budget(sch: Schema, ty: str, rng: random.Random) -> Tree:
    sizes = sch.min_sizes()
    ty = sch.resolve(ty)
    low = sizes.get(ty, 1)
    return _gen(sch, ty, low + rng.randint(0, 6), rng, sizes)


def corrupt_links(ls, seed: int):
    """Replace one link's view pattern with an impossible region."""
    ordered = canonical_links(ls)
    if not ordered:
        return frozenset({Link(Region(PNode("ZzBogus"), ()), Region(PNode("ZzBogus"), ()))})
    rng = random.Random(seed)
    victim = ordered[rng.randrange(len(ordered))]
    bad = Link(victim.source, Region(PNode("ZzBogus"), victim.view.path))
    return frozenset(l for l in ls if l != victim) | {bad}


@dataclass
class TrialReport:
    index: int
    seed: int
    verdicts: dict[str, bool]
    accepted: bool | None = None
    counterexample: dict | None = None

    def failed_laws(self) -> list[str]:
        return [k for k, ok in self.verdicts.items() if not ok]


@dataclass
class LawSummary:
    """Aggregated verdicts of a law run; deterministic per seed."""

    relation: str
    trials: int
    seed: int
    size_bound: int
    script_len: int
    counts: dict[str, list[int]] = field(default_factory=dict)
    accepted: int = 0
    rejected: int = 0
    failures: list[TrialReport] = field(default_factory=list)

    def record(self, law: str, ok: bool) -> None:
        passed, run = self.counts.setdefault(law, [0, 0])
        self.counts[law] = [passed + (1 if ok else 0), run + 1]

    @property
    def ok(self) -> bool:
        return all(passed == run for passed, run in self.counts.values())

    def to_text(self) -> str:
        lines = [f"relation {self.relation}: {self.trials} trials, seed {self.seed}"]
        for law in LAWS:
            if law in self.counts:
                passed, run = self.counts[law]
                lines.append(f"  {law}: {passed}/{run} {'ok' if passed == run else 'FAILED'}")
        lines.append(f"  edited views accepted by check: {self.accepted}/{self.accepted + self.rejected}")
        for f in self.failures[:5]:
            lines.append(f"  counterexample (trial {f.index}, seed {f.seed}): {sorted(f.failed_laws())}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "relation": self.relation,
                "trials": self.trials,
                "seed": self.seed,
                "size_bound": self.size_bound,
                "script_len": self.script_len,
                "counts": {k: self.counts[k] for k in sorted(self.counts)},
                "accepted": self.accepted,
                "rejected": self.rejected,
                "failures": [
                    {
                        "index": f.index,
                        "seed": f.seed,
                        "failed": sorted(f.failed_laws()),
                        "counterexample": f.counterexample,
                    }
                    for f in self.failures
                ],
            },
            indent=2,
            sort_keys=True,
        ) + "\n"


def _minimized(lens, s: Tree, v, ls, ops, ctx) -> dict:
    """Shortest failing script prefix, as rendered text."""
    for k in range(len(ops) + 1):
        prefix = ops[:k]
        try:
            st = apply_script(EditState(v, ls), prefix, ctx)
        except Exception:
            break
        if not _edit_laws_hold(lens, s, st):
            return {
                "source": render_tree(s),
                "script": render_script(prefix),
                "links": render_links(st.links),
            }
    return {"source": render_tree(s), "script": render_script(ops), "links": ""}


def _edit_laws_hold(lens, s: Tree, st: EditState) -> bool:
    if not lens.check(s, st.view, st.links):
        return True  # rejected trials make no law claims
    try:
        s2 = lens.put(s, st.view, st.links)
    except InvalidLinks:
        return False
    v2, ls2 = lens.get(s2)
    return v2 == st.view and fst_projection(st.links) <= fst_projection(ls2)


def verify_laws(
    lens,
    trials: int,
    size_bound: int = 40,
    script_len: int = 5,
    seed: int = 0,
    adversarial: bool = True,
) -> LawSummary:
    """Run the three lens laws plus check soundness over seeded trials."""
    base = random.Random(seed)
    summary = LawSummary(
        relation=f"{lens.source_type} <---> {lens.view_type}",
        trials=trials,
        seed=seed,
        size_bound=size_bound,
        script_len=script_len,
    )
    ctx = EditContext(lens.view_schema, lens.view_type)
    for i in range(trials):
        trial_seed = base.randrange(1 << 60)
        s = gen_tree(lens.source_schema, lens.source_type, size_bound, trial_seed)
        v, ls = lens.get(s)
        report = TrialReport(index=i, seed=trial_seed, verdicts={})

        report.verdicts["check_get"] = lens.check(s, v, ls)
        try:
            report.verdicts["hippocratic"] = lens.put(s, v, ls) == s
        except InvalidLinks:
            report.verdicts["hippocratic"] = False

        if script_len > 0:
            ops = gen_script(lens.view_schema, lens.view_type, v, 1 + trial_seed % script_len, trial_seed + 1)
            st = apply_script(EditState(v, ls), ops, ctx)
            accepted = lens.check(s, st.view, st.links)
            report.accepted = accepted
            if accepted:
                summary.accepted += 1
                try:
                    s2 = lens.put(s, st.view, st.links)
                    v2, ls2 = lens.get(s2)
                    report.verdicts["correct"] = v2 == st.view
                    report.verdicts["retentive"] = fst_projection(st.links) <= fst_projection(ls2)
                    report.verdicts["put_iff_check"] = True
                except InvalidLinks:
                    report.verdicts["correct"] = False
                    report.verdicts["retentive"] = False
                    report.verdicts["put_iff_check"] = False
            else:
                summary.rejected += 1
                try:
                    lens.put(s, st.view, st.links)
                    report.verdicts["put_iff_check"] = False
                except InvalidLinks:
                    report.verdicts["put_iff_check"] = True
            if not all(report.verdicts.get(k, True) for k in ("correct", "retentive", "put_iff_check")):
                report.counterexample = _minimized(lens, s, v, ls, ops, ctx)

        if adversarial:
            bad = corrupt_links(ls, trial_seed + 2)
            rejected = not lens.check(s, v, bad)
            try:
                lens.put(s, v, bad)
                put_rejected = False
            except InvalidLinks:
                put_rejected = True
            report.verdicts["adversarial"] = rejected and put_rejected

        for law, ok in report.verdicts.items():
            summary.record(law, ok)
        if report.failed_laws():
            if report.counterexample is None:
                report.counterexample = {"source": render_tree(s), "script": "", "links": ""}
            summary.failures.append(report)
    return summary
