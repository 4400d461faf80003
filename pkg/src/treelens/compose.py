"""Sequential composition of two lenses with link-relation plumbing.

The composite's get runs both gets and composes the link relations; its put
threads links through the middle type in eight steps: derive intermediate
links for the inner put from the input links and the first get's links, run
the inner put, re-read the updated middle's links, and use their composition
with the input links to drive the outer put.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import CheckFailure, InvalidLinks, LensHandle
from .trees import LinkSet, Tree, link_compose, link_converse


class CompositionTypeError(Exception):
    """The two lenses do not meet in the middle type."""


@dataclass
class CompositeLens:
    """Two lenses A <---> B and B <---> C run in sequence."""

    first: LensHandle
    second: LensHandle

    def __post_init__(self) -> None:
        if self.first.view_type != self.second.source_type:
            raise CompositionTypeError(
                f"view type {self.first.view_type} of the first lens differs from "
                f"source type {self.second.source_type} of the second"
            )

    @property
    def source_type(self) -> str:
        return self.first.source_type

    @property
    def view_type(self) -> str:
        return self.second.view_type

    @property
    def source_schema(self):
        return self.first.program.schema

    @property
    def view_schema(self):
        return self.second.program.schema

    def get(self, a: Tree) -> tuple[Tree, LinkSet]:
        b, ls_ab = self.first.get(a)
        c, ls_bc = self.second.get(b)
        return c, link_compose(ls_ab, ls_bc)

    def put(self, a: Tree, c2: Tree, ls_ac2) -> Tree:
        ls_ac2 = frozenset(ls_ac2)
        b, ls_ab = self.first.get(a)
        ls_bc2 = link_converse(link_compose(link_converse(ls_ac2), ls_ab))
        b2 = self.second.put(b, c2, ls_bc2)
        _, ls_b2c2 = self.second.get(b2)
        ls_ab2 = link_compose(ls_ac2, link_converse(ls_b2c2))
        return self.first.put(a, b2, ls_ab2)

    def check(self, a: Tree, c2: Tree, ls_ac2) -> bool:
        return self.check_explain(a, c2, ls_ac2) is None

    def check_explain(self, a: Tree, c2: Tree, ls_ac2) -> CheckFailure | None:
        """Accept exactly when ``put`` would succeed (both inner puts accept)."""
        ls_ac2 = frozenset(ls_ac2)
        b, ls_ab = self.first.get(a)
        ls_bc2 = link_converse(link_compose(link_converse(ls_ac2), ls_ab))
        failure = self.second.check_explain(b, c2, ls_bc2)
        if failure is not None:
            return failure
        try:
            b2 = self.second.put(b, c2, ls_bc2)
        except InvalidLinks as e:  # pragma: no cover - check above rules this out
            return e.failure
        _, ls_b2c2 = self.second.get(b2)
        ls_ab2 = link_compose(ls_ac2, link_converse(ls_b2c2))
        return self.first.check_explain(a, b2, ls_ab2)
