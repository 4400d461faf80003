from __future__ import annotations

from pathlib import Path

import pytest

from treelens import lens, load_program, parse_tree

EXAMPLES = Path(__file__).resolve().parent.parent / "lens_examples"


def example_text(name: str) -> str:
    return (EXAMPLES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def arith():
    return load_program(example_text("arith.lens"), "arith.lens")


@pytest.fixture(scope="session")
def arith_expr(arith):
    return lens(arith, "Expr", "Arith")


@pytest.fixture(scope="session")
def arith_term(arith):
    return lens(arith, "Term", "Arith")


@pytest.fixture(scope="session")
def demo_cst():
    return parse_tree(
        'Plus "a plus" (Minus "a minus" (FromT "" (Lit "l1" 1)) (Lit "l2" 2)) '
        '(Neg "a neg" (Lit "l3" 3))'
    )


@pytest.fixture(scope="session")
def sugarlang():
    return load_program(example_text("sugarlang.lens"), "sugarlang.lens")


@pytest.fixture(scope="session")
def addrbook():
    return load_program(example_text("addrbook.lens"), "addrbook.lens")


@pytest.fixture(scope="session")
def mirror():
    return load_program(example_text("mirror.lens"), "mirror.lens")
