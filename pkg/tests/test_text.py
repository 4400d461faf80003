import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelens import (
    parse_links,
    parse_path,
    parse_pattern,
    parse_tree,
    render_link,
    render_links,
    render_path,
    render_pattern,
    render_tree,
)
from treelens.text import LensSyntaxError, read_tree_file, write_tree_file


@pytest.mark.parametrize(
    "text",
    [
        "Num 0",
        "Num -5",
        'Lit "x" 1',
        'Plus "a plus" (FromT "" (Lit "" 1)) (Neg "n" (Lit "" 2))',
        '"just a string"',
        "42",
        "-7",
        "Tip",
    ],
)
def test_tree_roundtrip(text):
    assert render_tree(parse_tree(text)) == text


@pytest.mark.parametrize(
    "text",
    [
        "_",
        "x",
        "Neg \"a neg\" _",
        "Sub (Num 0) r",
        "Add _ _",
        'Plus _ x y',
    ],
)
def test_pattern_roundtrip(text):
    assert render_pattern(parse_pattern(text)) == text


def test_string_escapes():
    t = parse_tree('"a \\"quoted\\" \\\\ backslash"')
    assert render_tree(t) == '"a \\"quoted\\" \\\\ backslash"'


def test_bad_escape_rejected():
    with pytest.raises(LensSyntaxError):
        parse_tree('"bad \\n escape"')


def test_tree_rejects_pattern_syntax():
    with pytest.raises(LensSyntaxError):
        parse_tree("Neg _ x")
    with pytest.raises(LensSyntaxError):
        parse_tree("lowercase")


@pytest.mark.parametrize("text,expected", [("[]", ()), ("[0]", (0,)), ("[2,0]", (2, 0))])
def test_path_roundtrip(text, expected):
    assert parse_path(text) == expected
    assert render_path(expected) == text


def test_link_format_roundtrip():
    line = '(Neg "a neg" _ @ [2]) <-> (Sub (Num 0) _ @ [0])'
    ls = parse_links(line + "\n")
    assert len(ls) == 1
    assert render_link(next(iter(ls))) == line


def test_links_file_comments_and_blanks():
    text = "-- a comment\n\n(P @ []) <-> (Q @ [1])\n"
    ls = parse_links(text)
    assert len(ls) == 1


def test_links_canonical_order():
    text = (
        "(B @ [1]) <-> (Q @ [])\n"
        "(A @ [0]) <-> (Q @ [2])\n"
        "(A @ [0]) <-> (Q @ [1])\n"
    )
    ls = parse_links(text)
    rendered = render_links(ls)
    assert rendered == (
        "(A @ [0]) <-> (Q @ [1])\n"
        "(A @ [0]) <-> (Q @ [2])\n"
        "(B @ [1]) <-> (Q @ [])\n"
    )
    # canonical text is a fixed point
    assert render_links(parse_links(rendered)) == rendered


def test_tree_file_requires_trailing_newline():
    with pytest.raises(LensSyntaxError):
        read_tree_file("Num 0")
    assert read_tree_file("Num 0\n") == parse_tree("Num 0")
    with pytest.raises(LensSyntaxError):
        read_tree_file("Num 0\nNum 1\n")


def test_write_tree_file():
    assert write_tree_file(parse_tree("Num 0")) == "Num 0\n"


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**40))
def test_random_tree_roundtrip(arith, seed):
    from treelens.harness import gen_tree

    t = gen_tree(arith.schema, "Expr", 30, seed)
    assert parse_tree(render_tree(t)) == t
    assert read_tree_file(write_tree_file(t)) == t


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**40))
def test_random_links_roundtrip(arith, arith_expr, seed):
    from treelens.harness import gen_tree

    t = gen_tree(arith.schema, "Expr", 30, seed)
    _, ls = arith_expr.get(t)
    text = render_links(ls)
    assert parse_links(text) == ls
    assert render_links(parse_links(text)) == text
