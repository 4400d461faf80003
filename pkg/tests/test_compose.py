import pytest

from conftest import example_text
from treelens import (
    CompositeLens,
    fst_projection,
    lens,
    link_compose,
    load_program,
    parse_tree,
    verify_laws,
)
from treelens.compose import CompositionTypeError
from treelens.edits import EditState, swap


@pytest.fixture(scope="module")
def mirror_twice(mirror):
    m = lens(mirror, "BinT Int", "BinT Int")
    return CompositeLens(m, m)


def test_mirror_twice_get_is_identity(mirror_twice):
    t = parse_tree("Node 1 (Node 2 Tip Tip) (Node 3 Tip (Node 4 Tip Tip))")
    c, ls = mirror_twice.get(t)
    assert c == t
    assert ls  # links survive composition when both sides decompose alike


def test_composite_links_are_relational_composition(mirror, mirror_twice):
    m = lens(mirror, "BinT Int", "BinT Int")
    t = parse_tree("Node 5 Tip (Node 6 Tip Tip)")
    b, ls_ab = m.get(t)
    c, ls_bc = m.get(b)
    cc, ls_ac = mirror_twice.get(t)
    assert cc == c
    assert ls_ac == link_compose(ls_ab, ls_bc)


def test_composite_get_on_tip(mirror_twice):
    c, ls = mirror_twice.get(parse_tree("Tip"))
    assert c == parse_tree("Tip")
    assert len(ls) == 1  # Tip region related to Tip region through the middle


def test_composite_hippocraticness(mirror_twice):
    t = parse_tree("Node 1 (Node 2 Tip Tip) Tip")
    c, ls = mirror_twice.get(t)
    assert mirror_twice.put(t, c, ls) == t


def test_composite_put_empty_links_rebuilds(mirror_twice):
    t = parse_tree("Node 1 (Node 2 Tip Tip) Tip")
    out = mirror_twice.put(t, parse_tree("Node 9 Tip Tip"), frozenset())
    assert out == parse_tree("Node 9 Tip Tip")


def test_composite_swap_edit(mirror_twice):
    t = parse_tree("Node 1 (Node 2 Tip Tip) (Node 3 Tip Tip)")
    c, ls = mirror_twice.get(t)
    st = swap(EditState(c, ls), (1,), (2,))
    out = mirror_twice.put(t, st.view, st.links)
    assert out == parse_tree("Node 1 (Node 3 Tip Tip) (Node 2 Tip Tip)")
    c2, ls2 = mirror_twice.get(out)
    assert c2 == st.view
    assert fst_projection(st.links) <= fst_projection(ls2)


def test_composite_laws(mirror_twice):
    summary = verify_laws(mirror_twice, 120, size_bound=25, script_len=3, seed=11)
    assert summary.ok, summary.to_text()


def test_mismatched_middles_compose_to_empty():
    vp = load_program(example_text("compose_chain.lens"))
    cl = CompositeLens(lens(vp, "Term", "Arith"), lens(vp, "Arith", "NArith"))
    s = parse_tree('Neg "a" (Lit "b" 7)')
    c, ls = cl.get(s)
    assert c == parse_tree("NSub NZ NZ")
    assert ls == frozenset()
    # and an empty link set is still a usable put input
    assert cl.put(s, c, ls) is not None


def test_composition_type_mismatch(arith):
    a = lens(arith, "Expr", "Arith")
    with pytest.raises(CompositionTypeError):
        CompositeLens(a, a)


def test_composite_check_matches_put(mirror_twice):
    t = parse_tree("Node 1 Tip Tip")
    c, ls = mirror_twice.get(t)
    assert mirror_twice.check(t, c, ls)
    from treelens.harness import corrupt_links
    from treelens.engine import InvalidLinks

    bad = corrupt_links(ls, 3)
    assert not mirror_twice.check(t, c, bad)
    with pytest.raises(InvalidLinks):
        mirror_twice.put(t, c, bad)
