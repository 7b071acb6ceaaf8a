import pytest

from conftest import classes
from tanglegram.core import Tanglegram, TanglegramError
from tanglegram.layout import count_crossings
from tanglegram.oracle import brute_planar_layouts
from tanglegram.planarset import (
    all_planar_layouts,
    flip_graph,
    format_flip_graph,
    irreducible_component,
    is_flip_graph_connected,
    is_irreducible,
    leaf_matched_pairs,
)
from tanglegram.untangle import is_planar


def test_example_planar_layouts(ex24):
    layouts = all_planar_layouts(ex24)
    assert layouts == brute_planar_layouts(ex24)
    assert len(layouts) == 2
    assert all(count_crossings(ex24, ly) == 0 for ly in layouts)


def test_flip_graph_shape(ex24):
    g = flip_graph(ex24)
    assert len(g.nodes) == 2 and g.edge_count() == 1
    assert is_flip_graph_connected(g)
    text = format_flip_graph(g)
    assert text.startswith("0: 1\n1: 0\n")


def test_flip_graph_rejects_non_planar(fig13):
    with pytest.raises(TanglegramError):
        flip_graph(fig13)


def test_nested_pairs_multiply_layouts():
    tg = Tanglegram.from_strings("(((1,2),3),4)", "(((1,2),3),4)", "1 2 3 4")
    g = flip_graph(tg)
    assert len(g.nodes) == 8
    # each node has one neighbour per pair
    assert all(len(nb) == 3 for nb in g.adjacency.values())
    assert set(g.nodes) == brute_planar_layouts(tg)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_closure_equals_brute_force(n):
    for tg in classes(n):
        if is_planar(tg):
            g = flip_graph(tg)
            assert set(g.nodes) == brute_planar_layouts(tg)
            assert is_flip_graph_connected(g)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_irreducible_have_two_layouts(n):
    seen = 0
    for tg in classes(n):
        if is_planar(tg) and is_irreducible(tg):
            seen += 1
            assert len(all_planar_layouts(tg)) == 2
    assert seen > 0


def test_irreducibility_needs_size_two():
    tg = Tanglegram.from_strings("1", "1", "1")
    with pytest.raises(TanglegramError):
        is_irreducible(tg)


def test_irreducible_component_contracts_pairs():
    tg = Tanglegram.from_strings("((1,2),(3,4))", "((1,2),(3,4))", "1 2 3 4")
    comp = irreducible_component(tg)
    assert comp.n == 2
    assert str(comp.t) == "(1,3)"
    assert comp.phi == {1: 1, 3: 3}


def test_irreducible_component_of_irreducible_is_itself(ex24):
    assert is_irreducible(ex24)
    comp = irreducible_component(ex24)
    assert comp == ex24


def test_leaf_matched_pairs_root_always_present(fig13):
    assert (fig13.t.root, fig13.s.root) in leaf_matched_pairs(fig13)
