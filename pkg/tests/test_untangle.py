import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import classes, classes_upto
from tanglegram.core import Tanglegram, TanglegramError, induced_subtanglegram, random_tanglegram
from tanglegram.layout import count_crossings, restrict_layout, validate_layout
from tanglegram.oracle import brute_crossing_number, brute_leaf_matched_pairs
from tanglegram.untangle import (
    PartialLayout,
    build_table,
    is_planar,
    modified_untangle,
    reduce_pairs,
    refine,
)


def test_example_untangles_to_zero(ex24):
    ly, pairs = modified_untangle(ex24)
    validate_layout(ex24, ly)
    assert count_crossings(ex24, ly) == 0
    assert pairs == [(ex24.t.root, ex24.s.root)]
    assert sorted(pairs) == sorted(brute_leaf_matched_pairs(ex24))


def test_table_is_leaf_reachability(ex24):
    tbl = build_table(ex24)
    for u in ex24.t.vertices():
        for v in ex24.s.vertices():
            image = {ex24.phi[a] for a in ex24.t.leaves(u)}
            assert tbl[u, v] == bool(image & set(ex24.s.leaves(v)))


def test_table_respects_active_set(ex24):
    tbl = build_table(ex24, [1, 2])
    assert all(tbl.mask[ex24.t.leaf(a)] == 0 for a in (3, 4, 5))
    with pytest.raises(TanglegramError):
        build_table(ex24, [9])


def test_refine_orders_children_by_neighbour_positions():
    tg = Tanglegram.from_strings("((1,2),(3,4))", "((1,2),(3,4))", "3 4 1 2")
    pl = PartialLayout(tg, build_table(tg))
    pl = refine(pl, tg.s.root, "S")
    assert pl.y == list(tg.s.children[tg.s.root])
    pl = refine(pl, tg.t.root, "T")
    # T's first child reaches the second S child, so the order swaps
    a, b = tg.t.children[tg.t.root]
    assert pl.x == [b, a]


def test_refine_puts_edgeless_child_second(ex24):
    pl = PartialLayout(ex24, build_table(ex24, [4, 5]))
    pl = refine(pl, ex24.t.root, "T")
    a, b = ex24.t.children[ex24.t.root]
    assert pl.x == [b, a]


def test_refine_rejects_bad_input(ex24):
    pl = PartialLayout(ex24, build_table(ex24))
    with pytest.raises(TanglegramError):
        refine(pl, ex24.t.root, "Q")
    with pytest.raises(TanglegramError):
        refine(pl, ex24.t.leaf(1), "T")


def test_non_planar_detected(fig13):
    assert not is_planar(fig13)
    assert brute_crossing_number(fig13).optimum == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_planarity_matches_oracle(n):
    for tg in classes(n):
        assert is_planar(tg) == (brute_crossing_number(tg).optimum == 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_pairs_match_brute_force_on_planar_classes(n):
    for tg in classes(n):
        ly, pairs = modified_untangle(tg)
        if count_crossings(tg, ly):
            continue
        assert len(pairs) == len(set(pairs))
        assert set(pairs) == set(brute_leaf_matched_pairs(tg))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 12))
def test_active_untangle_matches_induced(seed, n):
    rng = random.Random(seed)
    tg = random_tanglegram(n, rng)
    active = rng.sample(tg.labels, rng.randint(2, n))
    ly, pairs = modified_untangle(tg, active)
    validate_layout(tg, ly)
    sub = induced_subtanglegram(tg, active)
    planar = is_planar(sub)
    assert planar == (count_crossings(tg, restrict_layout(ly, active, tg.phi)) == 0)
    if planar:
        assert len(reduce_pairs(pairs, tg, active)) == len(brute_leaf_matched_pairs(sub))


def test_all_small_classes_have_valid_layouts():
    for tg in classes_upto(5):
        ly, _ = modified_untangle(tg)
        validate_layout(tg, ly)
