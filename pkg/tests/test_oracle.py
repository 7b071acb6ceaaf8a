import random
from math import comb

import numpy as np
import pytest

from conftest import classes
from tanglegram.core import PreconditionError, TanglegramError, random_tanglegram
from tanglegram.insertion import crtei_min
from tanglegram.layout import count_crossings
from tanglegram.oracle import (
    all_leaf_orders,
    brute_crossing_number,
    brute_insertion_optimum,
    brute_leaf_matched_pairs,
    brute_planar_layouts,
    crossing_matrix,
)
from tanglegram.planarset import all_planar_layouts
from tanglegram.untangle import modified_untangle


def test_fig13_numbers(fig13):
    rep = brute_crossing_number(fig13)
    assert rep.optimum == 2
    assert count_crossings(fig13, rep.witness) == 2
    assert rep.examined == 2 ** 10
    assert brute_insertion_optimum(fig13, set(fig13.labels) - {2}).optimum == 3


def test_leaf_order_count(fig13):
    orders = all_leaf_orders(fig13.t)
    assert len(orders) == len(set(orders)) == 2 ** 5


def test_matrix_matches_counter(ex24):
    xs, ys, c = crossing_matrix(ex24)
    rng = np.random.default_rng(3)
    from tanglegram.layout import Layout

    for a, b in rng.integers(0, [len(xs), len(ys)], size=(20, 2)):
        assert c[a, b] == count_crossings(ex24, Layout(xs[a], ys[b]))


def test_size_guard():
    tg = random_tanglegram(11, random.Random(0))
    with pytest.raises(TanglegramError):
        brute_crossing_number(tg)
    with pytest.raises(TanglegramError):
        brute_insertion_optimum(tg, [1, 2])


def test_nonplanar_active_set(fig13):
    with pytest.raises(PreconditionError):
        brute_insertion_optimum(fig13, fig13.labels)


def test_planar_layouts_agree(ex24):
    assert brute_planar_layouts(ex24) == set(all_planar_layouts(ex24))


def test_leaf_matched_pairs_agree(fig12):
    _, pairs = modified_untangle(fig12)
    assert sorted(pairs) == sorted(brute_leaf_matched_pairs(fig12))


def test_crossing_number_below_half_of_pairs():
    rng = random.Random(11)
    for _ in range(40):
        tg = random_tanglegram(rng.randint(4, 8), rng)
        assert 2 * brute_crossing_number(tg).optimum < comb(tg.n, 2)


@pytest.mark.parametrize("n", [4, 5])
def test_crossing_number_at_most_insertion(n):
    for tg in classes(n):
        best = crtei_min(tg)
        if best is not None:
            assert brute_crossing_number(tg).optimum <= best
