import random

import pytest
from hypothesis import given, settings, strategies as st

from tanglegram.core import ParseError, TanglegramError, random_tanglegram
from tanglegram.layout import (
    Layout,
    apply_flip,
    apply_paired_flip,
    apply_subtree_switch,
    count_crossings,
    count_crossings_naive,
    crossing_pairs,
    crossings_involving,
    edge_crossings,
    format_layout,
    identity_layout,
    is_tree_consistent,
    parse_layout,
    restrict_layout,
    validate_layout,
)
from tanglegram.oracle import all_leaf_orders


def test_example_layout_crossings(ex24):
    # stored child order draws six crossings, the flipped one none
    assert count_crossings(ex24, Layout([1, 2, 3, 4, 5], [1, 2, 3, 4, 5])) == 6
    assert count_crossings(ex24, Layout([3, 1, 2, 5, 4], [5, 4, 2, 3, 1])) == 0


def test_crossing_pairs_match_count(ex24):
    ly = identity_layout(ex24)
    pairs = crossing_pairs(ex24, ly)
    assert len(pairs) == 6
    assert crossings_involving(ex24, ly, [tuple(p) for p in pairs]) == 6


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 14))
def test_fast_count_matches_naive(seed, n):
    rng = random.Random(seed)
    tg = random_tanglegram(n, rng)
    x = list(tg.t.leaf_order())
    y = list(tg.s.leaf_order())
    for v in tg.t.internal_vertices():
        if rng.random() < 0.5:
            x = list(apply_flip(tg, Layout(x, y), v, "T").x)
    ly = Layout(x, y)
    assert count_crossings(tg, ly) == count_crossings_naive(tg, ly) == len(crossing_pairs(tg, ly))


def test_edge_crossings(ex24):
    ly = identity_layout(ex24)
    pairs = crossing_pairs(ex24, ly)
    for i in ex24.labels:
        others = [j for j in ex24.labels if j != i]
        expected = sum(1 for p in pairs if i in p)
        assert edge_crossings(ex24, ly, i, others) == expected


def test_layout_text_round_trip():
    ly = Layout([3, 1, 2], [2, 3, 1])
    assert parse_layout(format_layout(ly)) == ly


@pytest.mark.parametrize("text", ["X = 1 2\n", "X = 1 a\nY = 1 2\n", "Z = 1\n", "X = 1\nX = 2\nY = 1\n"])
def test_layout_parse_errors(text):
    with pytest.raises(ParseError):
        parse_layout(text)


def test_tree_consistency(ex24):
    assert is_tree_consistent(ex24.t, [3, 1, 2, 5, 4])
    assert not is_tree_consistent(ex24.t, [1, 4, 2, 3, 5])
    with pytest.raises(TanglegramError):
        validate_layout(ex24, Layout([1, 4, 2, 3, 5], [1, 2, 3, 4, 5]))
    with pytest.raises(TanglegramError):
        validate_layout(ex24, Layout([1, 2, 3, 4], [1, 2, 3, 4]))
    validate_layout(ex24, Layout([1, 2, 4], [4, 1, 2]), full=False)


def test_every_flip_order_is_consistent(ex24):
    for x in all_leaf_orders(ex24.t):
        assert is_tree_consistent(ex24.t, x)
    assert len(all_leaf_orders(ex24.t)) == 2 ** 4


def test_subtree_switch_keeps_block_order():
    from tanglegram.core import Tanglegram

    tg = Tanglegram.from_strings("((1,2),(3,4))", "((1,2),(3,4))", "1 2 3 4")
    ly = identity_layout(tg)
    sw = apply_subtree_switch(tg, ly, tg.t.root, "T")
    assert sw.x == (3, 4, 1, 2)
    fl = apply_flip(tg, ly, tg.t.root, "T")
    assert fl.x == (4, 3, 2, 1)


def test_paired_flip_requires_matched_pair(ex24):
    ly = Layout([3, 1, 2, 5, 4], [5, 4, 2, 3, 1])
    root = (ex24.t.root, ex24.s.root)
    assert count_crossings(ex24, apply_paired_flip(ex24, ly, root)) == 0
    u = ex24.t.children[ex24.t.root][1]
    with pytest.raises(TanglegramError):
        apply_paired_flip(ex24, ly, (u, ex24.s.root))


def test_partial_layout_operations(ex24):
    ly = restrict_layout(identity_layout(ex24), [1, 2, 4, 5], ex24.phi)
    assert ly.x == (1, 2, 4, 5)
    assert ly.y == (1, 2, 3, 4)
    sw = apply_subtree_switch(ex24, ly, ex24.t.root, "T")
    assert sw.x == (4, 5, 1, 2)
    validate_layout(ex24, sw, full=False)


def test_side_argument_checked(ex24):
    with pytest.raises(TanglegramError):
        apply_flip(ex24, identity_layout(ex24), ex24.t.root, "Q")
