"""Brute-force ground truth: enumerate every leaf order of both trees.

Only core and layout primitives are shared with the optimized modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .core import PreconditionError, Tanglegram, TanglegramError, Tree
from .layout import Layout

__all__ = [
    "OracleReport",
    "DEFAULT_MAX_SIZE",
    "DEFAULT_MAX_INSERTION_SIZE",
    "all_leaf_orders",
    "crossing_matrix",
    "brute_crossing_number",
    "brute_insertion_optimum",
    "brute_planar_layouts",
    "brute_leaf_matched_pairs",
]

DEFAULT_MAX_SIZE = 10
DEFAULT_MAX_INSERTION_SIZE = 8


@dataclass(frozen=True)
class OracleReport:
    optimum: int
    witness: Layout
    examined: int


def all_leaf_orders(tree: Tree) -> list[tuple[int, ...]]:
    """Every leaf order reachable by flips: 2^(internal vertices) of them."""
    orders: dict[int, list[tuple[int, ...]]] = {}
    for v in tree.postorder():
        ch = tree.children[v]
        if ch is None:
            orders[v] = [(tree.label[v],)]
        else:
            a, b = orders.pop(ch[0]), orders.pop(ch[1])
            orders[v] = [p + q for p in a for q in b] + [q + p for p in a for q in b]
    return orders[tree.root]


def _before_matrix(orders: list[tuple[int, ...]], pairs: list[tuple[int, int]]) -> np.ndarray:
    """Row k, column p: 1 if pair p's first label precedes its second in order k."""
    out = np.zeros((len(orders), len(pairs)), dtype=np.int32)
    for k, order in enumerate(orders):
        pos = {lab: idx for idx, lab in enumerate(order)}
        out[k] = [pos[a] < pos[b] for a, b in pairs]
    return out


def crossing_matrix(
    tg: Tanglegram, pairs: list[tuple[int, int]] | None = None
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], np.ndarray]:
    """X orders, Y orders, and C[a, b] = crossings among ``pairs`` in layout (X_a, Y_b)."""
    xs = all_leaf_orders(tg.t)
    ys = all_leaf_orders(tg.s)
    if pairs is None:
        pairs = list(combinations(tg.labels, 2))
    if not pairs:
        return xs, ys, np.zeros((len(xs), len(ys)), dtype=np.int64)
    bx = _before_matrix(xs, pairs)
    by = _before_matrix(ys, [(tg.phi[a], tg.phi[b]) for a, b in pairs])
    # a pair crosses when exactly one of the two orders puts it first
    c = bx @ (1 - by).T + (1 - bx) @ by.T
    return xs, ys, c.astype(np.int64)


def _guard(tg: Tanglegram, max_size: int) -> None:
    if tg.n > max_size:
        raise TanglegramError(f"size {tg.n} exceeds the oracle guard {max_size}; raise max_size explicitly")


def brute_crossing_number(tg: Tanglegram, max_size: int = DEFAULT_MAX_SIZE) -> OracleReport:
    _guard(tg, max_size)
    xs, ys, c = crossing_matrix(tg)
    a, b = np.unravel_index(int(np.argmin(c)), c.shape)
    return OracleReport(int(c[a, b]), Layout(xs[a], ys[b]), c.size)


def brute_insertion_optimum(
    tg: Tanglegram, active: Iterable[int], max_size: int = DEFAULT_MAX_INSERTION_SIZE
) -> OracleReport:
    """Fewest crossings over layouts whose restriction to ``active`` is planar."""
    _guard(tg, max_size)
    act = sorted(set(active))
    inner = list(combinations(act, 2))
    xs, ys, total = crossing_matrix(tg)
    _, _, restricted = crossing_matrix(tg, inner)
    ok = restricted == 0
    if not ok.any():
        raise PreconditionError("the subtanglegram induced by the active set is not planar")
    masked = np.where(ok, total, np.iinfo(np.int64).max)
    a, b = np.unravel_index(int(np.argmin(masked)), masked.shape)
    return OracleReport(int(total[a, b]), Layout(xs[a], ys[b]), total.size)


def brute_planar_layouts(tg: Tanglegram, max_size: int = DEFAULT_MAX_SIZE) -> set[Layout]:
    _guard(tg, max_size)
    xs, ys, c = crossing_matrix(tg)
    return {Layout(xs[a], ys[b]) for a, b in zip(*np.nonzero(c == 0))}


def brute_leaf_matched_pairs(tg: Tanglegram) -> list[tuple[int, int]]:
    """All internal (u, v) with phi(leaf(u)) == leaf(v), by direct comparison."""
    out = []
    for u in tg.t.internal_vertices():
        image = {tg.phi[lab] for lab in tg.t.leaves(u)}
        for v in tg.s.internal_vertices():
            if image == set(tg.s.leaves(v)):
                out.append((u, v))
    return out
