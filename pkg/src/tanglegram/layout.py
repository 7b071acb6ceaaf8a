"""Leaf-order layouts, crossing counts and layout transformations.

A layout may cover a subset of the labels: ``x`` lists T labels in a set J
and ``y`` lists their images phi(J). Flips and switches then act on the
sub-blocks ``leaf(v) & J``, which is how insertion works inside an induced
subtanglegram without rebuilding trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import ParseError, Tanglegram, TanglegramError, Tree

__all__ = [
    "Layout",
    "parse_layout",
    "format_layout",
    "identity_layout",
    "is_tree_consistent",
    "validate_layout",
    "count_crossings",
    "count_crossings_naive",
    "crossing_pairs",
    "crossings_involving",
    "edge_crossings",
    "apply_flip",
    "apply_paired_flip",
    "apply_subtree_switch",
    "restrict_layout",
]


@dataclass(frozen=True)
class Layout:
    x: tuple[int, ...]
    y: tuple[int, ...]

    def __init__(self, x: Iterable[int], y: Iterable[int]):
        object.__setattr__(self, "x", tuple(x))
        object.__setattr__(self, "y", tuple(y))

    def __str__(self) -> str:
        return format_layout(self)


def format_layout(ly: Layout) -> str:
    return "X = " + " ".join(map(str, ly.x)) + "\nY = " + " ".join(map(str, ly.y)) + "\n"


def parse_layout(text: str) -> Layout:
    rows: dict[str, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        key = key.strip()
        if not sep or key not in ("X", "Y"):
            raise ParseError("expected 'X = ...' or 'Y = ...'", lineno, key or body)
        if key in rows:
            raise ParseError("duplicate key", lineno, key)
        labels = []
        for tok in value.split():
            if not tok.isdigit() or int(tok) <= 0:
                raise ParseError("layout entries must be positive integers", lineno, tok)
            labels.append(int(tok))
        rows[key] = labels
    for key in ("X", "Y"):
        if key not in rows:
            raise ParseError(f"missing '{key} =' line", 0, key)
    return Layout(rows["X"], rows["Y"])


def identity_layout(tg: Tanglegram) -> Layout:
    """The layout given by the stored child orders."""
    return Layout(tg.t.leaf_order(), tg.s.leaf_order())


def is_tree_consistent(tree: Tree, order: Sequence[int]) -> bool:
    """Every leaf(v) & set(order) occupies a contiguous block of order."""
    pos = {lab: k for k, lab in enumerate(order)}
    lo = [0] * len(tree)
    hi = [0] * len(tree)
    cnt = [0] * len(tree)
    for v in tree.postorder():
        ch = tree.children[v]
        if ch is None:
            p = pos.get(tree.label[v])
            if p is None:
                lo[v], hi[v], cnt[v] = len(order), -1, 0
            else:
                lo[v] = hi[v] = p
                cnt[v] = 1
            continue
        a, b = ch
        lo[v] = min(lo[a], lo[b])
        hi[v] = max(hi[a], hi[b])
        cnt[v] = cnt[a] + cnt[b]
        if cnt[v] and hi[v] - lo[v] + 1 != cnt[v]:
            return False
    return True


def validate_layout(tg: Tanglegram, ly: Layout, full: bool = True) -> None:
    """Raise TanglegramError unless ly is a tree-consistent layout of tg.

    With ``full=False`` the layout may cover any label subset J with y
    listing exactly phi(J).
    """
    xs = set(ly.x)
    if len(xs) != len(ly.x) or len(set(ly.y)) != len(ly.y):
        raise TanglegramError("layout lists repeat a label")
    if full and xs != set(tg.labels):
        raise TanglegramError("x order is not a permutation of the T labels")
    if not xs <= set(tg.phi):
        raise TanglegramError("x order contains unknown labels")
    if set(ly.y) != {tg.phi[i] for i in xs}:
        raise TanglegramError("y order does not match phi of the x order")
    if not is_tree_consistent(tg.t, ly.x):
        raise TanglegramError("x order is not tree-consistent")
    if not is_tree_consistent(tg.s, ly.y):
        raise TanglegramError("y order is not tree-consistent")


def _position_sequence(tg: Tanglegram, ly: Layout) -> list[int]:
    pos_y = {lab: k for k, lab in enumerate(ly.y)}
    try:
        return [pos_y[tg.phi[lab]] for lab in ly.x]
    except KeyError as exc:
        raise TanglegramError(f"layout does not fit the tanglegram: label {exc}") from None


def _inversions(seq: list[int]) -> int:
    """Merge-sort inversion count, bottom-up to avoid deep recursion."""
    a = list(seq)
    n = len(a)
    buf = [0] * n
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    buf[k] = a[i]
                    i += 1
                else:
                    buf[k] = a[j]
                    inv += mid - i
                    j += 1
                k += 1
            buf[k : k + mid - i] = a[i:mid]
            k += mid - i
            buf[k : k + hi - j] = a[j:hi]
        a, buf = buf, a
        width *= 2
    return inv


def count_crossings(tg: Tanglegram, ly: Layout) -> int:
    """Number of crossing between-tree edge pairs in ly."""
    if len(ly.x) != len(ly.y):
        raise TanglegramError("x and y orders differ in length")
    return _inversions(_position_sequence(tg, ly))


def count_crossings_naive(tg: Tanglegram, ly: Layout) -> int:
    """O(n^2) pairwise reference count."""
    seq = _position_sequence(tg, ly)
    return sum(1 for a, b in combinations(seq, 2) if a > b)


def crossing_pairs(tg: Tanglegram, ly: Layout) -> set[frozenset[int]]:
    """The crossing edge pairs, each named by its two T labels."""
    pos_y = {lab: k for k, lab in enumerate(ly.y)}
    out = set()
    for a, b in combinations(ly.x, 2):
        if pos_y[tg.phi[a]] > pos_y[tg.phi[b]]:
            out.add(frozenset((a, b)))
    return out


def crossings_involving(tg: Tanglegram, ly: Layout, edge_pairs: Iterable[tuple[int, int]]) -> int:
    """How many of the listed edge pairs (named by T labels) cross in ly."""
    pos_x = {lab: k for k, lab in enumerate(ly.x)}
    pos_y = {lab: k for k, lab in enumerate(ly.y)}
    total = 0
    for a, b in edge_pairs:
        if a not in pos_x or b not in pos_x:
            raise TanglegramError(f"edge pair ({a}, {b}) names a label absent from the layout")
        if (pos_x[a] - pos_x[b]) * (pos_y[tg.phi[a]] - pos_y[tg.phi[b]]) < 0:
            total += 1
    return total


def edge_crossings(tg: Tanglegram, ly: Layout, i: int, others: Iterable[int]) -> int:
    """How many edges among ``others`` cross edge i in ly (O(n))."""
    pos_x = {lab: k for k, lab in enumerate(ly.x)}
    pos_y = {lab: k for k, lab in enumerate(ly.y)}
    xi, yi = pos_x[i], pos_y[tg.phi[i]]
    return sum(1 for j in others if (pos_x[j] - xi) * (pos_y[tg.phi[j]] - yi) < 0)


def _tree_and_order(tg: Tanglegram, ly: Layout, side: str) -> tuple[Tree, tuple[int, ...]]:
    if side == "T":
        return tg.t, ly.x
    if side == "S":
        return tg.s, ly.y
    raise TanglegramError(f"side must be 'T' or 'S', not {side!r}")


def _block(order: Sequence[int], members: Iterable[int]) -> tuple[int, int]:
    """Bounds [lo, hi) of the contiguous block formed by members in order."""
    pos = {lab: k for k, lab in enumerate(order)}
    ps = [pos[m] for m in members if m in pos]
    if not ps:
        return 0, 0
    lo, hi = min(ps), max(ps) + 1
    if hi - lo != len(ps):
        raise TanglegramError("leaf block is not contiguous; layout is not tree-consistent")
    return lo, hi


def _with_order(ly: Layout, side: str, order: Sequence[int]) -> Layout:
    return Layout(order, ly.y) if side == "T" else Layout(ly.x, order)


def apply_flip(tg: Tanglegram, ly: Layout, v: int, side: str = "T") -> Layout:
    """Reverse the block of leaf(v)."""
    tree, order = _tree_and_order(tg, ly, side)
    if tree.is_leaf(v):
        raise TanglegramError("cannot flip at a leaf")
    lo, hi = _block(order, tree.leaves(v))
    new = list(order)
    new[lo:hi] = reversed(new[lo:hi])
    return _with_order(ly, side, new)


def apply_paired_flip(
    tg: Tanglegram, ly: Layout, pair: tuple[int, int], within: Iterable[int] | None = None
) -> Layout:
    """Flip at u in T and at v in S.

    With ``within`` given, leaf(u) and leaf(v) must be matched on those labels
    (a pair of an induced subtanglegram); otherwise on the layout's labels.
    """
    u, v = pair
    if tg.t.is_leaf(u) or tg.s.is_leaf(v):
        raise TanglegramError("paired flip needs internal vertices")
    scope = set(ly.x) if within is None else set(within)
    lu = {lab for lab in tg.t.leaves(u) if lab in scope}
    lv = {tg.phi_inv[lab] for lab in tg.s.leaves(v) if tg.phi_inv[lab] in scope}
    if lu != lv:
        raise TanglegramError(f"({u}, {v}) is not a leaf-matched pair on these labels")
    return apply_flip(tg, apply_flip(tg, ly, u, "T"), v, "S")


def apply_subtree_switch(tg: Tanglegram, ly: Layout, v: int, side: str = "T") -> Layout:
    """Exchange the two child blocks of v, keeping each block's order."""
    tree, order = _tree_and_order(tg, ly, side)
    ch = tree.children[v]
    if ch is None:
        raise TanglegramError("cannot switch at a leaf")
    a_lo, a_hi = _block(order, tree.leaves(ch[0]))
    b_lo, b_hi = _block(order, tree.leaves(ch[1]))
    if a_lo == a_hi or b_lo == b_hi:
        return ly
    if a_lo > b_lo:
        a_lo, a_hi, b_lo, b_hi = b_lo, b_hi, a_lo, a_hi
    new = list(order)
    new[a_lo:b_hi] = list(order[b_lo:b_hi]) + list(order[a_lo:a_hi])
    return _with_order(ly, side, new)


def restrict_layout(ly: Layout, labels: Iterable[int], phi: dict[int, int]) -> Layout:
    keep = set(labels)
    images = {phi[i] for i in keep}
    return Layout([a for a in ly.x if a in keep], [b for b in ly.y if b in images])
