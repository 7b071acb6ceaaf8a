"""Inserting several between-tree edges into a planar subtanglegram.

Poset elements are tuples: ``("L", u, v)`` for a leaf-matched pair of the
induced subtanglegram, ``("T", u)`` and ``("S", v)`` for vertices of M(I).
Cross sets hold pairs ``(i, j)`` of T labels: inserted edge i, edge j.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterable

from .core import PreconditionError, Tanglegram, TanglegramError, Tree
from .insertion import induced_parent, plan_insertion, run_plan
from .layout import (
    Layout,
    apply_paired_flip,
    apply_subtree_switch,
    count_crossings,
    crossings_involving,
    restrict_layout,
)
from .untangle import active_counts, modified_untangle, reduce_pairs

__all__ = [
    "MultiPartition",
    "DecisionPoset",
    "CrossSet",
    "MultiResult",
    "partition_sets",
    "build_poset",
    "cross_sets",
    "multi_insertion",
    "multi_insertion_report",
    "run_subset",
    "undecided_elements",
    "iterated_insertion",
    "iterated_bound",
]

Element = tuple


@dataclass
class MultiPartition:
    tg: Tanglegram
    active: frozenset[int]
    l0: list[tuple[int, int]] = field(default_factory=list)
    lT: list[tuple[int, int]] = field(default_factory=list)
    lS: list[tuple[int, int]] = field(default_factory=list)
    l1: list[tuple[int, int]] = field(default_factory=list)
    m0: set[Element] = field(default_factory=set)
    mT: set[Element] = field(default_factory=set)
    mS: set[Element] = field(default_factory=set)
    m1: set[Element] = field(default_factory=set)
    parents: dict[int, tuple[int, int]] = field(default_factory=dict)
    anchors: dict[int, tuple[int, int]] = field(default_factory=dict)
    # inserted label owning an M(I)_0 / M(I)_T / M(I)_S vertex, and which
    # M(I)_0 variant applies: "A" when P(t_i) lies above a pair, "B" otherwise
    owner: dict[Element, int] = field(default_factory=dict)
    m0_kind: dict[int, str] = field(default_factory=dict)

    @property
    def m(self) -> set[Element]:
        return self.m0 | self.mT | self.mS | self.m1

    @property
    def l(self) -> list[tuple[int, int]]:
        return self.l0 + self.lT + self.lS + self.l1


@dataclass
class DecisionPoset:
    elements: list[Element]
    below: dict[Element, set[Element]]
    covers: dict[Element, set[Element]]
    extension: list[Element]

    def leq(self, a: Element, b: Element) -> bool:
        return a == b or a in self.below[b]


@dataclass(frozen=True)
class CrossSet:
    owner: Element
    pairs: frozenset[tuple[int, int]]


@dataclass
class MultiResult:
    layout: Layout
    crossings: int
    subset: tuple[Element, ...]
    start: Layout


def _sort_key(e: Element) -> tuple:
    return (e[0],) + tuple(e[1:])


class _View:
    """Leaf sets of the full trees split by the active set."""

    def __init__(self, tg: Tanglegram, active: frozenset[int]):
        self.tg = tg
        self.active = active
        self.images = frozenset(tg.phi[i] for i in active)
        self.ct = active_counts(tg.t, active)
        self.cs = active_counts(tg.s, self.images)

    def t_in(self, u: int) -> set[int]:
        return {lab for lab in self.tg.t.leaves(u) if lab in self.active}

    def t_out(self, u: int) -> set[int]:
        return {lab for lab in self.tg.t.leaves(u) if lab not in self.active}

    def s_in(self, v: int) -> set[int]:
        """Active leaves under v, as T labels."""
        inv = self.tg.phi_inv
        return {inv[lab] for lab in self.tg.s.leaves(v) if lab in self.images}

    def s_out(self, v: int) -> set[int]:
        inv = self.tg.phi_inv
        return {inv[lab] for lab in self.tg.s.leaves(v) if lab not in self.images}

    def branching(self, tree: Tree, cnt: list[int], w: int) -> bool:
        ch = tree.children[w]
        return ch is not None and cnt[ch[0]] > 0 and cnt[ch[1]] > 0


def _anchor(tree: Tree, cnt: list[int], leaf_vertex: int) -> int:
    w = tree.parent[leaf_vertex]
    while cnt[w] == 0:
        w = tree.parent[w]
    return w


def _residual_pairs(tg: Tanglegram, active: frozenset[int]) -> tuple[Layout, list[tuple[int, int]]]:
    if len(active) < 1 or not active <= set(tg.labels):
        raise TanglegramError("active set must be a non-empty subset of the labels")
    start, pairs = modified_untangle(tg, active)
    if count_crossings(tg, restrict_layout(start, active, tg.phi)) != 0:
        raise PreconditionError("the subtanglegram induced by the active set is not planar")
    return start, reduce_pairs(pairs, tg, active)


def partition_sets(
    tg: Tanglegram, active: Iterable[int], pairs: list[tuple[int, int]] | None = None
) -> MultiPartition:
    act = frozenset(active)
    if pairs is None:
        _, pairs = _residual_pairs(tg, act)
    t, s = tg.t, tg.s
    vw = _View(tg, act)
    mp = MultiPartition(tg, act)
    for u, v in pairs:
        out_t, out_s = vw.t_out(u), vw.s_out(v)
        if out_t == out_s:
            mp.l0.append((u, v))
        elif len(out_t) == 1 and not out_s:
            mp.lT.append((u, v))
        elif not out_t and len(out_s) == 1:
            mp.lS.append((u, v))
        else:
            mp.l1.append((u, v))
    m_all = {("T", w) for w in t.internal_vertices() if not vw.branching(t, vw.ct, w)}
    m_all |= {("S", w) for w in s.internal_vertices() if not vw.branching(s, vw.cs, w)}

    def matched(a: set[int], b: set[int]) -> bool:
        return bool(a & b)

    inserted = sorted(set(tg.labels) - act)
    for i in inserted:
        ti, si = t.leaf(i), s.leaf(tg.phi[i])
        pt, ps = t.parent[ti], s.parent[si]
        if pt is None or ps is None:
            raise TanglegramError("insertion needs at least two edges")
        mp.parents[i] = (pt, ps)
        mp.anchors[i] = (_anchor(t, vw.ct, ti), _anchor(s, vw.cs, si))
    m0: set[Element] = set()
    for i in inserted:
        pt, ps = mp.parents[i]
        alone_t = vw.t_out(pt) == {i}
        alone_s = vw.s_out(ps) == {i}
        if not (alone_t and alone_s):
            continue
        kind = None
        for u, v in pairs:
            if t.lt(u, pt) and s.lt(ps, v):
                kind = "A"
            elif s.lt(v, ps) and t.lt(pt, u):
                kind = "B"
            if kind:
                break
        if kind:
            m0 |= {("T", pt), ("S", ps)}
            mp.owner[("T", pt)] = mp.owner[("S", ps)] = i
            mp.m0_kind[i] = kind
    mT: set[Element] = set()
    mS: set[Element] = set()
    for i in inserted:
        pt, ps = mp.parents[i]
        at, as_ = mp.anchors[i]
        if ("S", ps) not in m0 and vw.s_out(ps) == {i}:
            if not matched(vw.t_in(at), vw.s_in(ps)) or any(
                t.lt(u, at) and s.lt(ps, v) for u, v in pairs
            ):
                mS.add(("S", ps))
                mp.owner[("S", ps)] = i
        if ("T", pt) not in m0 and vw.t_out(pt) == {i}:
            if not matched(vw.t_in(pt), vw.s_in(as_)) or any(
                t.lt(pt, u) and s.lt(v, as_) for u, v in pairs
            ):
                mT.add(("T", pt))
                mp.owner[("T", pt)] = i
    mp.m0, mp.mT, mp.mS = m0, mT, mS
    mp.m1 = m_all - m0 - mT - mS
    return mp


def _direct_leq(tg: Tanglegram, a: Element, b: Element) -> bool:
    t, s = tg.t, tg.s
    if a[0] == "L" and b[0] == "L":
        return t.leq(a[1], b[1]) and s.leq(a[2], b[2])
    if a[0] == "L":
        return t.leq(a[1], b[1]) if b[0] == "T" else s.leq(a[2], b[1])
    if b[0] == "L":
        return t.leq(a[1], b[1]) if a[0] == "T" else s.leq(a[1], b[2])
    if a[0] != b[0]:
        return False
    return (t if a[0] == "T" else s).leq(a[1], b[1])


def build_poset(mp: MultiPartition) -> DecisionPoset:
    elems = [("L", u, v) for u, v in chain(mp.lT, mp.lS, mp.l1)] + sorted(mp.m, key=_sort_key)
    elems.sort(key=_sort_key)
    k = len(elems)
    idx = {e: n for n, e in enumerate(elems)}
    below = [0] * k
    for a in range(k):
        for b in range(k):
            if a != b and _direct_leq(mp.tg, elems[a], elems[b]):
                below[b] |= 1 << a
    for m in range(k):
        bit = 1 << m
        for b in range(k):
            if below[b] & bit:
                below[b] |= below[m]
    for a in range(k):
        if below[a] >> a & 1:
            raise TanglegramError(f"poset relation is not antisymmetric at {elems[a]}")
    below_sets = {elems[b]: {elems[a] for a in range(k) if below[b] >> a & 1} for b in range(k)}
    covers = {}
    for b in range(k):
        strict_lower = 0
        for a in range(k):
            if below[b] >> a & 1:
                strict_lower |= below[a]
        cov = below[b] & ~strict_lower
        covers[elems[b]] = {elems[a] for a in range(k) if cov >> a & 1}
    # Kahn from the minimal elements upward
    remaining = {e: len(below_sets[e]) for e in elems}
    above: dict[Element, list[Element]] = {e: [] for e in elems}
    for b, lows in below_sets.items():
        for a in lows:
            above[a].append(b)
    heap = [_sort_key(e) + (idx[e],) for e in elems if remaining[e] == 0]
    heapq.heapify(heap)
    ext: list[Element] = []
    while heap:
        e = elems[heapq.heappop(heap)[-1]]
        ext.append(e)
        for b in above[e]:
            remaining[b] -= 1
            if remaining[b] == 0:
                heapq.heappush(heap, _sort_key(b) + (idx[b],))
    return DecisionPoset(elems, below_sets, covers, ext)


def cross_sets(mp: MultiPartition, poset: DecisionPoset, tg: Tanglegram | None = None) -> dict[Element, CrossSet]:
    tg = tg or mp.tg
    vw = _View(tg, mp.active)
    out: dict[Element, CrossSet] = {}

    def make(owner: Element, i: int, js: Iterable[int]) -> None:
        out[owner] = CrossSet(owner, frozenset((i, j) for j in js if j != i))

    def t_all(u: int) -> set[int]:
        return set(tg.t.leaves(u))

    def s_all(v: int) -> set[int]:
        return vw.s_in(v) | vw.s_out(v)

    for u, v in mp.lT:
        e = ("L", u, v)
        (i,) = vw.t_out(u)
        cut = set()
        for c in poset.covers[e]:
            if c[0] in ("T", "L"):
                cut |= t_all(c[1])
        make(e, i, t_all(u) - cut)
    for u, v in mp.lS:
        e = ("L", u, v)
        (i,) = vw.s_out(v)
        cut = set()
        for c in poset.covers[e]:
            if c[0] == "S":
                cut |= s_all(c[1])
            elif c[0] == "L":
                cut |= s_all(c[2])
        make(e, i, s_all(v) - cut)
    for e in mp.m0:
        i = mp.owner[e]
        kind = mp.m0_kind[i]
        if e[0] == "T":
            if kind == "A":
                cut = set()
                for c in poset.covers[e]:
                    if c[0] == "L":
                        cut |= t_all(c[1])
                make(e, i, t_all(e[1]) - cut)
            else:
                make(e, i, t_all(e[1]))
        else:
            if kind == "B":
                cut = set()
                for c in poset.covers[e]:
                    if c[0] == "L":
                        cut |= s_all(c[2])
                make(e, i, s_all(e[1]) - cut)
            else:
                make(e, i, s_all(e[1]))
    for e in mp.mT:
        make(e, mp.owner[e], t_all(e[1]))
    for e in mp.mS:
        make(e, mp.owner[e], s_all(e[1]))
    return out


def undecided_elements(mp: MultiPartition, poset: DecisionPoset) -> set[Element]:
    """M(I)_0 elements whose cross set subtracts a covered pair of L(I)_1.

    That pair is never flipped on behalf of the inserted edge, so the
    subtraction can leave the decisive crossings out; these elements join
    the enumerated subset C instead of being decided by majority.
    """
    l1 = {("L", u, v) for u, v in mp.l1}
    out = set()
    for e in mp.m0:
        kind = mp.m0_kind[mp.owner[e]]
        subtracting = (e[0] == "T" and kind == "A") or (e[0] == "S" and kind == "B")
        if subtracting and poset.covers[e] & l1:
            out.add(e)
    return out


def _majority(tg: Tanglegram, ly: Layout, cs: CrossSet | None) -> bool:
    if cs is None or not cs.pairs:
        return False
    return 2 * crossings_involving(tg, ly, cs.pairs) > len(cs.pairs)


def run_subset(
    tg: Tanglegram,
    start: Layout,
    mp: MultiPartition,
    poset: DecisionPoset,
    crosses: dict[Element, CrossSet],
    subset: Iterable[Element] = (),
    trace: list[Element] | None = None,
    undecided: set[Element] | None = None,
) -> Layout:
    """One pass of the decision loop for a fixed subset C of the free elements."""
    chosen = set(subset)
    l_dec = {("L", u, v) for u, v in chain(mp.lT, mp.lS)}
    m_dec = (mp.m0 | mp.mT | mp.mS) - (undecided or set())
    ly = start
    for e in reversed(poset.extension):
        if e in chosen or ((e in l_dec or e in m_dec) and _majority(tg, ly, crosses.get(e))):
            if e[0] == "L":
                ly = apply_paired_flip(tg, ly, (e[1], e[2]), mp.active)
            else:
                ly = apply_subtree_switch(tg, ly, e[1], e[0])
            if trace is not None:
                trace.append(e)
    return ly


def multi_insertion_report(tg: Tanglegram, active: Iterable[int], start: Layout | None = None) -> MultiResult:
    act = frozenset(active)
    untangled, pairs = _residual_pairs(tg, act)
    if start is None:
        start = untangled
    mp = partition_sets(tg, act, pairs)
    poset = build_poset(mp)
    crosses = cross_sets(mp, poset, tg)
    undecided = undecided_elements(mp, poset)
    free = sorted((("L", u, v) for u, v in mp.l1), key=_sort_key) + sorted(mp.m1 | undecided, key=_sort_key)
    best = start
    best_c = count_crossings(tg, start)
    best_subset: tuple[Element, ...] = ()
    for mask in range(1 << len(free)):
        subset = tuple(e for b, e in enumerate(free) if mask >> b & 1)
        ly = run_subset(tg, start, mp, poset, crosses, subset, undecided=undecided)
        c = count_crossings(tg, ly)
        if c < best_c:
            best, best_c, best_subset = ly, c, subset
    return MultiResult(best, best_c, best_subset, start)


def multi_insertion(tg: Tanglegram, active: Iterable[int]) -> Layout:
    """Layout planar on ``active`` with the fewest crossings possible."""
    return multi_insertion_report(tg, active).layout


# iterated single-edge insertion


def _extend(order: list[int], block: set[int], new: int) -> list[int]:
    """Insert ``new`` right after the contiguous block of ``block`` members."""
    last = max(k for k, lab in enumerate(order) if lab in block)
    return order[: last + 1] + [new] + order[last + 1 :]


def iterated_insertion(tg: Tanglegram, active: Iterable[int], trace: list[int] | None = None) -> Layout:
    """Insert the missing edges one at a time in increasing label order.

    ``trace`` collects the crossing count after each insertion.
    """
    act = frozenset(active)
    full, pairs = _residual_pairs(tg, act)
    t, s = tg.t, tg.s
    ly = restrict_layout(full, act, tg.phi)
    m = list(pairs)
    j = set(act)
    for i in sorted(set(tg.labels) - act):
        labels = frozenset(j | {i})
        ct = active_counts(t, labels)
        cs = active_counts(s, [tg.phi[a] for a in labels])
        ti, si = t.leaf(i), s.leaf(tg.phi[i])
        u0 = induced_parent(t, ti, ct)
        v0 = induced_parent(s, si, cs)
        x = _extend(list(ly.x), {lab for lab in t.leaves(u0) if lab in j}, i)
        y = _extend(list(ly.y), {lab for lab in s.leaves(v0) if tg.phi_inv[lab] in j}, tg.phi[i])
        ly = Layout(x, y)
        m_t = [(u, v) for u, v in m if t.lt(ti, u) and not s.lt(si, v)]
        m_s = [(u, v) for u, v in m if not t.lt(ti, u) and s.lt(si, v)]
        m = [p for p in m if p not in m_t and p not in m_s]
        _, steps, final, _, _ = plan_insertion(tg, i, labels, m_t, m_s, u0, v0)
        ly = run_plan(tg, ly, i, steps, final, u0, v0, frozenset(j))
        j.add(i)
        if trace is not None:
            trace.append(count_crossings(tg, ly))
    return ly


def iterated_bound(n: int, k: int) -> int:
    """(n - k)(n + k - 5) / 2, the guaranteed crossing bound for k active edges."""
    return (n - k) * (n + k - 5) // 2
