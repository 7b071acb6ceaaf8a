"""Optimal insertion of one between-tree edge into a planar subtanglegram.

E sets hold T labels of between-tree edges; S-side sets are translated
through phi^-1. Edge i itself never belongs to an E set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .core import PreconditionError, Tanglegram, TanglegramError, Tree
from .layout import (
    Layout,
    apply_paired_flip,
    apply_subtree_switch,
    count_crossings,
    edge_crossings,
    restrict_layout,
)
from .untangle import modified_untangle, reduce_pairs

__all__ = [
    "Step",
    "InsertionContext",
    "build_context",
    "plan_insertion",
    "run_plan",
    "insert_edge",
    "crtei",
    "crtei_min",
    "induced_parent",
]


@dataclass(frozen=True)
class Step:
    """One decision: ``kind`` is 'pair' (paired flip) or 'switch'."""

    kind: str
    target: tuple[int, int] | int
    side: str
    eset: frozenset[int]


@dataclass
class InsertionContext:
    i: int
    labels: frozenset[int]
    u0: int
    v0: int
    l_i: list[tuple[int, int]]
    l_t: list[tuple[int, int]]
    l_s: list[tuple[int, int]]
    u_smax: tuple[int, int] | None
    v_tmax: tuple[int, int] | None
    case: int
    steps: list[Step]
    final: tuple[frozenset[int], frozenset[int]] | None
    start: Layout
    esets: dict[str, frozenset[int]] = field(default_factory=dict)


def induced_parent(tree: Tree, leaf_vertex: int, cnt: list[int]) -> int:
    """Parent of a leaf inside the induced subtree whose active counts are cnt."""
    w = tree.parent[leaf_vertex]
    if w is None:
        raise TanglegramError("a single leaf has no parent")
    while cnt[w] == 1:
        w = tree.parent[w]
        if w is None:
            raise TanglegramError("leaf is alone in the induced subtree")
    return w


class _Sides:
    """Leaf sets of T and S vertices restricted to labels, as T labels."""

    def __init__(self, tg: Tanglegram, labels: frozenset[int]):
        self.tg = tg
        self.labels = labels

    def leafset(self, side: str, w: int) -> frozenset[int]:
        if side == "T":
            return frozenset(lab for lab in self.tg.t.leaves(w) if lab in self.labels)
        inv = self.tg.phi_inv
        return frozenset(inv[lab] for lab in self.tg.s.leaves(w) if inv[lab] in self.labels)

    def tree(self, side: str) -> Tree:
        return self.tg.t if side == "T" else self.tg.s


def _chain_case(
    sides: _Sides, i: int, chain_side: str, chain: list[tuple[int, int]], u0: int, v0: int
) -> list[Step]:
    """Case u0 > u_Smax (chain_side 'S') or its mirror v0 > v_Tmax ('T').

    The chain lies over the leaf on chain_side; its sorted pairs are
    processed top-down between the two parent switches.
    """
    other = "T" if chain_side == "S" else "S"
    idx = 1 if chain_side == "S" else 0
    near = v0 if chain_side == "S" else u0  # parent on the chain side
    far = u0 if chain_side == "S" else v0  # parent on the other side
    top = chain[-1][0 if chain_side == "S" else 1]  # top pair's vertex on the other side
    e_far = sides.leafset(other, far) - sides.leafset(other, top) - {i}
    e_near = sides.leafset(chain_side, near) - {i}
    steps = [Step("switch", far, other, e_far)]
    below = sides.leafset(chain_side, near)
    chain_sets = []
    for pair in chain:
        cur = sides.leafset(chain_side, pair[idx])
        chain_sets.append(cur - below - {i})
        below = cur
    for pair, eset in reversed(list(zip(chain, chain_sets))):
        steps.append(Step("pair", pair, chain_side, eset))
    steps.append(Step("switch", near, chain_side, e_near))
    return steps


def plan_insertion(
    tg: Tanglegram,
    i: int,
    labels: Iterable[int],
    l_t: list[tuple[int, int]],
    l_s: list[tuple[int, int]],
    u0: int,
    v0: int,
) -> tuple[int, list[Step], tuple[frozenset[int], frozenset[int]] | None, list, list]:
    """Case number, ordered decisions, final (E(u0), E(v0)) for the general case,
    and the sorted pair lists."""
    labs = frozenset(labels)
    sides = _Sides(tg, labs)
    t, s = tg.t, tg.s
    # depth order is the ancestor order on each chain
    l_s = sorted(l_s, key=lambda p: -s.depth[p[1]])
    l_t = sorted(l_t, key=lambda p: -t.depth[p[0]])
    if l_s and t.lt(l_s[-1][0], u0):
        return 1, _chain_case(sides, i, "S", l_s, u0, v0), None, l_t, l_s
    if l_t and s.lt(l_t[-1][1], v0):
        return 2, _chain_case(sides, i, "T", l_t, u0, v0), None, l_t, l_s
    steps: list[Step] = []
    below = sides.leafset("T", u0)
    t_sets = []
    for u, _v in l_t:
        cur = sides.leafset("T", u)
        t_sets.append(cur - below - {i})
        below = cur
    below = sides.leafset("S", v0)
    s_sets = []
    for _u, v in l_s:
        cur = sides.leafset("S", v)
        s_sets.append(cur - below - {i})
        below = cur
    for pair, eset in reversed(list(zip(l_t, t_sets))):
        steps.append(Step("pair", pair, "T", eset))
    for pair, eset in reversed(list(zip(l_s, s_sets))):
        steps.append(Step("pair", pair, "S", eset))
    e_u0 = sides.leafset("T", u0) - {i}
    e_v0 = sides.leafset("S", v0) - {i}
    # disjointness of the chain sets from each other and from the parents' sets
    t_union = frozenset().union(*t_sets)
    s_union = frozenset().union(*s_sets)
    if t_union & s_union or t_union & e_v0 or s_union & e_u0:
        raise TanglegramError("edge sets overlap outside the parents; inconsistent pair lists")
    return 3, steps, (e_u0, e_v0), l_t, l_s


def _majority(tg: Tanglegram, ly: Layout, i: int, eset: frozenset[int]) -> bool:
    return 2 * edge_crossings(tg, ly, i, eset) > len(eset)


def run_plan(
    tg: Tanglegram,
    ly: Layout,
    i: int,
    steps: list[Step],
    final: tuple[frozenset[int], frozenset[int]] | None,
    u0: int,
    v0: int,
    within: Iterable[int] | None = None,
    trace: list[tuple[Step, bool]] | None = None,
) -> Layout:
    """Apply the planned decisions; ``trace`` collects (step, performed)."""
    for step in steps:
        act = _majority(tg, ly, i, step.eset)
        if trace is not None:
            trace.append((step, act))
        if not act:
            continue
        if step.kind == "pair":
            ly = apply_paired_flip(tg, ly, step.target, within)  # type: ignore[arg-type]
        else:
            ly = apply_subtree_switch(tg, ly, step.target, step.side)  # type: ignore[arg-type]
    if final is None:
        return ly
    e_u0, e_v0 = final
    if not e_u0 & e_v0:
        if _majority(tg, ly, i, e_u0):
            ly = apply_subtree_switch(tg, ly, u0, "T")
        if _majority(tg, ly, i, e_v0):
            ly = apply_subtree_switch(tg, ly, v0, "S")
        return ly
    xs = apply_subtree_switch(tg, ly, u0, "T")
    candidates = [ly, xs, apply_subtree_switch(tg, ly, v0, "S"), apply_subtree_switch(tg, xs, v0, "S")]
    return min(candidates, key=lambda c: count_crossings(tg, c))


def _split_pairs(tg: Tanglegram, i: int, pairs: Iterable[tuple[int, int]]):
    ti, si = tg.t.leaf(i), tg.s.leaf(tg.phi[i])
    l_t, l_s = [], []
    for u, v in pairs:
        above_t, above_s = tg.t.lt(ti, u), tg.s.lt(si, v)
        if above_t and not above_s:
            l_t.append((u, v))
        elif above_s and not above_t:
            l_s.append((u, v))
    return l_t, l_s


def build_context(tg: Tanglegram, i: int) -> InsertionContext:
    if i not in tg.phi:
        raise TanglegramError(f"unknown label {i}")
    if tg.n < 2:
        raise TanglegramError("insertion needs at least two edges")
    rest = frozenset(tg.labels) - {i}
    start, pairs = modified_untangle(tg, rest)
    if count_crossings(tg, restrict_layout(start, rest, tg.phi)) != 0:
        raise PreconditionError(f"the subtanglegram without edge {i} is not planar")
    l_i = reduce_pairs(pairs, tg, rest)
    labels = frozenset(tg.labels)
    u0 = tg.t.parent[tg.t.leaf(i)]
    v0 = tg.s.parent[tg.s.leaf(tg.phi[i])]
    l_t, l_s = _split_pairs(tg, i, l_i)
    case, steps, final, l_t, l_s = plan_insertion(tg, i, labels, l_t, l_s, u0, v0)
    ctx = InsertionContext(
        i=i,
        labels=labels,
        u0=u0,
        v0=v0,
        l_i=l_i,
        l_t=l_t,
        l_s=l_s,
        u_smax=l_s[-1] if l_s else None,
        v_tmax=l_t[-1] if l_t else None,
        case=case,
        steps=steps,
        final=final,
        start=start,
    )
    if final is not None:
        ctx.esets["u0"], ctx.esets["v0"] = final
    return ctx


def insert_edge(tg: Tanglegram, i: int) -> Layout:
    """Layout planar on all edges but i with the fewest crossings possible."""
    ctx = build_context(tg, i)
    return run_plan(tg, ctx.start, i, ctx.steps, ctx.final, ctx.u0, ctx.v0, ctx.labels - {i})


def crtei(tg: Tanglegram, i: int) -> int:
    return count_crossings(tg, insert_edge(tg, i))


def crtei_min(tg: Tanglegram) -> int | None:
    """Minimum of crtei over labels with planar residual; None when no label qualifies."""
    best = None
    for i in tg.labels:
        try:
            c = crtei(tg, i)
        except PreconditionError:
            continue
        best = c if best is None else min(best, c)
    return best
