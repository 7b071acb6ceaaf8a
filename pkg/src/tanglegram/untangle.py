"""ModifiedUntangle: a planar layout plus the leaf-matched pairs it meets.

The table P is stored row-wise: ``mask[u]`` is an int bitmask over S vertex
ids, bit v set iff some active leaf under u is matched to a leaf under v.
"""

from __future__ import annotations

from typing import Iterable

from .core import Tanglegram, TanglegramError, Tree
from .layout import Layout, count_crossings

__all__ = [
    "BoolTable",
    "PartialLayout",
    "build_table",
    "refine",
    "modified_untangle",
    "is_planar",
    "reduce_pairs",
    "active_counts",
]


class BoolTable:
    """The reachability table P restricted to an active label set."""

    __slots__ = ("mask", "active")

    def __init__(self, mask: list[int], active: frozenset[int]):
        self.mask = mask
        self.active = active

    def get(self, u: int, v: int) -> bool:
        return bool(self.mask[u] >> v & 1)

    def __getitem__(self, key: tuple[int, int]) -> bool:
        return self.get(*key)

    def true_entries(self) -> set[tuple[int, int]]:
        out = set()
        for u, m in enumerate(self.mask):
            v = 0
            while m:
                if m & 1:
                    out.add((u, v))
                m >>= 1
                v += 1
        return out


def _ancestor_masks(tree: Tree) -> list[int]:
    """For each vertex, the bitmask of itself and all its ancestors."""
    masks = [0] * len(tree)
    stack = [tree.root]
    masks[tree.root] = 1 << tree.root
    while stack:
        v = stack.pop()
        ch = tree.children[v]
        if ch is not None:
            for c in ch:
                masks[c] = masks[v] | (1 << c)
                stack.append(c)
    return masks


def build_table(tg: Tanglegram, active: Iterable[int] | None = None) -> BoolTable:
    act = frozenset(tg.labels if active is None else active)
    if not act <= set(tg.labels):
        raise TanglegramError("active labels not in the tanglegram")
    anc = _ancestor_masks(tg.s)
    mask = [0] * len(tg.t)
    for u in tg.t.postorder():
        ch = tg.t.children[u]
        if ch is None:
            lab = tg.t.label[u]
            if lab in act:
                mask[u] = anc[tg.s.leaf(tg.phi[lab])]
        else:
            mask[u] = mask[ch[0]] | mask[ch[1]]
    return BoolTable(mask, act)


class PartialLayout:
    """Ordered vertex lists (x over T, y over S) and the bipartite edges E.

    ``nbr_t[u]`` holds the S neighbours of u in x, ``nbr_s[v]`` the T
    neighbours of v in y.
    """

    __slots__ = ("tg", "tbl", "x", "y", "nbr_t", "nbr_s")

    def __init__(self, tg: Tanglegram, tbl: BoolTable):
        self.tg = tg
        self.tbl = tbl
        rt, rs = tg.t.root, tg.s.root
        self.x = [rt]
        self.y = [rs]
        self.nbr_t: dict[int, set[int]] = {rt: set()}
        self.nbr_s: dict[int, set[int]] = {rs: set()}
        if tbl.get(rt, rs):
            self.nbr_t[rt].add(rs)
            self.nbr_s[rs].add(rt)

    def copy(self) -> "PartialLayout":
        new = PartialLayout.__new__(PartialLayout)
        new.tg, new.tbl = self.tg, self.tbl
        new.x, new.y = list(self.x), list(self.y)
        new.nbr_t = {k: set(v) for k, v in self.nbr_t.items()}
        new.nbr_s = {k: set(v) for k, v in self.nbr_s.items()}
        return new

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {(u, v) for u, vs in self.nbr_t.items() for v in vs}

    def degree(self, side: str, w: int) -> int:
        return len(self.nbr_t[w] if side == "T" else self.nbr_s[w])

    def select(self) -> tuple[str, int, int] | None:
        """Internal vertex of highest degree; ties go to the earliest in x, then y."""
        best: tuple[str, int, int] | None = None
        bestdeg = -1
        tch, sch = self.tg.t.children, self.tg.s.children
        for u in self.x:
            if tch[u] is not None and len(self.nbr_t[u]) > bestdeg:
                best, bestdeg = ("T", u, len(self.nbr_t[u])), len(self.nbr_t[u])
        for v in self.y:
            if sch[v] is not None and len(self.nbr_s[v]) > bestdeg:
                best, bestdeg = ("S", v, len(self.nbr_s[v])), len(self.nbr_s[v])
        return best

    def refine_in_place(self, side: str, u: int) -> None:
        if side == "T":
            own, other, tree = self.x, self.y, self.tg.t
            nbr_own, nbr_other = self.nbr_t, self.nbr_s
            mask = self.tbl.mask

            def adjacent(c: int, b: int) -> bool:
                return bool(mask[c] >> b & 1)

        elif side == "S":
            own, other, tree = self.y, self.x, self.tg.s
            nbr_own, nbr_other = self.nbr_s, self.nbr_t
            mask = self.tbl.mask

            def adjacent(c: int, b: int) -> bool:
                return bool(mask[b] >> c & 1)

        else:
            raise TanglegramError(f"side must be 'T' or 'S', not {side!r}")
        if u not in nbr_own:
            raise TanglegramError(f"vertex {u} is not in the partial layout")
        ch = tree.children[u]
        if ch is None:
            raise TanglegramError("cannot refine a leaf")
        u1, u2 = ch
        n1: set[int] = set()
        n2: set[int] = set()
        for b in nbr_own.pop(u):
            nbr_other[b].discard(u)
            if adjacent(u1, b):
                n1.add(b)
                nbr_other[b].add(u1)
            if adjacent(u2, b):
                n2.add(b)
                nbr_other[b].add(u2)
        nbr_own[u1] = n1
        nbr_own[u2] = n2
        if n1 and n2:
            pos = {b: k for k, b in enumerate(other)}
            k = max(pos[b] for b in n1)
            # non-strict: a neighbour shared at the boundary keeps u1 first
            keep = all(pos[b] >= k for b in n2)
        else:
            # a child without edges goes second
            keep = bool(n1) or not n2
        idx = own.index(u)
        own[idx : idx + 1] = [u1, u2] if keep else [u2, u1]

    def is_complete(self) -> bool:
        return all(self.tg.t.children[u] is None for u in self.x) and all(
            self.tg.s.children[v] is None for v in self.y
        )

    def layout(self) -> Layout:
        return Layout([self.tg.t.label[u] for u in self.x], [self.tg.s.label[v] for v in self.y])


def refine(pl: PartialLayout, u: int, side: str = "T") -> PartialLayout:
    """Replace u by its children in the order chosen by the last-adjacency test."""
    new = pl.copy()
    new.refine_in_place(side, u)
    return new


def modified_untangle(
    tg: Tanglegram, active: Iterable[int] | None = None
) -> tuple[Layout, list[tuple[int, int]]]:
    """Layout of tg that is planar on the active labels (when their
    subtanglegram is planar) and the pairs recorded at degree-one steps."""
    pl = PartialLayout(tg, build_table(tg, active))
    pairs: list[tuple[int, int]] = []
    while True:
        pick = pl.select()
        if pick is None:
            break
        side, w, deg = pick
        if deg == 1:
            if side == "T":
                pairs.append((w, next(iter(pl.nbr_t[w]))))
            else:
                pairs.append((next(iter(pl.nbr_s[w])), w))
        pl.refine_in_place(side, w)
    return pl.layout(), pairs


def is_planar(tg: Tanglegram) -> bool:
    ly, _ = modified_untangle(tg)
    return count_crossings(tg, ly) == 0


def active_counts(tree: Tree, labels: Iterable[int]) -> list[int]:
    """Number of leaves from ``labels`` under every vertex."""
    keep = set(labels)
    cnt = [0] * len(tree)
    for v in tree.postorder():
        ch = tree.children[v]
        cnt[v] = (tree.label[v] in keep) if ch is None else cnt[ch[0]] + cnt[ch[1]]
    return cnt


def _reduce(tree: Tree, cnt: list[int], v: int) -> int:
    while tree.children[v] is not None:
        a, b = tree.children[v]
        if cnt[a] and cnt[b]:
            break
        v = a if cnt[a] else b
    return v


def reduce_pairs(
    pairs: Iterable[tuple[int, int]], tg: Tanglegram, active: Iterable[int] | None = None
) -> list[tuple[int, int]]:
    """L(I): pairs with more than one matched active leaf, pushed down to
    the vertices of the induced subtanglegram, first occurrence kept."""
    act = set(tg.labels if active is None else active)
    ct = active_counts(tg.t, act)
    cs = active_counts(tg.s, [tg.phi[i] for i in act])
    out: list[tuple[int, int]] = []
    seen = set()
    for u, v in pairs:
        if ct[u] == cs[v] > 1:
            red = (_reduce(tg.t, ct, u), _reduce(tg.s, cs, v))
            if red not in seen:
                seen.add(red)
                out.append(red)
    return out
