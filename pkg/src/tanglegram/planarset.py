"""Planar layouts as the paired-flip closure, the flip graph, irreducibility."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import Tanglegram, TanglegramError, Tree
from .layout import Layout, apply_paired_flip, count_crossings, format_layout
from .untangle import modified_untangle

__all__ = [
    "FlipGraph",
    "leaf_matched_pairs",
    "all_planar_layouts",
    "flip_graph",
    "format_flip_graph",
    "is_flip_graph_connected",
    "is_irreducible",
    "irreducible_component",
]


@dataclass
class FlipGraph:
    nodes: list[Layout]
    adjacency: dict[int, set[int]] = field(default_factory=dict)

    def edge_count(self) -> int:
        return sum(len(v) for v in self.adjacency.values()) // 2


def _planar_start(tg: Tanglegram) -> tuple[Layout, list[tuple[int, int]]]:
    ly, pairs = modified_untangle(tg)
    if count_crossings(tg, ly) != 0:
        raise TanglegramError("tanglegram is not planar")
    return ly, pairs


def leaf_matched_pairs(tg: Tanglegram) -> list[tuple[int, int]]:
    """Internal (u, v) whose leaf sets are matched by phi, via leaf-set hashing."""
    by_set: dict[frozenset[int], int] = {}
    for v in tg.s.internal_vertices():
        by_set[frozenset(tg.phi_inv[lab] for lab in tg.s.leaves(v))] = v
    out = []
    for u in tg.t.internal_vertices():
        v = by_set.get(frozenset(tg.t.leaves(u)))
        if v is not None:
            out.append((u, v))
    return out


def flip_graph(tg: Tanglegram) -> FlipGraph:
    """Breadth-first closure of the untangle layout under paired flips."""
    start, pairs = _planar_start(tg)
    index = {start: 0}
    graph = FlipGraph([start], {0: set()})
    queue = deque([start])
    while queue:
        ly = queue.popleft()
        k = index[ly]
        for pair in pairs:
            nxt = apply_paired_flip(tg, ly, pair)
            if nxt not in index:
                index[nxt] = len(graph.nodes)
                graph.nodes.append(nxt)
                graph.adjacency[index[nxt]] = set()
                queue.append(nxt)
            j = index[nxt]
            if j != k:
                graph.adjacency[k].add(j)
                graph.adjacency[j].add(k)
    return graph


def all_planar_layouts(tg: Tanglegram) -> set[Layout]:
    return set(flip_graph(tg).nodes)


def is_flip_graph_connected(graph: FlipGraph) -> bool:
    if not graph.nodes:
        return True
    seen = {0}
    stack = [0]
    while stack:
        for j in graph.adjacency[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(graph.nodes)


def format_flip_graph(graph: FlipGraph) -> str:
    lines = []
    for k in range(len(graph.nodes)):
        lines.append(f"{k}: " + " ".join(map(str, sorted(graph.adjacency[k]))))
    lines.append("")
    for k, ly in enumerate(graph.nodes):
        x, y = format_layout(ly).splitlines()
        lines.append(f"node {k}  {x}  {y}")
    return "\n".join(lines) + "\n"


def is_irreducible(tg: Tanglegram) -> bool:
    if tg.n < 2:
        raise TanglegramError("irreducibility is defined for size at least 2")
    return leaf_matched_pairs(tg) == [(tg.t.root, tg.s.root)]


def _contract(tree: Tree, cut: dict[int, int]) -> Tree:
    """Replace each subtree rooted at a key of ``cut`` by a leaf labelled cut[v]."""
    children: list[tuple[int, int] | None] = []
    label: list[int | None] = []
    stack: list[tuple[int, int, int]] = [(tree.root, -1, 0)]
    while stack:
        v, par, slot = stack.pop()
        nid = len(children)
        if par >= 0:
            a, b = children[par]
            children[par] = (nid, b) if slot == 0 else (a, nid)
        if v in cut or tree.children[v] is None:
            children.append(None)
            label.append(cut.get(v, tree.label[v]))
            continue
        children.append((-1, -1))
        label.append(None)
        c0, c1 = tree.children[v]
        stack.append((c1, nid, 1))
        stack.append((c0, nid, 0))
    return Tree(children, label, 0)


def irreducible_component(tg: Tanglegram) -> Tanglegram:
    """Contract every maximal non-root leaf-matched pair to one matched leaf pair.

    The contracted pair keeps the smallest T label of its block and that
    label's phi image.
    """
    if tg.n < 2:
        raise TanglegramError("irreducible component is defined for size at least 2")
    pairs = [p for p in leaf_matched_pairs(tg) if p != (tg.t.root, tg.s.root)]
    maximal = [
        (u, v) for u, v in pairs if not any(u2 != u and tg.t.lt(u, u2) for u2, _ in pairs)
    ]
    cut_t: dict[int, int] = {}
    cut_s: dict[int, int] = {}
    for u, v in maximal:
        lab = min(tg.t.leaves(u))
        cut_t[u] = lab
        cut_s[v] = tg.phi[lab]
    t = _contract(tg.t, cut_t)
    s = _contract(tg.s, cut_s)
    return Tanglegram(t, s, {lab: tg.phi[lab] for lab in t.labels})
