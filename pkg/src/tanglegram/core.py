"""Rooted binary trees, tanglegrams, induced substructures and canonical keys."""

from __future__ import annotations

import random
import re
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "TanglegramError",
    "ParseError",
    "PreconditionError",
    "Tree",
    "Tanglegram",
    "parse_tree",
    "parse_tgl",
    "format_tgl",
    "induced_subtree",
    "induced_subtree_map",
    "induced_subtanglegram",
    "canonical_key",
    "tree_shapes",
    "tree_from_shape",
    "random_tree",
    "random_tanglegram",
    "caterpillar_string",
    "caterpillar_insertion_instance",
]


class TanglegramError(ValueError):
    """Invalid argument passed to a tanglegram operation."""


class ParseError(TanglegramError):
    """Malformed text input; carries the 1-based line and offending token."""

    def __init__(self, message: str, line: int = 0, token: str = ""):
        super().__init__(f"line {line}: {message} (token {token!r})" if line else message)
        self.line = line
        self.token = token


class PreconditionError(TanglegramError):
    """An algorithm precondition does not hold (e.g. non-planar residual)."""


class Tree:
    """Immutable rooted binary tree.

    Vertices are dense integer ids. ``children[v]`` is ``None`` for a leaf and
    an ordered pair otherwise; ``label[v]`` is the positive leaf label of a
    leaf and ``None`` for internal vertices.
    """

    __slots__ = (
        "children",
        "label",
        "root",
        "parent",
        "depth",
        "_tin",
        "_tout",
        "_leaf_seq",
        "_lo",
        "_hi",
        "_leaf_of",
        "_str",
    )

    def __init__(
        self,
        children: Sequence[tuple[int, int] | None],
        label: Sequence[int | None],
        root: int = 0,
    ):
        self.children = tuple(None if c is None else (int(c[0]), int(c[1])) for c in children)
        self.label = tuple(label)
        self.root = root
        nv = len(self.children)
        if len(self.label) != nv or not 0 <= root < nv:
            raise TanglegramError("children and label tables disagree in length")
        parent: list[int | None] = [None] * nv
        depth = [0] * nv
        tin = [0] * nv
        tout = [0] * nv
        lo = [0] * nv
        hi = [0] * nv
        leaf_seq: list[int] = []
        leaf_of: dict[int, int] = {}
        seen = [False] * nv
        clock = 0
        # iterative DFS; deep caterpillars overflow the recursion limit
        stack: list[tuple[int, bool]] = [(root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                tout[v] = clock
                hi[v] = len(leaf_seq)
                continue
            if seen[v]:
                raise TanglegramError("vertex reachable twice; not a tree")
            seen[v] = True
            tin[v] = clock
            clock += 1
            lo[v] = len(leaf_seq)
            ch = self.children[v]
            if ch is None:
                lab = self.label[v]
                if not isinstance(lab, int) or lab <= 0:
                    raise TanglegramError(f"leaf {v} needs a positive integer label")
                if lab in leaf_of:
                    raise TanglegramError(f"duplicate leaf label {lab}")
                leaf_of[lab] = v
                leaf_seq.append(lab)
                tout[v] = clock
                hi[v] = len(leaf_seq)
                continue
            a, b = ch
            if a == b:
                raise TanglegramError("a vertex needs two distinct children")
            parent[a] = v
            parent[b] = v
            depth[a] = depth[b] = depth[v] + 1
            stack.append((v, True))
            stack.append((b, False))
            stack.append((a, False))
        if not all(seen):
            raise TanglegramError("some vertices are not reachable from the root")
        self.parent = tuple(parent)
        self.depth = tuple(depth)
        self._tin = tin
        self._tout = tout
        self._lo = lo
        self._hi = hi
        self._leaf_seq = tuple(leaf_seq)
        self._leaf_of = leaf_of
        self._str: str | None = None

    # basic queries
    def __len__(self) -> int:
        return len(self.children)

    @property
    def n_leaves(self) -> int:
        return len(self._leaf_seq)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(sorted(self._leaf_seq))

    def vertices(self) -> range:
        return range(len(self.children))

    def is_leaf(self, v: int) -> bool:
        return self.children[v] is None

    def internal_vertices(self) -> list[int]:
        return [v for v, c in enumerate(self.children) if c is not None]

    def leaf(self, lab: int) -> int:
        """Vertex id of the leaf carrying ``lab``."""
        try:
            return self._leaf_of[lab]
        except KeyError:
            raise TanglegramError(f"unknown leaf label {lab}") from None

    def leaves(self, v: int) -> tuple[int, ...]:
        """Labels of leaf(v), in stored child order."""
        return self._leaf_seq[self._lo[v] : self._hi[v]]

    def leaf_count(self, v: int) -> int:
        return self._hi[v] - self._lo[v]

    def leq(self, a: int, b: int) -> bool:
        """a <= b in the ancestor order (b is a or an ancestor of a)."""
        return self._tin[b] <= self._tin[a] and self._tout[a] <= self._tout[b]

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def ancestors(self, v: int) -> Iterator[int]:
        """Proper ancestors of v, nearest first."""
        p = self.parent[v]
        while p is not None:
            yield p
            p = self.parent[p]

    def postorder(self) -> list[int]:
        out: list[int] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            ch = self.children[v]
            if ch is not None:
                stack.extend(ch)
        out.reverse()
        return out

    def leaf_order(self) -> tuple[int, ...]:
        """Leaf labels top to bottom in the stored embedding."""
        return self._leaf_seq

    # text form
    def __str__(self) -> str:
        if self._str is None:
            parts: list[str] = []
            stack: list[int | str] = [self.root]
            while stack:
                item = stack.pop()
                if isinstance(item, str):
                    parts.append(item)
                    continue
                ch = self.children[item]
                if ch is None:
                    parts.append(str(self.label[item]))
                else:
                    stack.extend([")", ch[1], ",", ch[0]])
                    parts.append("(")
            self._str = "".join(parts)
        return self._str

    def __repr__(self) -> str:
        return f"Tree({self})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Tree) and str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))

    @classmethod
    def leaf_only(cls, lab: int) -> "Tree":
        return cls([None], [lab], 0)


_TOKEN = re.compile(r"\s*(\(|\)|,|\d+|\S)")


def parse_tree(text: str, line: int = 0) -> Tree:
    """Parse nested-parentheses notation such as ``(((1,2),3),(4,5))``."""
    children: list[tuple[int, int] | None] = []
    label: list[int | None] = []
    stack: list[list[int]] = []
    root: int | None = None
    expect_item = True
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1)
        pos = m.end()
        if root is not None:
            raise ParseError("trailing input after tree", line, tok)
        if tok == "(":
            if not expect_item:
                raise ParseError("unexpected '('", line, tok)
            stack.append([])
        elif tok.isdigit():
            if not expect_item:
                raise ParseError("unexpected label", line, tok)
            if int(tok) <= 0:
                raise ParseError("leaf labels must be positive", line, tok)
            children.append(None)
            label.append(int(tok))
            v = len(children) - 1
            if stack:
                stack[-1].append(v)
                expect_item = False
            else:
                root = v
        elif tok == ",":
            if expect_item or not stack or len(stack[-1]) != 1:
                raise ParseError("misplaced ','", line, tok)
            expect_item = True
        elif tok == ")":
            if expect_item or not stack:
                raise ParseError("misplaced ')'", line, tok)
            items = stack.pop()
            if len(items) != 2:
                raise ParseError("every internal vertex needs exactly two children", line, tok)
            children.append((items[0], items[1]))
            label.append(None)
            v = len(children) - 1
            if stack:
                stack[-1].append(v)
            else:
                root = v
        else:
            raise ParseError("unexpected character", line, tok)
    if root is None:
        raise ParseError("incomplete tree", line, text[-1:] if text else "<empty>")
    try:
        return _renumber_preorder(Tree(children, label, root))
    except TanglegramError as exc:
        raise ParseError(str(exc), line, text) from None


def _renumber_preorder(tree: Tree) -> Tree:
    """Reassign ids in preorder so that the root is 0."""
    order: list[int] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        ch = tree.children[v]
        if ch is not None:
            stack.append(ch[1])
            stack.append(ch[0])
    new_id = {old: k for k, old in enumerate(order)}
    children = [
        None if tree.children[old] is None else (new_id[tree.children[old][0]], new_id[tree.children[old][1]])
        for old in order
    ]
    return Tree(children, [tree.label[old] for old in order], 0)


class Tanglegram:
    """Two rooted binary trees and a bijection phi from T labels to S labels."""

    __slots__ = ("t", "s", "phi", "phi_inv")

    def __init__(self, t: Tree, s: Tree, phi: Mapping[int, int]):
        self.t = t
        self.s = s
        self.phi = dict(phi)
        if t.n_leaves != s.n_leaves:
            raise TanglegramError("trees have different leaf counts")
        if set(self.phi) != set(t.labels) or set(self.phi.values()) != set(s.labels):
            raise TanglegramError("phi is not a bijection between the leaf label sets")
        self.phi_inv = {b: a for a, b in self.phi.items()}

    @property
    def n(self) -> int:
        return self.t.n_leaves

    @property
    def labels(self) -> tuple[int, ...]:
        return self.t.labels

    def transpose(self) -> "Tanglegram":
        """Swap the roles of T and S (phi becomes its inverse)."""
        return Tanglegram(self.s, self.t, self.phi_inv)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Tanglegram)
            and self.t == other.t
            and self.s == other.s
            and self.phi == other.phi
        )

    def __hash__(self) -> int:
        return hash((self.t, self.s, tuple(sorted(self.phi.items()))))

    def __repr__(self) -> str:
        phi = " ".join(str(self.phi[k]) for k in self.labels)
        return f"Tanglegram(T={self.t}, S={self.s}, phi={phi})"

    @classmethod
    def from_strings(cls, t: str, s: str, phi: Sequence[int] | str) -> "Tanglegram":
        tt = parse_tree(t)
        if isinstance(phi, str):
            phi = [int(x) for x in phi.split()]
        return cls(tt, parse_tree(s), dict(zip(tt.labels, phi)))


def parse_tgl(text: str) -> Tanglegram:
    """Parse the ``.tgl`` format: ``T = ...``, ``S = ...``, ``phi = ...``."""
    fields: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError("expected 'key = value'", lineno, body.split()[0])
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in ("T", "S", "phi"):
            raise ParseError("unknown key", lineno, key)
        if key in fields:
            raise ParseError("duplicate key", lineno, key)
        fields[key] = (lineno, value)
    for key in ("T", "S", "phi"):
        if key not in fields:
            raise ParseError(f"missing '{key} =' line", 0, key)
    t = parse_tree(fields["T"][1], fields["T"][0])
    s = parse_tree(fields["S"][1], fields["S"][0])
    phi_line, phi_text = fields["phi"]
    values = []
    for tok in phi_text.split():
        if not tok.isdigit():
            raise ParseError("phi entries must be positive integers", phi_line, tok)
        values.append(int(tok))
    if len(values) != t.n_leaves:
        raise ParseError(f"phi needs {t.n_leaves} entries", phi_line, phi_text)
    try:
        return Tanglegram(t, s, dict(zip(t.labels, values)))
    except TanglegramError as exc:
        raise ParseError(str(exc), phi_line, phi_text) from None


def format_tgl(tg: Tanglegram) -> str:
    phi = " ".join(str(tg.phi[k]) for k in tg.labels)
    return f"T = {tg.t}\nS = {tg.s}\nphi = {phi}\n"


def induced_subtree_map(tree: Tree, labels: Iterable[int]) -> tuple[Tree, list[int]]:
    """Induced subtree plus the map from its vertex ids to ids of ``tree``."""
    keep = set(labels)
    if not keep:
        raise TanglegramError("cannot induce on an empty label set")
    unknown = keep.difference(tree.labels)
    if unknown:
        raise TanglegramError(f"labels not in tree: {sorted(unknown)}")
    count = [0] * len(tree)
    for v in tree.postorder():
        ch = tree.children[v]
        count[v] = (tree.label[v] in keep) if ch is None else count[ch[0]] + count[ch[1]]

    def descend(v: int) -> int:
        # skip suppressed vertices with a single surviving child
        while tree.children[v] is not None:
            a, b = tree.children[v]
            if count[a] and count[b]:
                break
            v = a if count[a] else b
        return v

    old_ids: list[int] = []
    children: list[tuple[int, int] | None] = []
    label: list[int | None] = []
    # preorder rebuild; child slots patched after both children exist
    stack: list[tuple[int, int, int]] = [(descend(tree.root), -1, 0)]
    while stack:
        v, par, slot = stack.pop()
        nid = len(old_ids)
        old_ids.append(v)
        children.append(None)
        label.append(tree.label[v])
        if par >= 0:
            pair = children[par]
            assert pair is not None
            children[par] = (nid, pair[1]) if slot == 0 else (pair[0], nid)
        ch = tree.children[v]
        if ch is not None:
            children[nid] = (-1, -1)
            stack.append((descend(ch[1]), nid, 1))
            stack.append((descend(ch[0]), nid, 0))
    return Tree(children, label, 0), old_ids


def induced_subtree(tree: Tree, labels: Iterable[int]) -> Tree:
    return induced_subtree_map(tree, labels)[0]


def induced_subtanglegram(tg: Tanglegram, labels: Iterable[int]) -> Tanglegram:
    keep = sorted(set(labels))
    t = induced_subtree(tg.t, keep)
    s = induced_subtree(tg.s, [tg.phi[i] for i in keep])
    return Tanglegram(t, s, {i: tg.phi[i] for i in keep})


# canonical forms


def _shapes(tree: Tree) -> list[str]:
    shape = [""] * len(tree)
    for v in tree.postorder():
        ch = tree.children[v]
        if ch is None:
            shape[v] = "x"
        else:
            a, b = sorted((shape[ch[0]], shape[ch[1]]))
            shape[v] = f"({a},{b})"
    return shape


def _canonical_orders(tree: Tree) -> tuple[str, list[tuple[int, ...]]]:
    """Shape string and the leaf orders of all canonical embeddings.

    A canonical embedding puts the child with the smaller shape string first.
    Toggling vertices whose children have equal shapes enumerates the
    automorphism group of the shape.
    """
    shape = _shapes(tree)
    first: dict[int, tuple[int, int]] = {}
    symmetric: list[int] = []
    for v in tree.internal_vertices():
        a, b = tree.children[v]
        if shape[a] > shape[b]:
            a, b = b, a
        first[v] = (a, b)
        if shape[a] == shape[b]:
            symmetric.append(v)
    orders = []
    for bits in product((False, True), repeat=len(symmetric)):
        toggled = {v for v, bit in zip(symmetric, bits) if bit}
        seq: list[int] = []
        stack = [tree.root]
        while stack:
            v = stack.pop()
            if v not in first:
                seq.append(tree.label[v])
                continue
            a, b = first[v]
            if v in toggled:
                a, b = b, a
            stack.append(b)
            stack.append(a)
        orders.append(tuple(seq))
    return shape[tree.root], orders


def canonical_key(tg: Tanglegram) -> bytes:
    """Isomorphism-invariant key: shapes plus the minimal position permutation."""
    shape_t, x_orders = _canonical_orders(tg.t)
    shape_s, y_orders = _canonical_orders(tg.s)
    best: tuple[int, ...] | None = None
    for y in y_orders:
        pos_y = {lab: k for k, lab in enumerate(y)}
        for x in x_orders:
            perm = tuple(pos_y[tg.phi[lab]] for lab in x)
            if best is None or perm < best:
                best = perm
    assert best is not None
    return f"{shape_t}|{shape_s}|{','.join(map(str, best))}".encode()


_SHAPE_CACHE: dict[int, list[str]] = {1: ["x"]}


def tree_shapes(n: int) -> list[str]:
    """All rooted binary tree shapes with n leaves as canonical strings."""
    if n < 1:
        raise TanglegramError("shape size must be positive")
    if n not in _SHAPE_CACHE:
        out = set()
        for a in range(1, n // 2 + 1):
            for sa in tree_shapes(a):
                for sb in tree_shapes(n - a):
                    lo, hi = sorted((sa, sb))
                    out.add(f"({lo},{hi})")
        _SHAPE_CACHE[n] = sorted(out)
    return list(_SHAPE_CACHE[n])


def tree_from_shape(shape: str) -> Tree:
    """Tree of a canonical shape string, leaves labelled 1..n top to bottom."""
    counter = iter(range(1, shape.count("x") + 1))
    return parse_tree(re.sub("x", lambda _m: str(next(counter)), shape))


def random_tree(n: int, rng: random.Random, labels: Sequence[int] | None = None) -> Tree:
    """Random tree built by joining two random subtrees until one remains."""
    if n < 1:
        raise TanglegramError("tree size must be positive")
    parts = [str(lab) for lab in (labels if labels is not None else range(1, n + 1))]
    while len(parts) > 1:
        a, b = sorted(rng.sample(range(len(parts)), 2))
        joined = f"({parts[a]},{parts[b]})"
        parts[a] = joined
        parts[b] = parts[-1]
        parts.pop()
    return parse_tree(parts[0])


def random_tanglegram(n: int, rng: random.Random) -> Tanglegram:
    t = random_tree(n, rng)
    s = random_tree(n, rng)
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Tanglegram(t, s, dict(zip(t.labels, images)))


def caterpillar_string(order: Sequence[int]) -> str:
    """Caterpillar whose leaves read ``order`` top to bottom."""
    text = str(order[0])
    for lab in order[1:]:
        text = f"({text},{lab})"
    return text


def caterpillar_insertion_instance(n: int) -> Tanglegram:
    """Two caterpillars, planar without edge n.

    t_n hangs off the root of T while s_n sits in the deepest cherry of S.
    """
    if n < 3:
        raise TanglegramError("caterpillar instance needs n >= 3")
    t = caterpillar_string(list(range(1, n + 1)))
    s = caterpillar_string([1, n] + list(range(2, n)))
    return Tanglegram.from_strings(t, s, list(range(1, n + 1)))
