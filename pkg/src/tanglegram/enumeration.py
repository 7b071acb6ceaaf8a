"""Planar tanglegram counts by size and number of leaf-matched pairs.

Two independent routes: an exhaustive sweep over isomorphism classes, and
the functional equation F = x + q H(F) + q F(x^2, q^2) / 2 solved with
exact rationals.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Iterator, Mapping

from .core import (
    Tanglegram,
    TanglegramError,
    _canonical_orders,
    tree_from_shape,
    tree_shapes,
)
from .layout import count_crossings
from .untangle import modified_untangle

__all__ = [
    "ConsistencyError",
    "SeriesTable",
    "CensusRow",
    "iter_classes",
    "enumerate_classes",
    "enumerate_planar",
    "census",
    "irreducible_series",
    "solve_F",
    "solve_F_rearranged",
    "series_rows",
    "load_h_file",
    "format_csv",
]


class ConsistencyError(TanglegramError):
    """A series coefficient that must count objects is not an integer."""


@dataclass
class SeriesTable:
    max_degree: int
    coeff: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def get(self, n: int, k: int = 0) -> Fraction:
        return self.coeff.get((n, k), Fraction(0))

    def row(self, n: int) -> dict[int, Fraction]:
        return {k: c for (m, k), c in sorted(self.coeff.items()) if m == n and c}


@dataclass
class CensusRow:
    n: int
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


# exhaustive path


def _shape_pair_classes(args: tuple[str, str]) -> list[tuple[bytes, Tanglegram]]:
    """Orbit representatives for one (T shape, S shape) pair.

    Permutations are visited in lexicographic order and each new one is the
    minimum of its orbit, which is exactly what canonical_key encodes.
    """
    shape_t, shape_s = args
    t, s = tree_from_shape(shape_t), tree_from_shape(shape_s)
    n = t.n_leaves
    _, x_orders = _canonical_orders(t)
    _, y_orders = _canonical_orders(s)
    y_pos = [{lab: k for k, lab in enumerate(y)} for y in y_orders]
    x_idx = [[lab - 1 for lab in x] for x in x_orders]
    seen: set[tuple[int, ...]] = set()
    out = []
    for perm in permutations(range(n)):
        if perm in seen:
            continue
        for pos in y_pos:
            for xi in x_idx:
                seen.add(tuple(pos[perm[a] + 1] for a in xi))
        key = f"{shape_t}|{shape_s}|{','.join(map(str, perm))}".encode()
        phi = {a + 1: perm[a] + 1 for a in range(n)}
        out.append((key, Tanglegram(t, s, phi)))
    return out


def _shape_pairs(n: int) -> list[tuple[str, str]]:
    shapes = tree_shapes(n)
    return [(a, b) for a in shapes for b in shapes]


def iter_classes(n: int, threads: int = 1) -> Iterator[tuple[bytes, Tanglegram]]:
    """One representative per isomorphism class of size-n tanglegrams."""
    pairs = _shape_pairs(n)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(_shape_pair_classes, pairs):
                yield from chunk
    else:
        for pair in pairs:
            yield from _shape_pair_classes(pair)


def enumerate_classes(n: int, threads: int = 1) -> list[tuple[bytes, Tanglegram]]:
    return list(iter_classes(n, threads))


def _planar_with_pairs(tg: Tanglegram) -> int | None:
    """Leaf-matched pair count for a planar tanglegram, None otherwise."""
    ly, pairs = modified_untangle(tg)
    return len(pairs) if count_crossings(tg, ly) == 0 else None


def _planar_chunk(args: tuple[str, str]) -> list[tuple[bytes, Tanglegram, int]]:
    out = []
    for key, tg in _shape_pair_classes(args):
        k = _planar_with_pairs(tg)
        if k is not None:
            out.append((key, tg, k))
    return out


def _planar_sweep(n: int, threads: int) -> list[tuple[bytes, Tanglegram, int]]:
    pairs = _shape_pairs(n)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_planar_chunk, pairs))
    else:
        chunks = [_planar_chunk(p) for p in pairs]
    return [item for chunk in chunks for item in chunk]


def enumerate_planar(n: int, threads: int = 1) -> list[tuple[bytes, Tanglegram]]:
    if n < 1:
        raise TanglegramError("size must be positive")
    return [(key, tg) for key, tg, _ in _planar_sweep(n, threads)]


def census(n: int, threads: int = 1) -> CensusRow:
    """Planar classes of size n counted by number of leaf-matched pairs."""
    if n < 1:
        raise TanglegramError("size must be positive")
    counts = Counter(k for _, _, k in _planar_sweep(n, threads))
    return CensusRow(n, dict(sorted(counts.items())))


# series path

Poly = dict[tuple[int, int], Fraction]


def _mul(a: Poly, b: Poly, n_max: int) -> Poly:
    out: Poly = {}
    for (n1, k1), c1 in a.items():
        for (n2, k2), c2 in b.items():
            if n1 + n2 <= n_max:
                key = (n1 + n2, k1 + k2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
    return out


def _add(*polys: Poly, scale: Fraction | int = 1) -> Poly:
    out: Poly = {}
    for p in polys:
        for key, c in p.items():
            out[key] = out.get(key, Fraction(0)) + c
    return {key: c * scale for key, c in out.items() if c}


def _times_q(p: Poly) -> Poly:
    return {(n, k + 1): c for (n, k), c in p.items()}


def _square_args(p: Poly, n_max: int) -> Poly:
    """p(x^2, q^2)."""
    return {(2 * n, 2 * k): c for (n, k), c in p.items() if 2 * n <= n_max}


def _compose_h(h: Mapping[int, Fraction], f: Poly, n_max: int) -> Poly:
    """H(F) = sum_m h_m F^m; F has no constant term so m <= n_max suffices."""
    out: Poly = {}
    power: Poly = dict(f)
    for m in range(1, n_max + 1):
        if m > 1:
            power = _mul(power, f, n_max)
        c = Fraction(h.get(m, 0))
        if c:
            out = _add(out, {key: c * v for key, v in power.items()})
    return out


def _h_map(h: SeriesTable | Mapping[int, Fraction]) -> dict[int, Fraction]:
    if isinstance(h, SeriesTable):
        return {n: c for (n, k), c in h.coeff.items() if k == 0}
    return {n: Fraction(c) for n, c in h.items()}


def _finish(f: Poly, n_max: int) -> SeriesTable:
    for (n, k), c in f.items():
        if c.denominator != 1:
            raise ConsistencyError(f"coefficient of x^{n} q^{k} is {c}, not an integer")
    return SeriesTable(n_max, dict(sorted(f.items())))


def solve_F(n_max: int, h: SeriesTable | Mapping[int, Fraction]) -> SeriesTable:
    """Fixed-point iteration of F = x + q H(F) + q F(x^2, q^2) / 2."""
    hm = _h_map(h)
    x: Poly = {(1, 0): Fraction(1)}
    f = dict(x)
    for _ in range(n_max):
        f = _add(x, _times_q(_compose_h(hm, f, n_max)), _add(_times_q(_square_args(f, n_max)), scale=Fraction(1, 2)))
    return _finish(f, n_max)


def solve_F_rearranged(n_max: int, h: SeriesTable | Mapping[int, Fraction]) -> SeriesTable:
    """Same series from x + q (H(F) - F^2/2) + q (F^2 + F(x^2, q^2)) / 2."""
    hm = _h_map(h)
    half = Fraction(1, 2)
    x: Poly = {(1, 0): Fraction(1)}
    f = dict(x)
    for _ in range(n_max):
        sq = _mul(f, f, n_max)
        first = _add(_compose_h(hm, f, n_max), _add(sq, scale=-half))
        second = _add(sq, _square_args(f, n_max), scale=half)
        f = _add(x, _times_q(first), _times_q(second))
    return _finish(f, n_max)


def load_h_file(path: str | Path) -> dict[int, Fraction]:
    """Read ``n numerator/denominator`` lines (a bare integer is allowed)."""
    out: dict[int, Fraction] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            from .core import ParseError

            raise ParseError("expected 'n numerator/denominator'", lineno, body)
        try:
            out[int(parts[0])] = Fraction(parts[1])
        except (ValueError, ZeroDivisionError):
            from .core import ParseError

            raise ParseError("bad coefficient", lineno, parts[1]) from None
    return out


def irreducible_series(
    n_max: int, override: Mapping[int, Fraction] | None = None, threads: int = 1
) -> SeriesTable:
    """H(x): h_2 = 1/2 and h_n = irreducible planar classes of size n.

    Coefficients come from the override when given, otherwise from the
    census k = 1 column.
    """
    coeff: dict[tuple[int, int], Fraction] = {}
    for n in range(2, n_max + 1):
        if override is not None and n in override:
            c = Fraction(override[n])
        elif n == 2:
            c = Fraction(1, 2)
        else:
            c = Fraction(census(n, threads).counts.get(1, 0))
        if c:
            coeff[(n, 0)] = c
    return SeriesTable(n_max, coeff)


def series_rows(f: SeriesTable, n_min: int = 1) -> list[CensusRow]:
    rows = []
    for n in range(n_min, f.max_degree + 1):
        rows.append(CensusRow(n, {k: int(c) for k, c in f.row(n).items()}))
    return rows


def format_csv(rows: list[CensusRow]) -> str:
    lines = ["n,k,count"]
    for row in rows:
        for k, c in sorted(row.counts.items()):
            lines.append(f"{row.n},{k},{c}")
    return "\n".join(lines) + "\n"
