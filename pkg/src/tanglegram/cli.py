"""Command-line interface: ``tanglegram <subcommand> ...``.

Exit codes: 0 success, 2 malformed input, 3 precondition violation.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .core import (
    ParseError,
    PreconditionError,
    Tanglegram,
    TanglegramError,
    Tree,
    format_tgl,
    parse_tgl,
    random_tanglegram,
)
from .enumeration import census, format_csv, irreducible_series, load_h_file, series_rows, solve_F
from .insertion import insert_edge
from .layout import Layout, count_crossings, format_layout, identity_layout, parse_layout, validate_layout
from .multi import iterated_insertion, multi_insertion
from .oracle import DEFAULT_MAX_SIZE, brute_crossing_number
from .planarset import all_planar_layouts, flip_graph, format_flip_graph
from .untangle import is_planar, modified_untangle

__all__ = ["RenderSpec", "render_svg", "main", "build_parser"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3


@dataclass(frozen=True)
class RenderSpec:
    unit: float = 24.0
    tree_depth_px: float = 18.0
    gap_px: float = 120.0
    margin_px: float = 20.0

    def __post_init__(self):
        if min(self.unit, self.tree_depth_px, self.gap_px) <= 0 or self.margin_px < 0:
            raise TanglegramError("render dimensions must be positive")


def _tree_coords(tree: Tree, order: Sequence[int], spec: RenderSpec) -> dict[int, tuple[float, float]]:
    """(depth offset, y) per vertex; leaves at offset 0, parents further out."""
    rank = {lab: k for k, lab in enumerate(order)}
    ys: dict[int, float] = {}
    height: dict[int, int] = {}
    for v in tree.postorder():
        ch = tree.children[v]
        if ch is None:
            ys[v] = spec.margin_px + rank[tree.label[v]] * spec.unit
            height[v] = 0
        else:
            ys[v] = (ys[ch[0]] + ys[ch[1]]) / 2
            height[v] = 1 + max(height[ch[0]], height[ch[1]])
    return {v: (height[v] * spec.tree_depth_px, ys[v]) for v in ys}


def render_svg(tg: Tanglegram, ly: Layout, spec: RenderSpec | None = None) -> str:
    """SVG 1.1 drawing: T on the left, S mirrored on the right, dashed matching."""
    spec = spec or RenderSpec()
    validate_layout(tg, ly)
    ct = _tree_coords(tg.t, ly.x, spec)
    cs = _tree_coords(tg.s, ly.y, spec)
    depth_t = max(d for d, _ in ct.values())
    depth_s = max(d for d, _ in cs.values())
    left = spec.margin_px + depth_t
    right = left + spec.gap_px
    width = right + depth_s + spec.margin_px + 16
    height = 2 * spec.margin_px + max(tg.n - 1, 0) * spec.unit

    def tx(v):
        return left - ct[v][0], ct[v][1]

    def sx(v):
        return right + cs[v][0], cs[v][1]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:g}" height="{height:g}">',
        '<g stroke="black" fill="none" stroke-width="1.5">',
    ]
    for tree, pos in ((tg.t, tx), (tg.s, sx)):
        for v in tree.internal_vertices():
            x0, y0 = pos(v)
            for c in tree.children[v]:
                x1, y1 = pos(c)
                out.append(f'<path d="M {x0:g} {y0:g} V {y1:g} H {x1:g}"/>')
    out.append("</g>")
    out.append('<g stroke="gray" stroke-dasharray="4 3" stroke-width="1">')
    for lab in tg.labels:
        x0, y0 = tx(tg.t.leaf(lab))
        x1, y1 = sx(tg.s.leaf(tg.phi[lab]))
        out.append(f'<line x1="{x0:g}" y1="{y0:g}" x2="{x1:g}" y2="{y1:g}"/>')
    out.append("</g>")
    out.append('<g font-family="sans-serif" font-size="10">')
    for lab in tg.labels:
        x0, y0 = tx(tg.t.leaf(lab))
        out.append(f'<circle cx="{x0:g}" cy="{y0:g}" r="2" fill="black"/>')
        out.append(f'<text x="{x0 + 4:g}" y="{y0 - 3:g}">{escape(str(lab))}</text>')
        x1, y1 = sx(tg.s.leaf(tg.phi[lab]))
        out.append(f'<circle cx="{x1:g}" cy="{y1:g}" r="2" fill="black"/>')
        out.append(f'<text x="{x1 - 4:g}" y="{y1 - 3:g}" text-anchor="end">{escape(str(tg.phi[lab]))}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", 0, path) from None


def _load(path: str) -> Tanglegram:
    return parse_tgl(_read(path))


def _labels(text: str) -> list[int]:
    out = []
    for tok in text.replace(",", " ").split():
        if not tok.isdigit():
            raise ParseError("labels must be positive integers", 1, tok)
        out.append(int(tok))
    if not out:
        raise ParseError("empty label list", 1, text)
    return out


def _emit_layout(tg: Tanglegram, ly: Layout) -> None:
    sys.stdout.write(format_layout(ly))
    print(f"crossings: {count_crossings(tg, ly)}")


def _cmd_check_planar(args) -> int:
    print("planar" if is_planar(_load(args.file)) else "not planar")
    return EXIT_OK


def _cmd_untangle(args) -> int:
    tg = _load(args.file)
    ly, pairs = modified_untangle(tg)
    _emit_layout(tg, ly)
    print("pairs: " + " ".join(f"({u},{v})" for u, v in pairs))
    return EXIT_OK


def _require_planar(tg: Tanglegram) -> None:
    if not is_planar(tg):
        raise PreconditionError("tanglegram is not planar")


def _cmd_layouts(args) -> int:
    tg = _load(args.file)
    _require_planar(tg)
    layouts = sorted(all_planar_layouts(tg), key=lambda ly: (ly.x, ly.y))
    for k, ly in enumerate(layouts):
        if k:
            print()
        _emit_layout(tg, ly)
    return EXIT_OK


def _cmd_flip_graph(args) -> int:
    tg = _load(args.file)
    _require_planar(tg)
    sys.stdout.write(format_flip_graph(flip_graph(tg)))
    return EXIT_OK


def _cmd_insert(args) -> int:
    tg = _load(args.file)
    if args.remove not in tg.phi:
        raise ParseError("unknown label", 1, str(args.remove))
    _emit_layout(tg, insert_edge(tg, args.remove))
    return EXIT_OK


def _keep(tg: Tanglegram, text: str) -> list[int]:
    keep = _labels(text)
    unknown = [lab for lab in keep if lab not in tg.phi]
    if unknown:
        raise ParseError("unknown label", 1, str(unknown[0]))
    return keep


def _cmd_iterated(args) -> int:
    tg = _load(args.file)
    _emit_layout(tg, iterated_insertion(tg, _keep(tg, args.keep)))
    return EXIT_OK


def _cmd_multi(args) -> int:
    tg = _load(args.file)
    _emit_layout(tg, multi_insertion(tg, _keep(tg, args.keep)))
    return EXIT_OK


def _cmd_crossing_number(args) -> int:
    tg = _load(args.file)
    if args.exact:
        rep = brute_crossing_number(tg, args.max_size)
        _emit_layout(tg, rep.witness)
        print(f"examined: {rep.examined}")
    else:
        ly, _ = modified_untangle(tg)
        _emit_layout(tg, ly)
    return EXIT_OK


def _cmd_census(args) -> int:
    sys.stdout.write(format_csv([census(args.size, args.threads)]))
    return EXIT_OK


def _cmd_series(args) -> int:
    override = load_h_file(args.h_file) if args.h_file else None
    h = irreducible_series(args.max_degree, override, args.threads)
    sys.stdout.write(format_csv(series_rows(solve_F(args.max_degree, h))))
    return EXIT_OK


def _cmd_render(args) -> int:
    tg = _load(args.file)
    ly = parse_layout(_read(args.layout)) if args.layout else identity_layout(tg)
    svg = render_svg(tg, ly)
    if args.output:
        Path(args.output).write_text(svg)
        print(f"crossings: {count_crossings(tg, ly)}")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def _cmd_random(args) -> int:
    sys.stdout.write(format_tgl(random_tanglegram(args.size, random.Random(args.seed))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tanglegram", description="Tanglegram layouts, insertion and counting.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, fn, help_text):
        q = sub.add_parser(name, help=help_text)
        q.add_argument("file", help=".tgl input")
        q.set_defaults(fn=fn)
        return q

    with_file("check-planar", _cmd_check_planar, "report whether a planar layout exists")
    with_file("untangle", _cmd_untangle, "layout and leaf-matched pairs from the untangling pass")
    with_file("layouts", _cmd_layouts, "all planar layouts")
    with_file("flip-graph", _cmd_flip_graph, "planar layouts joined by single paired flips")
    q = with_file("insert", _cmd_insert, "optimal insertion of one edge")
    q.add_argument("--remove", type=int, required=True, metavar="I")
    q = with_file("iterated-insert", _cmd_iterated, "insert missing edges one at a time")
    q.add_argument("--keep", required=True, help="labels of the planar part, e.g. 1,2,4")
    q = with_file("multi-insert", _cmd_multi, "optimal insertion of several edges")
    q.add_argument("--keep", required=True, help="labels of the planar part, e.g. 1,2,4")
    q = with_file("crossing-number", _cmd_crossing_number, "crossings of the untangle layout, or the exact minimum")
    q.add_argument("--exact", action="store_true")
    q.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE)
    q = with_file("render", _cmd_render, "SVG drawing of a layout")
    q.add_argument("--layout", help="layout file; default is the stored child order")
    q.add_argument("-o", "--output")

    q = sub.add_parser("census", help="planar classes of one size by leaf-matched pairs (CSV)")
    q.add_argument("--size", type=int, required=True)
    q.add_argument("--threads", type=int, default=1)
    q.set_defaults(fn=_cmd_census)
    q = sub.add_parser("series", help="coefficients of the generating function (CSV)")
    q.add_argument("--max-degree", type=int, required=True)
    q.add_argument("--h-file")
    q.add_argument("--threads", type=int, default=1)
    q.set_defaults(fn=_cmd_series)
    q = sub.add_parser("random", help="random tanglegram in .tgl format")
    q.add_argument("--size", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.set_defaults(fn=_cmd_random)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except TanglegramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
