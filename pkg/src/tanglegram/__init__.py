"""Tanglegram layouts: planarity, edge insertion, enumeration and oracles."""

from .core import (
    ParseError,
    PreconditionError,
    Tanglegram,
    TanglegramError,
    Tree,
    canonical_key,
    format_tgl,
    induced_subtanglegram,
    parse_tgl,
    parse_tree,
)
from .enumeration import census, enumerate_planar, irreducible_series, solve_F
from .insertion import crtei, insert_edge
from .layout import Layout, count_crossings, format_layout, parse_layout
from .multi import iterated_insertion, multi_insertion
from .planarset import all_planar_layouts, flip_graph, is_irreducible
from .untangle import is_planar, modified_untangle

__version__ = "0.1.0"

__all__ = [
    "ParseError",
    "PreconditionError",
    "Tanglegram",
    "TanglegramError",
    "Tree",
    "Layout",
    "canonical_key",
    "format_tgl",
    "parse_tgl",
    "parse_tree",
    "induced_subtanglegram",
    "format_layout",
    "parse_layout",
    "count_crossings",
    "modified_untangle",
    "is_planar",
    "all_planar_layouts",
    "flip_graph",
    "is_irreducible",
    "insert_edge",
    "crtei",
    "iterated_insertion",
    "multi_insertion",
    "enumerate_planar",
    "census",
    "irreducible_series",
    "solve_F",
]
