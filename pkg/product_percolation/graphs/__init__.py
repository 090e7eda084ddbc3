"""Infinite graph constructions, vertex encodings and finite truncations."""

from product_percolation.graphs.base import (
    GraphFamily,
    LatticePoint,
    Plain,
    ProductVertex,
    StretchNode,
    TreeNode,
    VertexId,
)
from product_percolation.graphs.encoding import (
    decode_vertex,
    encode_vertex,
    format_vertex,
    parse_vertex,
)
from product_percolation.graphs.families import (
    family_for,
    neighbors,
    origin,
    sphere_sizes,
    validate_vertex,
)
from product_percolation.graphs.spec import GraphKind, GraphSpec, level_sequence
from product_percolation.graphs.truncation import (
    DEFAULT_VERTEX_CAP,
    FiniteTruncation,
    ball,
    cylinder,
    explore,
    lattice_box,
    restricted_truncation,
)

__all__ = [
    "DEFAULT_VERTEX_CAP",
    "FiniteTruncation",
    "GraphFamily",
    "GraphKind",
    "GraphSpec",
    "LatticePoint",
    "Plain",
    "ProductVertex",
    "StretchNode",
    "TreeNode",
    "VertexId",
    "ball",
    "cylinder",
    "decode_vertex",
    "encode_vertex",
    "explore",
    "family_for",
    "format_vertex",
    "level_sequence",
    "lattice_box",
    "neighbors",
    "origin",
    "parse_vertex",
    "restricted_truncation",
    "sphere_sizes",
    "validate_vertex",
]
