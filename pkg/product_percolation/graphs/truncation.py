"""Finite windows cut from the infinite graphs by breadth-first exploration."""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from product_percolation.errors import ConfigError, TruncationTooLargeError, WindowError
from product_percolation.graphs.base import Plain, ProductVertex, VertexId
from product_percolation.graphs.encoding import encode_vertex, vertex_sort_key
from product_percolation.graphs.families import family_for
from product_percolation.graphs.spec import GraphSpec

logger = logging.getLogger(__name__)

DEFAULT_VERTEX_CAP = 2_000_000

NeighborFunc = Callable[[VertexId], list[VertexId]]
Centers = Union[VertexId, Sequence[VertexId]]


def explore(
    starts: Iterable[VertexId],
    neighbor_func: NeighborFunc,
    radius: Optional[int] = None,
    cap: int = DEFAULT_VERTEX_CAP,
    predicate: Optional[Callable[[VertexId], bool]] = None,
) -> tuple[dict[VertexId, int], dict[VertexId, list[VertexId]]]:
    """Breadth-first search from `starts` following `neighbor_func(node)`.

    Returns the distance map and the adjacency lists computed on the way.
    Vertices failing `predicate` are never entered.
    """
    distances: dict[VertexId, int] = {}
    adjacency: dict[VertexId, list[VertexId]] = {}
    queue: deque[VertexId] = deque()
    for s in starts:
        if s not in distances:
            distances[s] = 0
            queue.append(s)

    while queue:
        node = queue.popleft()
        dist = distances[node]
        if radius is not None and dist >= radius:
            continue
        adjacent = neighbor_func(node)
        adjacency[node] = adjacent
        for neighbor in adjacent:
            if neighbor in distances:
                continue
            if predicate is not None and not predicate(neighbor):
                continue
            distances[neighbor] = dist + 1
            if len(distances) > cap:
                raise TruncationTooLargeError(
                    f"Exploration exceeded the vertex cap of {cap} at distance {dist + 1}", cap
                )
            queue.append(neighbor)
    return distances, adjacency


@dataclass(frozen=True, eq=False)
class FiniteTruncation:
    """Finite induced subgraph of an infinite graph.

    Vertices are sorted by canonical encoding; `edges[i] = (a, b)` with a < b,
    sorted lexicographically. `distances[i]` is the exploration distance of
    vertex i from the centres (for cylinders: the base distance).
    """

    spec: GraphSpec
    vertices: tuple[VertexId, ...]
    edges: np.ndarray
    boundary: frozenset
    radius: Optional[int]
    centers: tuple[VertexId, ...]
    distances: np.ndarray

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def index(self) -> dict[VertexId, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_vertices, dtype=bool)
        for v in self.boundary:
            mask[self.index[v]] = True
        return mask

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(int(a), int(b)): k for k, (a, b) in enumerate(self.edges)}

    @cached_property
    def incidence(self) -> list[list[tuple[int, int]]]:
        """Per vertex, the list of (neighbour index, edge index) pairs."""
        result: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for k, (a, b) in enumerate(self.edges.tolist()):
            result[a].append((b, k))
            result[b].append((a, k))
        return result

    def __contains__(self, v: object) -> bool:
        return v in self.index

    def index_of(self, v: VertexId) -> int:
        try:
            return self.index[v]
        except (KeyError, TypeError):
            raise WindowError(f"{v!r} is not in the truncation of radius {self.radius}") from None

    def find_edge(self, u: VertexId, v: VertexId) -> Optional[int]:
        """Edge index joining u and v, or None if they are not adjacent in the window."""
        if u not in self.index or v not in self.index:
            return None
        a, b = sorted((self.index[u], self.index[v]))
        return self.edge_index.get((a, b))

    def sphere_mask(self, j: int) -> np.ndarray:
        return self.distances == j

    def edge_boundary_size(self) -> int:
        """Number of infinite-graph edges with exactly one endpoint in the window."""
        family = family_for(self.spec)
        total = 0
        for v in self.boundary:
            total += sum(1 for u in family.adjacent(v) if u not in self.index)
        return total

    def induced_edges(self, vertex_mask: np.ndarray) -> np.ndarray:
        """Boolean edge mask selecting edges with both endpoints in `vertex_mask`."""
        if self.num_edges == 0:
            return np.zeros(0, dtype=bool)
        return vertex_mask[self.edges[:, 0]] & vertex_mask[self.edges[:, 1]]

    def to_edge_list_text(self) -> str:
        lines = [f"# spec={self.spec.to_line()} radius={self.radius}"]
        hexes = [encode_vertex(v).hex() for v in self.vertices]
        for a, b in self.edges.tolist():
            lines.append(f"{hexes[a]} {hexes[b]}")
        return "\n".join(lines) + "\n"

    def write_edge_list(self, path: str) -> str:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.to_edge_list_text(), encoding="utf-8")
        logger.info("Wrote %d edges to %s", self.num_edges, path)
        return str(target)


def _as_centers(center: Centers) -> tuple[VertexId, ...]:
    if isinstance(center, (set, frozenset)):
        return tuple(sorted(center, key=vertex_sort_key))
    if isinstance(center, (list, tuple)):
        return tuple(center)
    return (center,)


def assemble(
    spec: GraphSpec,
    distances: dict[VertexId, int],
    radius: Optional[int],
    centers: tuple[VertexId, ...],
    adjacency: Optional[dict[VertexId, list[VertexId]]] = None,
) -> FiniteTruncation:
    """Build the induced truncation on the vertex set `distances.keys()`."""
    family = family_for(spec)
    adjacency = adjacency or {}
    ordered = sorted(distances, key=vertex_sort_key)
    index = {v: i for i, v in enumerate(ordered)}

    edge_pairs: list[tuple[int, int]] = []
    boundary = set()
    for i, v in enumerate(ordered):
        adjacent = adjacency.get(v)
        if adjacent is None:
            adjacent = family.adjacent(v)
        higher = []
        for u in adjacent:
            j = index.get(u)
            if j is None:
                boundary.add(v)
            elif j > i:
                higher.append(j)
        edge_pairs.extend((i, j) for j in sorted(higher))

    if radius is not None:
        boundary.update(v for v, dist in distances.items() if dist == radius)

    edges = np.array(edge_pairs, dtype=np.int64).reshape(-1, 2)
    dist_array = np.array([distances[v] for v in ordered], dtype=np.int64)
    logger.debug(
        "Assembled truncation of %s: %d vertices, %d edges, %d boundary",
        spec.describe(), len(ordered), len(edge_pairs), len(boundary),
    )
    return FiniteTruncation(
        spec=spec,
        vertices=tuple(ordered),
        edges=edges,
        boundary=frozenset(boundary),
        radius=radius,
        centers=centers,
        distances=dist_array,
    )


def ball(spec: GraphSpec, center: Centers, r: int, cap: int = DEFAULT_VERTEX_CAP) -> FiniteTruncation:
    """All vertices within graph distance r of the centre (or centre set)."""
    if r < 0:
        raise ConfigError(f"Ball radius must be non-negative, got {r}")
    family = family_for(spec)
    centers = _as_centers(center)
    for c in centers:
        family.validate(c)
    distances, adjacency = explore(centers, family.adjacent, radius=r, cap=cap)
    return assemble(spec, distances, r, centers, adjacency)


def lattice_box(d: int, lengths: Sequence[int]) -> FiniteTruncation:
    """Axis-aligned box of ℤᵈ with coordinates 0 <= x_i < lengths[i]."""
    if len(lengths) != d or any(n < 1 for n in lengths):
        raise ConfigError(f"lattice_box needs {d} positive side lengths, got {list(lengths)}")
    spec = GraphSpec.lattice(d)
    distances = {Plain(c): sum(c) for c in itertools.product(*(range(n) for n in lengths))}
    return assemble(spec, distances, None, (Plain((0,) * d),))


def cylinder(
    spec: GraphSpec, center: VertexId, radius: int, height: int, cap: int = DEFAULT_VERTEX_CAP
) -> FiniteTruncation:
    """Window B(center, radius) × [-height, height] of the product of `spec` with ℤ.

    `distances` holds the base-graph distance, so shells are read off directly.
    """
    if spec.product:
        raise ConfigError("cylinder expects the base spec; the line factor is added here")
    if radius < 0 or height < 0:
        raise ConfigError(f"cylinder needs radius, height >= 0, got {radius}, {height}")
    family = family_for(spec)
    family.validate(center)
    base_distances, _ = explore([center], family.adjacent, radius=radius, cap=cap)
    if len(base_distances) * (2 * height + 1) > cap:
        raise TruncationTooLargeError(
            f"Cylinder of {len(base_distances)} x {2 * height + 1} vertices exceeds the cap of {cap}", cap
        )
    distances = {
        ProductVertex(v, z): dist  # type: ignore[arg-type]
        for v, dist in base_distances.items()
        for z in range(-height, height + 1)
    }
    return assemble(spec.with_line(), distances, None, (ProductVertex(center, 0),))  # type: ignore[arg-type]


def restricted_truncation(
    spec: GraphSpec,
    starts: Centers,
    predicate: Callable[[VertexId], bool],
    cap: int = DEFAULT_VERTEX_CAP,
) -> FiniteTruncation:
    """Component of the starts inside the region where `predicate` holds."""
    family = family_for(spec)
    centers = _as_centers(starts)
    for c in centers:
        family.validate(c)
    distances, adjacency = explore(centers, family.adjacent, cap=cap, predicate=predicate)
    return assemble(spec, distances, None, centers, adjacency)
