"""Bounded edge cutsets: certificates that a finite set sits in finite components."""

import logging
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Iterable, Optional

from product_percolation.errors import ConfigError
from product_percolation.graphs.base import VertexId
from product_percolation.graphs.encoding import format_vertex, vertex_sort_key
from product_percolation.graphs.families import family_for
from product_percolation.graphs.spec import GraphSpec
from product_percolation.graphs.truncation import DEFAULT_VERTEX_CAP, FiniteTruncation, ball

logger = logging.getLogger(__name__)

Edge = tuple[VertexId, VertexId]

_SOURCE = "source"
_SINK = "sink"


class CutsetVerdict(Enum):
    """Outcome of checking a cutset inside a finite ball.

    CONFIRMED: every component of the target is confined strictly inside the
    ball, hence finite. INCONCLUSIVE: some component reaches the ball boundary.
    REJECTED: the certificate itself is malformed.
    """

    CONFIRMED = "confirmed"
    INCONCLUSIVE = "inconclusive"
    REJECTED = "rejected"

    def __bool__(self) -> bool:
        return self is CutsetVerdict.CONFIRMED


def normalize_edge(u: VertexId, v: VertexId) -> Edge:
    return (u, v) if vertex_sort_key(u) <= vertex_sort_key(v) else (v, u)


@dataclass(frozen=True)
class CutsetCertificate:
    target: frozenset
    cut_edges: frozenset
    K: int
    verify_radius: int

    def to_dict(self) -> dict:
        return {
            "target": sorted(format_vertex(v) for v in self.target),
            "cut_edges": sorted([format_vertex(u), format_vertex(v)] for u, v in self.cut_edges),
            "K": self.K,
            "verify_radius": self.verify_radius,
        }


@dataclass(frozen=True)
class CutsetSearch:
    """Result of a min-cut search; `certificate` is None when min_cut > K."""

    min_cut: float
    K: int
    search_radius: int
    certificate: Optional[CutsetCertificate]

    @property
    def found(self) -> bool:
        return self.certificate is not None

    def to_dict(self) -> dict:
        return {
            "min_cut": self.min_cut if math.isfinite(self.min_cut) else None,
            "K": self.K,
            "search_radius": self.search_radius,
            "found": self.found,
            "certificate": self.certificate.to_dict() if self.certificate else None,
        }


class FordFulkerson:
    """Max-flow by breadth-first augmenting paths on a residual dictionary network."""

    def __init__(self, capacity: Iterable[tuple[Hashable, Hashable, float]], source: Hashable, sink: Hashable):
        self._source = source
        self._sink = sink
        self._residual: dict[Hashable, dict[Hashable, float]] = {source: {}, sink: {}}
        for v, w, c in capacity:
            self._residual.setdefault(v, {})
            self._residual.setdefault(w, {})
            self._residual[v][w] = self._residual[v].get(w, 0.0) + c
            self._residual[w].setdefault(v, 0.0)
        self._original = {v: dict(arcs) for v, arcs in self._residual.items()}
        self._max_flow: Optional[float] = None

    def _augment(self) -> float:
        parent: dict[Hashable, Hashable] = {self._source: None}
        queue = deque([self._source])
        while queue and self._sink not in parent:
            v = queue.popleft()
            for w, c in self._residual[v].items():
                if c > 0 and w not in parent:
                    parent[w] = v
                    queue.append(w)
        if self._sink not in parent:
            return 0.0

        path_capacity = math.inf
        w = self._sink
        while w != self._source:
            v = parent[w]
            path_capacity = min(path_capacity, self._residual[v][w])
            w = v
        if math.isinf(path_capacity):
            return math.inf

        w = self._sink
        while w != self._source:
            v = parent[w]
            self._residual[v][w] -= path_capacity
            self._residual[w][v] += path_capacity
            w = v
        return path_capacity

    def max_flow(self) -> float:
        if self._max_flow is None:
            total = 0.0
            while True:
                pushed = self._augment()
                if pushed == 0.0:
                    break
                total += pushed
                if math.isinf(total):
                    break
            self._max_flow = total
        return self._max_flow

    def source_side(self) -> set:
        """Vertices reachable from the source in the final residual network."""
        self.max_flow()
        seen = {self._source}
        queue = deque([self._source])
        while queue:
            v = queue.popleft()
            for w, c in self._residual[v].items():
                if c > 0 and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def min_cut(self) -> list[tuple[Hashable, Hashable]]:
        side = self.source_side()
        return [
            (v, w)
            for v in side
            for w, c in self._original[v].items()
            if c > 0 and w not in side
        ]


def _confined(trunc: FiniteTruncation, target: Iterable[VertexId], removed: set[tuple[int, int]]) -> bool:
    """True iff no vertex of `target` reaches the truncation boundary avoiding `removed`."""
    boundary = trunc.boundary_mask
    starts = [trunc.index_of(v) for v in target]
    seen = set(starts)
    queue = deque(starts)
    while queue:
        i = queue.popleft()
        if boundary[i]:
            return False
        for j, _ in trunc.incidence[i]:
            if j in seen or (min(i, j), max(i, j)) in removed:
                continue
            seen.add(j)
            queue.append(j)
    return True


def verify_cutset(
    spec: GraphSpec,
    target: Iterable[VertexId],
    cut_edges: Iterable[Edge],
    verify_radius: int,
    K: Optional[int] = None,
    cap: int = DEFAULT_VERTEX_CAP,
) -> CutsetVerdict:
    """Check that removing `cut_edges` confines every vertex of `target` inside ball(target, verify_radius)."""
    target = sorted(set(target), key=vertex_sort_key)
    if not target:
        raise ConfigError("verify_cutset needs a non-empty target set")
    cut_edges = list(cut_edges)
    family = family_for(spec)

    if K is not None and len(cut_edges) > K:
        logger.warning("Certificate has %d edges, more than K=%d", len(cut_edges), K)
        return CutsetVerdict.REJECTED
    for u, v in cut_edges:
        family.validate(u)
        family.validate(v)
        if v not in family.adjacent(u):
            logger.warning("Cut edge %s -- %s is not an edge", format_vertex(u), format_vertex(v))
            return CutsetVerdict.REJECTED

    trunc = ball(spec, target, verify_radius, cap=cap)
    removed = set()
    for u, v in cut_edges:
        if u in trunc and v in trunc:
            a, b = trunc.index_of(u), trunc.index_of(v)
            removed.add((min(a, b), max(a, b)))

    if _confined(trunc, target, removed):
        return CutsetVerdict.CONFIRMED
    return CutsetVerdict.INCONCLUSIVE


def min_cut_in_window(trunc: FiniteTruncation, target: Iterable[VertexId]) -> tuple[float, list[tuple[int, int]]]:
    """Minimum number of window edges separating `target` from the window boundary.

    Returns (value, cut as index pairs); value is inf when a target vertex lies on the boundary.
    """
    targets = [trunc.index_of(v) for v in target]
    boundary = trunc.boundary_mask
    if any(boundary[i] for i in targets):
        return math.inf, []

    arcs: list[tuple[Hashable, Hashable, float]] = []
    for a, b in trunc.edges.tolist():
        arcs.append((a, b, 1.0))
        arcs.append((b, a, 1.0))
    arcs.extend((_SOURCE, i, math.inf) for i in targets)
    arcs.extend((int(i), _SINK, math.inf) for i in boundary.nonzero()[0])

    network = FordFulkerson(arcs, _SOURCE, _SINK)
    value = network.max_flow()
    cut = sorted(
        (min(v, w), max(v, w))  # type: ignore[type-var]
        for v, w in network.min_cut()
        if v != _SOURCE and w != _SINK
    )
    return value, cut


def find_bounded_cutset(
    spec: GraphSpec,
    target: Iterable[VertexId],
    K: int,
    search_radius: int,
    cap: int = DEFAULT_VERTEX_CAP,
) -> CutsetSearch:
    """Search for at most K edges whose removal confines `target` to finite components."""
    if K < 1:
        raise ConfigError(f"K must be >= 1, got {K}")
    target = frozenset(target)
    if not target:
        raise ConfigError("find_bounded_cutset needs a non-empty target set")

    trunc = ball(spec, target, search_radius, cap=cap)
    value, cut = min_cut_in_window(trunc, target)
    logger.info("Min cut around %d target vertices at radius %d: %s", len(target), search_radius, value)

    certificate = None
    if value <= K:
        edges = frozenset(normalize_edge(trunc.vertices[a], trunc.vertices[b]) for a, b in cut)
        certificate = CutsetCertificate(target, edges, K, search_radius)
    return CutsetSearch(value, K, search_radius, certificate)
