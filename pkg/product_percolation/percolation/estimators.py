"""Monte Carlo estimators: two-point function, crossings and p_c bisection."""

import logging
import math
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, minimum_spanning_tree

from product_percolation.errors import ConfigError, WindowError
from product_percolation.graphs.base import VertexId
from product_percolation.graphs.encoding import format_vertex, vertex_sort_key
from product_percolation.graphs.families import validate_vertex
from product_percolation.graphs.spec import GraphKind, GraphSpec
from product_percolation.graphs.truncation import DEFAULT_VERTEX_CAP, FiniteTruncation, ball, lattice_box
from product_percolation.percolation import rng
from product_percolation.percolation.sampling import check_probability, sample_bonds
from product_percolation.percolation.union_find import clusters
from product_percolation.utils.pool import SERIAL, ReplicaPool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo estimate with its standard error and provenance."""

    estimate: float
    stderr: float
    replicas: int
    window_radius: Optional[int] = None
    p: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def bernoulli_estimate(hits: int, replicas: int, **extra) -> Estimate:
    """Frequency estimate with stderr sqrt(p(1-p)/n)."""
    if replicas < 1:
        raise ConfigError(f"replicas must be >= 1, got {replicas}")
    frequency = hits / replicas
    return Estimate(frequency, math.sqrt(frequency * (1.0 - frequency) / replicas), replicas, **extra)


def mean_estimate(values: Sequence[float], **extra) -> Estimate:
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise ConfigError("Cannot estimate a mean from zero replicas")
    stderr = float(data.std(ddof=1) / math.sqrt(data.size)) if data.size > 1 else 0.0
    return Estimate(float(data.mean()), stderr, int(data.size), **extra)


def two_point_estimate(
    spec: GraphSpec,
    x: VertexId,
    y: VertexId,
    p: float,
    window_radius: int,
    replicas: int,
    seed: int,
    pool: ReplicaPool = SERIAL,
    cap: int = DEFAULT_VERTEX_CAP,
) -> Estimate:
    """Frequency of x <-> y inside the ball around whichever endpoint encodes smaller.

    Truncation makes this a lower bound on the infinite-volume probability.
    """
    p = check_probability(p)
    validate_vertex(spec, x)
    validate_vertex(spec, y)
    if x == y:
        return Estimate(1.0, 0.0, replicas, window_radius, p)

    center = min(x, y, key=vertex_sort_key)
    window = ball(spec, center, window_radius, cap=cap)
    for v in (x, y):
        if v not in window:
            raise WindowError(f"{format_vertex(v)} lies outside the window of radius {window_radius}")

    def replica(index: int) -> bool:
        sample = sample_bonds(window, p, seed, index, stream="two-point")
        return clusters(sample).connected(x, y)

    hits = sum(pool.map(replica, range(replicas)))
    logger.info("Two-point estimate %s <-> %s: %d/%d", format_vertex(x), format_vertex(y), hits, replicas)
    return bernoulli_estimate(hits, replicas, window_radius=window_radius, p=p)


def percolation_probability(
    spec: GraphSpec,
    p: float,
    radius: int,
    replicas: int,
    seed: int,
    center: Optional[VertexId] = None,
    pool: ReplicaPool = SERIAL,
    cap: int = DEFAULT_VERTEX_CAP,
) -> Estimate:
    """Frequency of the centre being joined to the boundary of its ball."""
    from product_percolation.graphs.families import origin

    p = check_probability(p)
    center = center if center is not None else origin(spec)
    window = ball(spec, center, radius, cap=cap)
    center_index = window.index_of(center)
    boundary = window.boundary_mask

    def replica(index: int) -> bool:
        label = clusters(sample_bonds(window, p, seed, index, stream="percolate"))
        return label.find(center_index) in label.roots_touching(boundary)

    hits = sum(pool.map(replica, range(replicas)))
    return bernoulli_estimate(hits, replicas, window_radius=radius, p=p)


class CrossingBox:
    """Box [0, L] x [0, L-1]^(d-1) of ℤᵈ with virtual nodes glued to its two x_1-faces.

    For a vector of edge uniforms, `threshold` returns the smallest p at which
    an open left-right crossing appears: the largest uniform on the minimax
    path between the virtual nodes, read off a minimum spanning tree.
    """

    def __init__(self, d: int, L: int) -> None:
        if d < 1:
            raise ConfigError(f"Crossing boxes need d >= 1, got {d}")
        if L < 2:
            raise ConfigError(f"Crossing boxes need L >= 2, got {L}")
        self.d = d
        self.L = L
        self.truncation: FiniteTruncation = lattice_box(d, (L + 1,) + (L,) * (d - 1))
        n = self.truncation.num_vertices
        first = np.array([v.coords[0] for v in self.truncation.vertices])  # type: ignore[union-attr]
        self.left = np.flatnonzero(first == 0)
        self.right = np.flatnonzero(first == L)
        self.left_virtual = n
        self.right_virtual = n + 1
        edges = self.truncation.edges
        self._rows = np.concatenate([edges[:, 0], self.left, self.right])
        self._cols = np.concatenate(
            [
                edges[:, 1],
                np.full(self.left.size, self.left_virtual),
                np.full(self.right.size, self.right_virtual),
            ]
        )
        self._virtual_weights = np.full(self.left.size + self.right.size, 0.5)

    @property
    def num_edges(self) -> int:
        return self.truncation.num_edges

    def threshold(self, edge_uniforms: np.ndarray) -> float:
        n = self.truncation.num_vertices + 2
        # Real weights are shifted into [1, 2) so virtual edges (0.5) never bind.
        weights = np.concatenate([edge_uniforms + 1.0, self._virtual_weights])
        graph = coo_matrix((weights, (self._rows, self._cols)), shape=(n, n)).tocsr()
        tree = minimum_spanning_tree(graph).tocoo()
        tree_sym = coo_matrix(
            (np.concatenate([tree.data, tree.data]),
             (np.concatenate([tree.row, tree.col]), np.concatenate([tree.col, tree.row]))),
            shape=(n, n),
        ).tocsr()
        _, predecessors = breadth_first_order(
            tree_sym, self.left_virtual, directed=False, return_predecessors=True
        )
        parent_weight = np.zeros(n)
        up = predecessors[tree.row] == tree.col
        parent_weight[tree.row[up]] = tree.data[up]
        parent_weight[tree.col[~up]] = tree.data[~up]

        pred = predecessors.tolist()
        node = self.right_virtual
        worst = 0.0
        while node != self.left_virtual:
            worst = max(worst, parent_weight[node])
            node = pred[node]
        return float(worst - 1.0)

    def replica_uniforms(self, seed: int, replica_index: int) -> np.ndarray:
        return rng.uniforms(seed, self.num_edges, "crossing", self.d, self.L, replica_index)


def _crossing_box(spec: GraphSpec, L: int) -> CrossingBox:
    if spec.kind != GraphKind.LATTICE or spec.product:
        raise ConfigError(f"Crossing estimators need a plain lattice spec, got {spec.describe()}")
    return CrossingBox(spec.d, L)


def crossing_thresholds(
    spec: GraphSpec, L: int, replicas: int, seed: int, pool: ReplicaPool = SERIAL
) -> np.ndarray:
    """Per-replica crossing thresholds; crossing at p happens iff threshold < p."""
    box = _crossing_box(spec, L)
    values = pool.map(lambda i: box.threshold(box.replica_uniforms(seed, i)), range(replicas))
    return np.array(values, dtype=float)


@dataclass(frozen=True)
class CrossingSamples:
    """Crossing thresholds of one set of replicas; every p shares the same samples."""

    thresholds: np.ndarray
    L: int
    seed: int

    @property
    def replicas(self) -> int:
        return int(self.thresholds.size)

    @cached_property
    def _sorted(self) -> np.ndarray:
        return np.sort(self.thresholds)

    def probability(self, p: float) -> Estimate:
        hits = int(np.searchsorted(self._sorted, p, side="left"))
        return bernoulli_estimate(hits, self.replicas, window_radius=self.L, p=float(p))


def crossing_probability(
    spec: GraphSpec, L: int, p: float, replicas: int, seed: int, pool: ReplicaPool = SERIAL
) -> Estimate:
    """Frequency of an open left-right crossing of the box."""
    p = check_probability(p)
    thresholds = crossing_thresholds(spec, L, replicas, seed, pool)
    return CrossingSamples(thresholds, L, seed).probability(p)


def crossing_sweep(
    spec: GraphSpec, L: int, ps: Sequence[float], replicas: int, seed: int, pool: ReplicaPool = SERIAL
) -> list[Estimate]:
    samples = CrossingSamples(crossing_thresholds(spec, L, replicas, seed, pool), L, seed)
    return [samples.probability(check_probability(p)) for p in ps]


@dataclass(frozen=True)
class PcEstimate:
    pc: float
    lower: float
    upper: float
    L: int
    replicas: int
    iterations: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def estimate_pc(
    spec: GraphSpec,
    L: int,
    tolerance: float,
    seed: int,
    replicas: int = 10_000,
    bracket: tuple[float, float] = (0.0, 1.0),
    pool: ReplicaPool = SERIAL,
) -> PcEstimate:
    """Bisect p until the coupled crossing frequency brackets 1/2 within `tolerance`."""
    if tolerance <= 0:
        raise ConfigError(f"tolerance must be positive, got {tolerance}")
    lower, upper = (check_probability(b, "bracket") for b in bracket)
    samples = CrossingSamples(crossing_thresholds(spec, L, replicas, seed, pool), L, seed)

    if not (samples.probability(lower).estimate < 0.5 <= samples.probability(upper).estimate):
        raise WindowError(
            f"Bracket [{lower}, {upper}] does not straddle crossing probability 1/2 "
            f"({samples.probability(lower).estimate:.3f}, {samples.probability(upper).estimate:.3f})"
        )

    iterations = 0
    while upper - lower > tolerance:
        mid = 0.5 * (lower + upper)
        if samples.probability(mid).estimate < 0.5:
            lower = mid
        else:
            upper = mid
        iterations += 1
    logger.info("p_c bisection for L=%d converged after %d steps: [%.5f, %.5f]", L, iterations, lower, upper)
    return PcEstimate(0.5 * (lower + upper), lower, upper, L, replicas, iterations, seed)
