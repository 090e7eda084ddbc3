"""Crossing counts between consecutive insertion levels of (tree with ℤᵈ insertions) × ℤ.

Starting from (x, 0) with x a tree vertex at level l_{n-1}, Z is the set of
tree vertices z at level l_n such that (z, 0) is joined to (x, 0) by an open
path whose interior stays in tree levels strictly between l_{n-1} and l_n or
in the ℤ^{d+1} copies glued below level l_n.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from product_percolation.errors import ConfigError
from product_percolation.graphs.base import LatticePoint, ProductVertex, TreeNode, VertexId
from product_percolation.graphs.families import TreeWithInsertionsFamily, family_for
from product_percolation.graphs.spec import GraphSpec
from product_percolation.graphs.truncation import DEFAULT_VERTEX_CAP, FiniteTruncation, restricted_truncation
from product_percolation.percolation.sampling import check_probability, sample_bonds
from product_percolation.percolation.union_find import ClusterLabeling
from product_percolation.utils.pool import SERIAL, ReplicaPool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OffspringSample:
    """Empirical law of |Z| over independent replicas."""

    d: int
    n: int
    p: float
    window: int
    height: int
    counts: tuple[int, ...]
    level_size: int
    boundary_hits: int

    @property
    def replicas(self) -> int:
        return len(self.counts)

    @property
    def lower_bound_only(self) -> bool:
        """True when some cluster touched the artificial edge of the window."""
        return self.boundary_hits > 0

    @property
    def mean(self) -> float:
        return float(np.mean(self.counts))

    @property
    def stderr(self) -> float:
        if self.replicas < 2:
            return math.nan
        return float(np.std(self.counts, ddof=1) / math.sqrt(self.replicas))

    def distribution(self) -> dict[int, float]:
        values, freq = np.unique(np.asarray(self.counts), return_counts=True)
        return {int(v): float(f) / self.replicas for v, f in zip(values, freq)}

    def histogram_rows(self) -> list[tuple[int, int, float]]:
        values, freq = np.unique(np.asarray(self.counts), return_counts=True)
        return [(int(v), int(f), float(f) / self.replicas) for v, f in zip(values, freq)]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "p": self.p,
            "window": self.window,
            "height": self.height,
            "replicas": self.replicas,
            "mean": self.mean,
            "stderr": self.stderr,
            "levelSize": self.level_size,
            "lowerBoundOnly": self.lower_bound_only,
            "boundaryHits": self.boundary_hits,
            "distribution": {str(k): v for k, v in self.distribution().items()},
        }


@dataclass(frozen=True, eq=False)
class Slab:
    """The region between levels l_{n-1} and l_n that a crossing path may use."""

    window: FiniteTruncation
    start: int
    terminals: np.ndarray
    artificial_boundary: np.ndarray


def build_slab(
    spec: GraphSpec, n: int, window: int, height: int, cap: int = DEFAULT_VERTEX_CAP
) -> Slab:
    """Restricted exploration from (x, 0), x = the first tree vertex at level l_{n-1}."""
    if n < 2:
        raise ConfigError(f"n must be >= 2 so that level l_(n-1) exists, got {n}")
    if window < 0 or height < 0:
        raise ConfigError(f"window and height must be non-negative, got {window}, {height}")
    product = spec.with_line()
    base: TreeWithInsertionsFamily = family_for(spec.base())  # type: ignore[assignment]
    low, high = base.levels.levels(n)[-2:]
    lattice_n = base.levels.insertion(high)
    x = TreeNode((0,) * low)
    start = ProductVertex(x, 0)

    def allowed(v: VertexId) -> bool:
        pv: ProductVertex = v  # type: ignore[assignment]
        if abs(pv.z) > height:
            return False
        inner = pv.base
        if isinstance(inner, TreeNode):
            if inner.level == high:
                return pv.z == 0
            return low < inner.level < high
        if isinstance(inner, LatticePoint):
            return len(inner.owner) == high and all(-window <= c <= lattice_n + window for c in inner.coords)
        return False

    region = restricted_truncation(product, start, allowed, cap=cap)
    terminals = np.zeros(region.num_vertices, dtype=bool)
    artificial = np.zeros(region.num_vertices, dtype=bool)
    for i, v in enumerate(region.vertices):
        inner = v.base  # type: ignore[union-attr]
        if isinstance(inner, TreeNode) and inner.level == high:
            terminals[i] = True
            continue
        clipped = abs(v.z) == height  # type: ignore[union-attr]
        if isinstance(inner, LatticePoint):
            clipped = clipped or any(c in (-window, lattice_n + window) for c in inner.coords)
        artificial[i] = clipped
    logger.info(
        "Slab between levels %d and %d: %d vertices, %d terminals",
        low, high, region.num_vertices, int(terminals.sum()),
    )
    return Slab(region, region.index_of(start), terminals, artificial)


def offspring_simulation(
    d: int,
    n: int,
    p: float,
    replicas: int,
    seed: int,
    window: int = 2,
    height: Optional[int] = None,
    n0: int = 1,
    pool: ReplicaPool = SERIAL,
    cap: int = DEFAULT_VERTEX_CAP,
) -> OffspringSample:
    """Empirical distribution of |Z| for the level-(l_{n-1} -> l_n) crossing.

    Copies are clipped to [-window, n + window]^d and the line to
    |z| <= height (default n + window); clipping only removes paths, so each
    count is a lower bound and `lower_bound_only` reports whether it bit.
    """
    p = check_probability(p)
    if replicas < 1:
        raise ConfigError(f"replicas must be >= 1, got {replicas}")
    height = n + window if height is None else height
    spec = GraphSpec.tree_with_insertions(d, n0)
    slab = build_slab(spec, n, window, height, cap=cap)
    region = slab.window

    def replica(index: int) -> tuple[int, bool]:
        sample = sample_bonds(region, p, seed, index, stream="offspring")
        label = ClusterLabeling.from_edge_mask(region, sample.open_edges, sample)
        members = label.roots == label.find(slab.start)
        return int(np.count_nonzero(members & slab.terminals)), bool(np.any(members & slab.artificial_boundary))

    results = pool.map(replica, range(replicas))
    sample = OffspringSample(
        d=d,
        n=n,
        p=p,
        window=window,
        height=height,
        counts=tuple(c for c, _ in results),
        level_size=int(slab.terminals.sum()),
        boundary_hits=sum(1 for _, hit in results if hit),
    )
    if sample.lower_bound_only:
        logger.warning(
            "Crossing clusters touched the window edge in %d of %d replicas; counts are lower bounds",
            sample.boundary_hits, replicas,
        )
    return sample
