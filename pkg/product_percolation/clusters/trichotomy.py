"""Counting distinct open clusters that join an inner ball to a far boundary."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from product_percolation.errors import ConfigError
from product_percolation.graphs.base import VertexId
from product_percolation.graphs.families import origin
from product_percolation.graphs.spec import GraphSpec
from product_percolation.graphs.truncation import DEFAULT_VERTEX_CAP, ball
from product_percolation.clusters.trifurcation import trifurcation_count
from product_percolation.percolation.estimators import mean_estimate
from product_percolation.percolation.sampling import check_probability, sample_bonds
from product_percolation.percolation.union_find import ClusterLabeling
from product_percolation.utils.pool import SERIAL, ReplicaPool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrichotomyReport:
    """Distribution of the number of clusters joining ball(r) to the boundary of ball(R)."""

    spec: GraphSpec
    p: float
    inner_radius: int
    outer_radius: int
    replicas: int
    histogram: dict[int, int]
    mean_count: float
    stderr: float
    counts: tuple[int, ...] = field(repr=False)
    trifurcation_density: Optional[float] = None

    def frequency(self, count: int) -> float:
        return self.histogram.get(count, 0) / self.replicas

    def histogram_rows(self) -> list[tuple[int, float]]:
        return [(k, self.histogram[k] / self.replicas) for k in sorted(self.histogram)]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_mapping(),
            "p": self.p,
            "inner_radius": self.inner_radius,
            "outer_radius": self.outer_radius,
            "replicas": self.replicas,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "mean_count": self.mean_count,
            "stderr": self.stderr,
            "trifurcation_density": self.trifurcation_density,
        }


def count_crossing_clusters(label: ClusterLabeling, inner: np.ndarray, outer: np.ndarray) -> int:
    """Distinct roots owning a vertex of `inner` and a vertex of `outer`."""
    return len(label.roots_touching(inner) & label.roots_touching(outer))


def _report(
    spec: GraphSpec,
    p: float,
    r: int,
    R: int,
    counts: Sequence[int],
    trifurcation_density: Optional[float] = None,
) -> TrichotomyReport:
    summary = mean_estimate(counts)
    return TrichotomyReport(
        spec=spec,
        p=p,
        inner_radius=r,
        outer_radius=R,
        replicas=len(counts),
        histogram=dict(sorted(Counter(counts).items())),
        mean_count=summary.estimate,
        stderr=summary.stderr,
        counts=tuple(counts),
        trifurcation_density=trifurcation_density,
    )


def boundary_cluster_count(
    spec: GraphSpec,
    r: int,
    R: int,
    p: float,
    replicas: int,
    seed: int,
    center: Optional[VertexId] = None,
    trifurcation_replicas: int = 0,
    pool: ReplicaPool = SERIAL,
    cap: int = DEFAULT_VERTEX_CAP,
) -> TrichotomyReport:
    """Per replica, count clusters meeting both ball(r) and the boundary of ball(R).

    With `trifurcation_replicas` > 0, the first that many replicas also count
    trifurcation points inside ball(r); the density is per inner-ball vertex.
    """
    if not 0 < r < R:
        raise ConfigError(f"Need 0 < r < R, got r={r}, R={R}")
    p = check_probability(p)
    center = center if center is not None else origin(spec)
    window = ball(spec, center, R, cap=cap)
    inner = window.distances <= r
    outer = window.boundary_mask
    inner_vertices = [window.vertices[i] for i in np.flatnonzero(inner)]
    logger.info("Trichotomy window of %s: %d vertices", spec.describe(), window.num_vertices)

    def replica(index: int) -> tuple[int, int]:
        sample = sample_bonds(window, p, seed, index, stream="trichotomy")
        label = ClusterLabeling.from_edge_mask(window, sample.open_edges, sample)
        trifurcations = 0
        if index < trifurcation_replicas:
            trifurcations = trifurcation_count(label, inner_vertices)
        return count_crossing_clusters(label, inner, outer), trifurcations

    results = pool.map(replica, range(replicas))
    counts = [c for c, _ in results]
    density = None
    if trifurcation_replicas > 0:
        used = min(trifurcation_replicas, replicas)
        density = sum(t for _, t in results[:used]) / (used * len(inner_vertices))
    return _report(spec, p, r, R, counts, density)


def boundary_cluster_profile(
    spec: GraphSpec,
    r: int,
    radii: Sequence[int],
    p: float,
    replicas: int,
    seed: int,
    center: Optional[VertexId] = None,
    pool: ReplicaPool = SERIAL,
    cap: int = DEFAULT_VERTEX_CAP,
) -> list[TrichotomyReport]:
    """Boundary-cluster counts for several outer radii on one coupled sample.

    Each replica samples ball(max radii) once; the count for R uses only the
    edges induced on ball(R). Under this coupling every count is
    non-increasing in R replica by replica.
    """
    radii = sorted(set(radii))
    if not radii or radii[0] <= r:
        raise ConfigError(f"Outer radii must all exceed r={r}, got {list(radii)}")
    p = check_probability(p)
    center = center if center is not None else origin(spec)
    window = ball(spec, center, radii[-1], cap=cap)
    inner = window.distances <= r
    edge_masks = [window.induced_edges(window.distances <= R) for R in radii]
    spheres = [window.distances == R for R in radii]

    def replica(index: int) -> list[int]:
        sample = sample_bonds(window, p, seed, index, stream="trichotomy-profile")
        counts = []
        for edge_mask, sphere in zip(edge_masks, spheres):
            label = ClusterLabeling.from_edge_mask(window, sample.open_edges & edge_mask, sample)
            counts.append(count_crossing_clusters(label, inner, sphere))
        return counts

    per_replica = pool.map(replica, range(replicas))
    return [_report(spec, p, r, R, [row[k] for row in per_replica]) for k, R in enumerate(radii)]
