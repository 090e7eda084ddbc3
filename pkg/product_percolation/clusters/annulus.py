"""Shell-escape events on a cylinder window B(v, Q) × [-H, H] of a product with ℤ.

E_i: the cluster of (v, 0) reaches the shell at base distance Q_i but not Q_{i+1}.
F_i: restricted to base distance <= Q_i, the cluster of (v, 0) meets the shell
Q_i at between 1 and L distinct heights.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from product_percolation.errors import ConfigError
from product_percolation.graphs.base import ProductVertex, VertexId
from product_percolation.graphs.families import origin
from product_percolation.graphs.spec import GraphSpec
from product_percolation.graphs.truncation import DEFAULT_VERTEX_CAP, cylinder
from product_percolation.percolation.sampling import check_probability, sample_bonds
from product_percolation.percolation.union_find import ClusterLabeling
from product_percolation.utils.pool import SERIAL, ReplicaPool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnnulusReport:
    radii: tuple[int, ...]
    L: int
    height: int
    p: float
    replicas: int
    e_frequencies: tuple[float, ...]
    f_frequencies: tuple[float, ...]
    max_events_per_replica: int

    @property
    def e_total(self) -> float:
        return float(sum(self.e_frequencies))

    @property
    def f_non_increasing(self) -> bool:
        return all(a >= b for a, b in zip(self.f_frequencies, self.f_frequencies[1:]))

    def rows(self) -> list[tuple[int, int, Optional[float], float]]:
        """(i, Q_i, freq(E_i), freq(F_i)); E is undefined for the outermost shell."""
        rows = []
        for i, q in enumerate(self.radii):
            e = self.e_frequencies[i] if i < len(self.e_frequencies) else None
            rows.append((i + 1, q, e, self.f_frequencies[i]))
        return rows

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "L": self.L,
            "height": self.height,
            "p": self.p,
            "replicas": self.replicas,
            "e_frequencies": list(self.e_frequencies),
            "f_frequencies": list(self.f_frequencies),
            "e_total": self.e_total,
            "max_events_per_replica": self.max_events_per_replica,
            "f_non_increasing": self.f_non_increasing,
        }


def annulus_escape_events(
    spec: GraphSpec,
    v: Optional[VertexId],
    p: float,
    radii: Sequence[int],
    L: int,
    replicas: int,
    seed: int,
    height: Optional[int] = None,
    pool: ReplicaPool = SERIAL,
    cap: int = DEFAULT_VERTEX_CAP,
) -> AnnulusReport:
    """Frequencies of E_i (i < len(radii)) and F_i (every i) over independent replicas.

    `spec` is the base graph; the fiber is clipped to |z| <= height
    (default 2 * max(radii)).
    """
    radii = tuple(int(q) for q in radii)
    if not radii or radii[0] < 1 or any(a >= b for a, b in zip(radii, radii[1:])):
        raise ConfigError(f"radii must be positive and strictly increasing, got {list(radii)}")
    if L < 1:
        raise ConfigError(f"L must be >= 1, got {L}")
    p = check_probability(p)
    base = spec.base()
    v = v if v is not None else origin(base)
    height = height if height is not None else 2 * radii[-1]

    window = cylinder(base, v, radii[-1], height, cap=cap)
    start = window.index_of(ProductVertex(v, 0))  # type: ignore[arg-type]
    heights = np.array([u.z for u in window.vertices])  # type: ignore[union-attr]
    shells = [window.distances == q for q in radii]
    restricted = [window.induced_edges(window.distances <= q) for q in radii]
    logger.info("Annulus window: %d vertices, radii %s, height %d", window.num_vertices, radii, height)

    def replica(index: int) -> tuple[list[bool], list[bool]]:
        sample = sample_bonds(window, p, seed, index, stream="annulus")
        label = ClusterLabeling.from_edge_mask(window, sample.open_edges, sample)
        in_cluster = label.roots == label.find(start)
        reached = [bool(np.any(in_cluster & shell)) for shell in shells]
        events = [reached[i] and not reached[i + 1] for i in range(len(radii) - 1)]

        f_events = []
        for shell, edge_mask in zip(shells, restricted):
            inner = ClusterLabeling.from_edge_mask(window, sample.open_edges & edge_mask)
            members = (inner.roots == inner.find(start)) & shell
            distinct = np.unique(heights[members]).size
            f_events.append(0 < distinct <= L)
        return events, f_events

    results = pool.map(replica, range(replicas))
    e_counts = np.zeros(len(radii) - 1, dtype=np.int64)
    f_counts = np.zeros(len(radii), dtype=np.int64)
    max_events = 0
    for events, f_events in results:
        e_counts += np.array(events, dtype=np.int64)
        f_counts += np.array(f_events, dtype=np.int64)
        max_events = max(max_events, sum(events))

    return AnnulusReport(
        radii=radii,
        L=L,
        height=height,
        p=p,
        replicas=replicas,
        e_frequencies=tuple(float(c) / replicas for c in e_counts),
        f_frequencies=tuple(float(c) / replicas for c in f_counts),
        max_events_per_replica=max_events,
    )
