"""Volume growth and Følner-ratio profiles of balls around the root."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from product_percolation.errors import ConfigError, TruncationTooLargeError
from product_percolation.graphs.families import family_for
from product_percolation.graphs.spec import GraphSpec
from product_percolation.graphs.truncation import DEFAULT_VERTEX_CAP, ball

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrowthProfile:
    """|B(r)| for r = 0..len(volumes)-1 with derived growth statistics."""

    spec: GraphSpec
    volumes: tuple[int, ...]
    method: str
    truncated: bool = False

    @property
    def radii(self) -> range:
        return range(len(self.volumes))

    def log_volume(self, r: int) -> float:
        return math.log(self.volumes[r])

    def rate(self, r: int) -> float:
        """g(r)/r with g(r) = log |B(r)|."""
        if r < 1:
            raise ConfigError("rate is defined for r >= 1")
        return self.log_volume(r) / r

    def normalized(self, r: int) -> float:
        """g(r) / (sqrt(r) log r), for r >= 2."""
        if r < 2:
            raise ConfigError("normalized growth is defined for r >= 2")
        return self.log_volume(r) / (math.sqrt(r) * math.log(r))

    def block_maxima(self, blocks: Sequence[tuple[int, int]]) -> list[float]:
        return [max(self.rate(r) for r in range(lo, hi + 1)) for lo, hi in blocks]

    def rows(self) -> list[tuple[int, int, Optional[float], Optional[float]]]:
        """(r, |B(r)|, g(r)/r, g(r)/(sqrt(r) log r))."""
        return [
            (
                r,
                v,
                self.rate(r) if r >= 1 else None,
                self.normalized(r) if r >= 2 else None,
            )
            for r, v in enumerate(self.volumes)
        ]


def _bfs_volumes(spec: GraphSpec, r_max: int, cap: int) -> tuple[list[int], bool]:
    family = family_for(spec)
    start = family.origin()
    seen = {start}
    frontier = [start]
    volumes = [1]
    for _ in range(r_max):
        next_frontier = []
        for v in frontier:
            for u in family.adjacent(v):
                if u not in seen:
                    seen.add(u)
                    next_frontier.append(u)
        if len(seen) > cap:
            logger.warning("Growth profile of %s truncated at r=%d (cap %d)", spec.describe(), len(volumes), cap)
            return volumes, True
        volumes.append(len(seen))
        frontier = next_frontier
    return volumes, False


def volume_growth_profile(
    spec: GraphSpec, r_max: int, method: str = "exact", cap: int = DEFAULT_VERTEX_CAP
) -> GrowthProfile:
    """Ball volumes around the root.

    method="exact" sums the families' closed-form sphere sizes (feasible at
    any radius); method="bfs" counts by breadth-first search and stops with
    `truncated=True` once the cap is hit.
    """
    if r_max < 0:
        raise ConfigError(f"r_max must be non-negative, got {r_max}")
    if method == "exact":
        volumes = []
        total = 0
        for size in family_for(spec).sphere_sizes(r_max):
            total += size
            volumes.append(total)
        return GrowthProfile(spec, tuple(volumes), method)
    if method == "bfs":
        volumes, truncated = _bfs_volumes(spec, r_max, cap)
        return GrowthProfile(spec, tuple(volumes), method, truncated)
    raise ConfigError(f"Unknown growth method {method!r}; expected 'exact' or 'bfs'")


@dataclass(frozen=True)
class CheegerPoint:
    radius: int
    volume: int
    edge_boundary: int

    @property
    def ratio(self) -> float:
        return self.edge_boundary / self.volume


def cheeger_profile(spec: GraphSpec, radii: Sequence[int], cap: int = DEFAULT_VERTEX_CAP) -> list[CheegerPoint]:
    """|∂B(r)| / |B(r)| for each radius: a Følner witness, an upper bound on the Cheeger constant."""
    points = []
    family = family_for(spec)
    for r in radii:
        try:
            window = ball(spec, family.origin(), r, cap=cap)
        except TruncationTooLargeError:
            logger.error("Ball of radius %d exceeds the cap of %d", r, cap)
            raise
        points.append(CheegerPoint(r, window.num_vertices, window.edge_boundary_size()))
    return points
