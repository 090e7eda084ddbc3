"""Expected returns of branching walks: the path-counting series and the radial tree process."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from product_percolation.errors import ConfigError
from product_percolation.percolation import rng
from product_percolation.utils.pool import SERIAL, ReplicaPool

logger = logging.getLogger(__name__)

SERIES_TAIL_TOL = 1e-9


@dataclass(frozen=True)
class TransienceSeries:
    """Partial sums of sum_{t>=1} sum_{s<=t, s even} (4d)^{s/2} d^{-s} 2^{-(t-s)}."""

    d: int
    t_max: int
    partial_sums: tuple[float, ...]
    ratio: float
    tail_bound: float
    converged: bool
    limit: Optional[float]

    def rows(self) -> list[tuple[int, float]]:
        return [(t, s) for t, s in enumerate(self.partial_sums, start=1)]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "tMax": self.t_max,
            "ratio": self.ratio,
            "partialSum": self.partial_sums[-1],
            "tailBound": self.tail_bound,
            "converged": self.converged,
            "limit": self.limit,
        }


def _series_tail(rho: float, t_max: int) -> float:
    """Bound on sum_{t > T} (t+1) rho^t, which dominates the omitted terms."""
    if rho >= 1.0:
        return math.inf
    return rho ** (t_max + 1) * ((t_max + 2) - (t_max + 1) * rho) / (1.0 - rho) ** 2


def expected_returns_series(d: int, t_max: int) -> TransienceSeries:
    """Bound on the expected number of returns of the dominating walk, summed to t_max.

    The inner sum obeys term(t) = term(t-1)/2 + [t even] r^t with r = (4d)^{1/2}/d.
    The series converges iff r < 1, that is d > 4; `converged` also requires
    the tail bound to fall below 1e-9.
    """
    if d < 1 or t_max < 1:
        raise ConfigError(f"expected_returns_series needs d >= 1 and tMax >= 1, got d={d}, tMax={t_max}")
    ratio = math.sqrt(4 * d) / d
    term = 1.0
    total = 0.0
    sums = []
    for t in range(1, t_max + 1):
        term /= 2.0
        if t % 2 == 0:
            try:
                term += ratio**t
            except OverflowError:
                term = math.inf
        total += term
        sums.append(total)

    tail = _series_tail(max(ratio, 0.5), t_max)
    converged = ratio < 1.0 and tail < SERIES_TAIL_TOL
    limit = 2.0 / (1.0 - ratio * ratio) - 1.0 if ratio < 1.0 else None
    logger.debug("Transience series d=%d: ratio %.6f, S(%d) = %.12g, tail %.3g", d, ratio, t_max, total, tail)
    return TransienceSeries(
        d=d,
        t_max=t_max,
        partial_sums=tuple(sums),
        ratio=ratio,
        tail_bound=tail,
        converged=converged,
        limit=limit,
    )


def _check_tree_process(degree: int, step_prob: float, stay_prob: float) -> None:
    if degree < 2:
        raise ConfigError(f"degree must be >= 2, got {degree}")
    for name, value in (("step_prob", step_prob), ("stay_prob", stay_prob)):
        if not 0.0 <= value <= 1.0:
            raise ConfigError(f"{name} must lie in [0, 1], got {value}")


def spectral_radius_bound(degree: int, step_prob: float, stay_prob: float) -> float:
    """stay + step * 2 sqrt(degree - 1); the radial process is transient when this is < 1."""
    return stay_prob + step_prob * 2.0 * math.sqrt(degree - 1)


def tree_brw_expected_returns(degree: int, step_prob: float, stay_prob: float, max_t: int) -> np.ndarray:
    """Exact expected returns to the start by time t, for t = 1..max_t.

    Iterates the mean operator on particle counts by distance from the start.
    """
    _check_tree_process(degree, step_prob, stay_prob)
    mean = np.zeros(max_t + 2)
    mean[0] = 1.0
    cumulative = np.zeros(max_t)
    returned = 0.0
    for t in range(max_t):
        nxt = stay_prob * mean
        nxt[1] += degree * step_prob * mean[0]
        nxt[:-1] += step_prob * mean[1:]
        nxt[2:] += (degree - 1) * step_prob * mean[1:-1]
        mean = nxt
        returned += mean[0]
        cumulative[t] = returned
    return cumulative


@dataclass(frozen=True)
class TreeBrwReport:
    degree: int
    step_prob: float
    stay_prob: float
    max_t: int
    replicas: int
    partial_means: tuple[float, ...]
    stderr: float
    aborted: int

    @property
    def mean_returns(self) -> float:
        return self.partial_means[-1]

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "stepProb": self.step_prob,
            "stayProb": self.stay_prob,
            "maxT": self.max_t,
            "replicas": self.replicas,
            "meanReturns": self.mean_returns,
            "stderr": self.stderr,
            "aborted": self.aborted,
            "spectralRadiusBound": spectral_radius_bound(self.degree, self.step_prob, self.stay_prob),
        }


def simulate_tree_brw(
    degree: int,
    step_prob: float,
    stay_prob: float,
    max_t: int,
    replicas: int,
    seed: int,
    population_cap: int = 1_000_000,
    pool: ReplicaPool = SERIAL,
) -> TreeBrwReport:
    """Branching walk on the regular tree tracked by distance from the start.

    Each particle keeps a copy of itself with probability stay_prob and sends
    one particle to each neighbour with probability step_prob.
    """
    _check_tree_process(degree, step_prob, stay_prob)
    if max_t < 1 or replicas < 2:
        raise ConfigError("simulate_tree_brw needs max_t >= 1 and replicas >= 2")

    def replica(index: int) -> tuple[np.ndarray, bool]:
        generator = rng.stream(seed, "tree-brw", index)
        counts = np.zeros(max_t + 2, dtype=np.int64)
        counts[0] = 1
        returns = np.zeros(max_t, dtype=np.int64)
        for t in range(max_t):
            nxt = generator.binomial(counts, stay_prob)
            nxt[1] += generator.binomial(degree * counts[0], step_prob)
            nxt[:-1] += generator.binomial(counts[1:], step_prob)
            nxt[2:] += generator.binomial((degree - 1) * counts[1:-1], step_prob)
            counts = nxt
            returns[t] = counts[0]
            if counts.sum() > population_cap:
                return np.cumsum(returns), True
        return np.cumsum(returns), False

    results = pool.map(replica, range(replicas))
    paths = np.array([r for r, _ in results], dtype=float)
    aborted = sum(1 for _, flag in results if flag)
    if aborted:
        logger.warning("%d of %d tree walk replicas passed the population cap", aborted, replicas)
    return TreeBrwReport(
        degree=degree,
        step_prob=step_prob,
        stay_prob=stay_prob,
        max_t=max_t,
        replicas=replicas,
        partial_means=tuple(float(x) for x in paths.mean(axis=0)),
        stderr=float(paths[:, -1].std(ddof=1) / math.sqrt(replicas)),
        aborted=aborted,
    )
