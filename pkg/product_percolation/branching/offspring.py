"""Finite-support offspring laws, Galton-Watson survival and stochastic domination."""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from product_percolation.errors import ConfigError, NonConvergenceError
from product_percolation.percolation import rng

logger = logging.getLogger(__name__)

DEFAULT_POPULATION_CAP = 1_000_000


@dataclass(frozen=True)
class OffspringLaw:
    """Distribution on finitely many non-negative integers."""

    values: tuple[int, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.values)
        probabilities = tuple(float(q) for q in self.probabilities)
        if not values or len(values) != len(probabilities):
            raise ConfigError("An offspring law needs matching, non-empty values and probabilities")
        if any(v < 0 for v in values) or len(set(values)) != len(values):
            raise ConfigError(f"Offspring values must be distinct and non-negative, got {list(values)}")
        if any(q < 0 for q in probabilities) or abs(sum(probabilities) - 1.0) > 1e-9:
            raise ConfigError(f"Offspring probabilities must be non-negative and sum to 1, got {list(probabilities)}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probabilities", probabilities)

    @classmethod
    def point_mass(cls, k: int) -> "OffspringLaw":
        return cls((k,), (1.0,))

    @property
    def mean(self) -> float:
        return float(sum(v * q for v, q in zip(self.values, self.probabilities)))

    def sf(self, k: int) -> float:
        """P(X >= k)."""
        return float(sum(q for v, q in zip(self.values, self.probabilities) if v >= k))

    def pgf(self, s: float) -> float:
        return float(sum(q * s**v for v, q in zip(self.values, self.probabilities)))

    def sample(self, generator: np.random.Generator, size: int) -> np.ndarray:
        return generator.choice(np.array(self.values, dtype=np.int64), size=size, p=self.probabilities)

    def shifted(self, by: int) -> "OffspringLaw":
        return OffspringLaw(tuple(v + by for v in self.values), self.probabilities)

    def to_dict(self) -> dict:
        return {"values": list(self.values), "probabilities": list(self.probabilities), "mean": self.mean}


def _u_count(c: float) -> int:
    ratio = 4.0 / c
    nearest = round(ratio)
    if abs(ratio - nearest) < 1e-9:
        return int(nearest)
    return math.ceil(ratio)


@dataclass(frozen=True)
class OffspringLawU(OffspringLaw):
    """0 with probability 1 - c/2, ceil(4/c) with probability c/2; mean >= 2."""

    values: tuple[int, ...] = field(init=False, default=())
    probabilities: tuple[float, ...] = field(init=False, default=())
    c: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.c <= 1.0:
            raise ConfigError(f"c must lie in (0, 1], got {self.c}")
        object.__setattr__(self, "values", (0, _u_count(self.c)))
        object.__setattr__(self, "probabilities", (1.0 - self.c / 2.0, self.c / 2.0))
        super().__post_init__()

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["c"] = self.c
        return data


def extinction_probability(law: OffspringLaw, tol: float = 1e-14, max_iter: int = 1_000_000) -> float:
    """Smallest fixed point of the generating function, iterated from q = 0."""
    p_one = sum(q for v, q in zip(law.values, law.probabilities) if v == 1)
    if p_one >= 1.0:
        return 0.0
    if law.mean <= 1.0:
        return 1.0
    q = 0.0
    for _ in range(max_iter):
        nxt = law.pgf(q)
        if abs(nxt - q) < tol:
            return nxt
        q = nxt
    raise NonConvergenceError(f"Extinction fixed point did not converge within {max_iter} iterations")


@dataclass(frozen=True)
class SurvivalEstimate:
    estimate: float
    stderr: float
    replicas: int
    generations: int
    capped: int
    population_cap: int

    def to_dict(self) -> dict:
        return asdict(self)


def survival_probability(
    law: OffspringLaw,
    generations: int,
    replicas: int,
    seed: int,
    population_cap: int = DEFAULT_POPULATION_CAP,
) -> SurvivalEstimate:
    """Fraction of Galton-Watson replicas alive after `generations`.

    A replica whose population passes the cap is frozen and counted as
    surviving; its extinction probability from there is at most q**cap.
    """
    if generations < 1 or replicas < 2:
        raise ConfigError("survival_probability needs generations >= 1 and replicas >= 2")
    generator = rng.stream(seed, "galton-watson")
    values = np.array(law.values, dtype=np.int64)
    population = np.ones(replicas, dtype=np.int64)
    capped = np.zeros(replicas, dtype=bool)
    for generation in range(generations):
        active = (population > 0) & ~capped
        if not active.any():
            break
        counts = generator.multinomial(population[active], law.probabilities)
        population[active] = counts @ values
        capped |= population > population_cap
        logger.debug("Generation %d: %d alive, %d capped", generation + 1, int(np.count_nonzero(population)), int(capped.sum()))

    alive = (population > 0).astype(float)
    return SurvivalEstimate(
        estimate=float(alive.mean()),
        stderr=float(alive.std(ddof=1) / math.sqrt(replicas)),
        replicas=replicas,
        generations=generations,
        capped=int(capped.sum()),
        population_cap=population_cap,
    )


@dataclass(frozen=True)
class DominanceResult:
    dominates: bool
    margin: float
    epsilon: float
    samples: int
    confidence: float

    def to_dict(self) -> dict:
        return asdict(self)


def dominance_test(samples: Sequence[int], law: OffspringLaw, confidence: float = 0.99) -> DominanceResult:
    """One-sided check that the samples' law stochastically dominates `law`.

    Passes iff the empirical P(A >= k) stays above P(B >= k) - eps at every
    support point k of B, with eps = sqrt(ln(1/(1-confidence)) / (2m)).
    """
    data = np.asarray(samples, dtype=np.int64)
    if data.size == 0:
        raise ConfigError("dominance_test needs at least one sample")
    if not 0.0 < confidence < 1.0:
        raise ConfigError(f"confidence must lie in (0, 1), got {confidence}")
    m = data.size
    epsilon = math.sqrt(math.log(1.0 / (1.0 - confidence)) / (2.0 * m))
    gaps = [float(np.count_nonzero(data >= k)) / m - law.sf(k) for k in law.values]
    margin = min(gaps) + epsilon
    return DominanceResult(
        dominates=margin >= 0.0,
        margin=margin,
        epsilon=epsilon,
        samples=m,
        confidence=confidence,
    )
