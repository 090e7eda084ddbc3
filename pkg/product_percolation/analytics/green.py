"""Lattice Green's function integrals through their Bessel representation.

With D(k) = (1/d) sum_i cos k_i,

    (2 pi)^-d ∫ dk / (1 - D(k))     = ∫_0^∞ [e^{-t/d} I_0(t/d)]^d dt
    (2 pi)^-d ∫ dk / (1 - D(k))^2   = ∫_0^∞ t [e^{-t/d} I_0(t/d)]^d dt

The finite part is integrated by composite Gauss-Legendre on geometric
panels; the part beyond t_cut comes from the asymptotic expansion of the
scaled Bessel function raised to the d-th power, integrated term by term.
"""

import logging
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre, polynomial

from product_percolation.analytics.bessel import asymptotic_coefficients, bessel_i0e
from product_percolation.errors import ConfigError, DivergentIntegralError, NonConvergenceError
from product_percolation.percolation import rng

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 32
TAIL_TERMS = 24
TAIL_REL_TOL = 1e-12
EPS_FLOOR = 1e-14


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error: float
    t_cut: float
    panels: int

    def to_dict(self) -> dict:
        return asdict(self)


def dhat(k) -> float:
    """D(k) = (1/d) sum_i cos k_i."""
    arr = np.asarray(k, dtype=float)
    if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ConfigError("dhat needs a non-empty vector of finite reals")
    return float(np.mean(np.cos(arr)))


def dhat2_integral(d: int) -> float:
    """(2 pi)^-d ∫ D(k)^2 dk = 1/(2d): the two-step return probability."""
    if d < 1:
        raise ConfigError(f"d must be >= 1, got {d}")
    return 1.0 / (2 * d)


@lru_cache(maxsize=None)
def _power_series(d: int, terms: int) -> tuple[float, ...]:
    """Coefficients b_j of (sum_k a_k y^k)^d, truncated to `terms`."""
    base = np.array(asymptotic_coefficients(terms))
    result = np.array([1.0])
    for _ in range(d):
        result = polynomial.polymul(result, base)[:terms]
    return tuple(float(b) for b in result)


def _tail(d: int, weight_power: int, t_cut: float) -> tuple[float, float]:
    """∫_{t_cut}^∞ t^w [i0e(t/d)]^d dt from the asymptotic series; returns (value, first omitted term)."""
    prefactor = (d / (2.0 * math.pi)) ** (d / 2.0)
    coefficients = _power_series(d, TAIL_TERMS)
    total = 0.0
    previous = math.inf
    for j, b in enumerate(coefficients):
        exponent = d / 2.0 + j - 1.0 - weight_power
        term = prefactor * b * d**j * t_cut ** (-exponent) / exponent
        if abs(term) > previous:
            return total, abs(term)
        if j == len(coefficients) - 1:
            return total, abs(term)
        total += term
        previous = abs(term)
    return total, previous


def _breakpoints(t_cut: float, panels_per_octave: int) -> np.ndarray:
    points = [0.0, 1.0]
    step = 2.0 ** (1.0 / panels_per_octave)
    while points[-1] * step < t_cut:
        points.append(points[-1] * step)
    points.append(t_cut)
    return np.array(points)


def _composite(f, breakpoints: np.ndarray, order: int) -> float:
    nodes, weights = legendre.leggauss(order)
    a = breakpoints[:-1, None]
    b = breakpoints[1:, None]
    t = 0.5 * (b - a) * nodes[None, :] + 0.5 * (b + a)
    values = f(t)
    return float(np.sum(0.5 * (b - a) * weights[None, :] * values))


def _bessel_integral(
    d: int,
    weight_power: int,
    order: int,
    panels_per_octave: int,
    rel_tol: float,
    t_cut: float = 0.0,
) -> QuadratureResult:
    if order < 2 or panels_per_octave < 1:
        raise ConfigError("order must be >= 2 and panels_per_octave >= 1")

    def integrand(t: np.ndarray) -> np.ndarray:
        return t**weight_power * np.asarray(bessel_i0e(t / d)) ** d

    t_cut = t_cut or 50.0 * d
    for _ in range(40):
        tail, tail_error = _tail(d, weight_power, t_cut)
        breakpoints = _breakpoints(t_cut, panels_per_octave)
        coarse = _composite(integrand, breakpoints, order)
        fine = _composite(integrand, breakpoints, 2 * order)
        value = fine + tail
        if tail_error <= rel_tol * abs(value):
            error = abs(fine - coarse) + tail_error + EPS_FLOOR * max(1.0, abs(value))
            logger.debug(
                "Bessel integral d=%d w=%d: %.15g ± %.2g (t_cut=%g, %d panels)",
                d, weight_power, value, error, t_cut, len(breakpoints) - 1,
            )
            return QuadratureResult(value, error, float(t_cut), len(breakpoints) - 1)
        t_cut *= 2.0
    raise NonConvergenceError(f"Tail of the d={d} Bessel integral did not converge")


def green0(
    d: int, order: int = DEFAULT_ORDER, panels_per_octave: int = 1, rel_tol: float = TAIL_REL_TOL
) -> QuadratureResult:
    """(2 pi)^-d ∫ dk / (1 - D(k)), the expected number of visits of simple random walk to its start."""
    if d <= 2:
        raise DivergentIntegralError(f"The lattice Green's function diverges for d={d} <= 2")
    return _bessel_integral(d, 0, order, panels_per_octave, rel_tol)


def green2(
    d: int, order: int = DEFAULT_ORDER, panels_per_octave: int = 1, rel_tol: float = TAIL_REL_TOL
) -> QuadratureResult:
    """(2 pi)^-d ∫ dk / (1 - D(k))^2."""
    if d <= 4:
        raise DivergentIntegralError(f"The squared Green's integral diverges for d={d} <= 4")
    return _bessel_integral(d, 1, order, panels_per_octave, rel_tol)


@dataclass(frozen=True)
class RemcoBoundReport:
    """Every link of the bound on ∫ D/(1-D), computed in dimension d - 1."""

    d: int
    g0: float
    dhat2: float
    g2: float
    cs_bound: float
    final_bound: float
    o_beta_constant: float
    g0_error: float
    g2_error: float

    @property
    def direct_value(self) -> float:
        """∫ D/(1-D) = g0 - 1, computed directly."""
        return self.g0 - 1.0

    @property
    def cs_holds(self) -> bool:
        tolerance = self.g0_error + 0.5 * self.cs_bound * self.g2_error / self.g2
        return self.cs_bound >= self.direct_value - tolerance

    @property
    def sqrt_d_times_bound(self) -> float:
        return math.sqrt(self.d) * self.final_bound

    def to_dict(self) -> dict:
        data = asdict(self)
        data["direct_value"] = self.direct_value
        data["cs_holds"] = self.cs_holds
        data["sqrt_d_times_bound"] = self.sqrt_d_times_bound
        return data


def remco_bound(d: int, o_beta_constant: float = 1.0) -> RemcoBoundReport:
    """Cauchy-Schwarz bound on ∫ D/(1-D) in dimension d - 1 and the assembled final bound.

    final = ((d + C)/(d - 1)) * sqrt(dhat2 * g2) + (C + 1)/(d - 1), where C stands
    for the 1 + O(beta) factor.
    """
    if d < 6:
        raise DivergentIntegralError(f"remco_bound needs d >= 6 so that green2(d-1) exists, got {d}")
    m = d - 1
    g0 = green0(m)
    g2 = green2(m)
    d2 = dhat2_integral(m)
    cs_bound = math.sqrt(d2) * math.sqrt(g2.value)
    final = (d + o_beta_constant) / (d - 1) * cs_bound + (o_beta_constant + 1.0) / (d - 1)
    return RemcoBoundReport(
        d=d,
        g0=g0.value,
        dhat2=d2,
        g2=g2.value,
        cs_bound=cs_bound,
        final_bound=final,
        o_beta_constant=o_beta_constant,
        g0_error=g0.abs_error,
        g2_error=g2.abs_error,
    )


@dataclass(frozen=True)
class SimulatedGreen:
    value: float
    stderr: float
    walks: int
    steps: int
    tail_correction: float

    def to_dict(self) -> dict:
        return asdict(self)


def simulated_green0(d: int, walks: int, steps: int, seed: int) -> SimulatedGreen:
    """Monte Carlo expected visits to the origin of simple random walk on ℤᵈ.

    Visits after `steps` are added back with the local limit estimate
    sum_{n > N, n even} 2 (d / (2 pi n))^{d/2}.
    """
    if d < 1 or walks < 2 or steps < 1:
        raise ConfigError("simulated_green0 needs d >= 1, walks >= 2, steps >= 1")
    generator = rng.stream(seed, "srw", d)
    positions = np.zeros((walks, d), dtype=np.int64)
    returns = np.zeros(walks, dtype=np.int64)
    rows = np.arange(walks)
    for _ in range(steps):
        moves = generator.integers(0, 2 * d, size=walks)
        positions[rows, moves // 2] += 2 * (moves % 2) - 1
        returns += ~positions.any(axis=1)

    correction = 0.0
    if d > 2:
        correction = (d / (2.0 * math.pi)) ** (d / 2.0) * steps ** (1.0 - d / 2.0) / (d / 2.0 - 1.0)
    visits = 1.0 + returns
    return SimulatedGreen(
        value=float(visits.mean()) + correction,
        stderr=float(visits.std(ddof=1) / math.sqrt(walks)),
        walks=walks,
        steps=steps,
        tail_correction=correction,
    )
