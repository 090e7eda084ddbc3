"""Modified Bessel function I_0 and its exponentially scaled form.

Power series below SWITCHOVER, Hankel asymptotic expansion above it.
"""

import math
from functools import lru_cache

import numpy as np

SWITCHOVER = 15.0
SERIES_TERMS = 60
ASYMPTOTIC_TERMS = 28


@lru_cache(maxsize=None)
def asymptotic_coefficients(count: int) -> tuple[float, ...]:
    """a_k = ((2k-1)!!)^2 / (k! 8^k), so that e^{-x} I_0(x) ~ (2 pi x)^{-1/2} sum_k a_k x^{-k}."""
    coefficients = [1.0]
    for k in range(1, count):
        coefficients.append(coefficients[-1] * (2 * k - 1) ** 2 / (8.0 * k))
    return tuple(coefficients)


def _series_scaled(x: np.ndarray) -> np.ndarray:
    quarter = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, SERIES_TERMS):
        term = term * quarter / (k * k)
        total = total + term
    return total * np.exp(-x)


def _asymptotic_scaled(x: np.ndarray) -> np.ndarray:
    inv = 1.0 / x
    total = np.zeros_like(x)
    for a in reversed(asymptotic_coefficients(ASYMPTOTIC_TERMS)):
        total = total * inv + a
    return total / np.sqrt(2.0 * math.pi * x)


def bessel_i0e(x):
    """e^{-x} I_0(x) for x >= 0; accepts scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("bessel_i0e is defined here for x >= 0")
    result = np.empty_like(arr)
    low = arr < SWITCHOVER
    result[low] = _series_scaled(arr[low])
    result[~low] = _asymptotic_scaled(arr[~low])
    return float(result) if result.ndim == 0 else result


def bessel_i0(x):
    """I_0(x) for x >= 0 with relative error around 1e-13."""
    arr = np.asarray(x, dtype=float)
    scaled = np.asarray(bessel_i0e(arr))
    result = scaled * np.exp(arr)
    return float(result) if result.ndim == 0 else result


def bessel_i0_series(x: float) -> float:
    """Unscaled power series alone, used to check continuity at the switchover."""
    return float(_series_scaled(np.asarray([x], dtype=float))[0] * math.exp(x))


def bessel_i0_asymptotic(x: float) -> float:
    return float(_asymptotic_scaled(np.asarray([x], dtype=float))[0] * math.exp(x))
