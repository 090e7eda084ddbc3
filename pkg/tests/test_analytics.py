"""Bessel kernel, Green's function integrals and the Cauchy-Schwarz bound."""

import itertools
import math

import numpy as np
import pytest
from scipy import special

from product_percolation.analytics import (
    bessel_i0,
    bessel_i0e,
    dhat,
    dhat2_integral,
    green0,
    green2,
    remco_bound,
    simulated_green0,
)
from product_percolation.analytics.bessel import SWITCHOVER, bessel_i0_asymptotic, bessel_i0_series
from product_percolation.errors import ConfigError, DivergentIntegralError

# Watson's value for the simple cubic lattice.
GREEN0_D3 = 1.516386059151978


class TestBessel:
    def test_known_values(self):
        assert bessel_i0(0.0) == 1.0
        assert bessel_i0(1.0) == pytest.approx(1.2660658777520082, rel=1e-13)

    def test_branches_agree_at_switchover(self):
        assert bessel_i0_series(SWITCHOVER) == pytest.approx(bessel_i0_asymptotic(SWITCHOVER), rel=1e-10)

    def test_matches_scipy(self):
        grid = np.concatenate([np.linspace(0.0, 30.0, 301), np.geomspace(30.0, 600.0, 50)])
        assert np.allclose(bessel_i0e(grid), special.i0e(grid), rtol=1e-11, atol=0.0)
        small = grid[grid < 300]
        assert np.allclose(bessel_i0(small), special.i0(small), rtol=1e-11, atol=0.0)

    def test_scalar_in_scalar_out(self):
        assert isinstance(bessel_i0e(2.5), float)

    def test_negative_argument(self):
        with pytest.raises(ValueError):
            bessel_i0e(-1.0)


class TestSymbol:
    def test_dhat(self):
        assert dhat([0.0, 0.0, 0.0]) == 1.0
        assert dhat([math.pi, 0.0]) == pytest.approx(0.0, abs=1e-15)
        with pytest.raises(ConfigError):
            dhat([])

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_two_step_integral_on_grid(self, d):
        points = 2 * math.pi * np.arange(16) / 16
        values = [dhat(np.array(k)) ** 2 for k in itertools.product(points, repeat=d)]
        assert float(np.mean(values)) == pytest.approx(dhat2_integral(d), abs=1e-8)
        assert dhat2_integral(5) == 0.1


class TestGreen:
    def test_cubic_lattice(self):
        result = green0(3)
        assert result.value == pytest.approx(GREEN0_D3, abs=1e-4)

    @pytest.mark.parametrize("d", [1, 2])
    def test_green0_diverges(self, d):
        with pytest.raises(DivergentIntegralError):
            green0(d)

    @pytest.mark.parametrize("d", [3, 4])
    def test_green2_diverges(self, d):
        with pytest.raises(DivergentIntegralError):
            green2(d)

    def test_ten_dimensions(self):
        assert 1.05 < green0(10).value < 1.07

    @pytest.mark.parametrize("d", [8, 12, 16, 24])
    def test_expansion_remainder(self, d):
        remainder = green0(d).value - 1.0 - 1.0 / (2 * d)
        assert 0.0 < remainder < 2.0 / d**2

    @pytest.mark.parametrize("d", [10, 14, 18, 24])
    def test_first_order_term(self, d):
        assert 0.5 <= d * (green0(d).value - 1.0) <= 0.62

    def test_green2_exceeds_one(self):
        assert green2(6).value > 1.0

    def test_monte_carlo_agrees(self):
        estimate = simulated_green0(3, 4000, 2000, seed=21)
        assert estimate.tail_correction > 0
        assert abs(estimate.value - GREEN0_D3) <= 4 * estimate.stderr + 0.02

    def test_monte_carlo_validation(self):
        with pytest.raises(ConfigError):
            simulated_green0(3, 1, 10, seed=1)


class TestRemcoBound:
    def test_six_dimensions(self):
        report = remco_bound(6)
        assert report.cs_holds
        assert report.dhat2 == pytest.approx(0.1)
        assert report.final_bound > report.cs_bound
        assert report.to_dict()["cs_holds"] is True

    def test_needs_six_dimensions(self):
        with pytest.raises(DivergentIntegralError):
            remco_bound(5)

    @pytest.mark.slow
    def test_dimension_sweep(self):
        reports = [remco_bound(d) for d in range(6, 25)]
        assert all(r.cs_holds for r in reports)
        finals = [r.final_bound for r in reports]
        assert all(b < a for a, b in zip(finals, finals[1:]))
        assert max(r.sqrt_d_times_bound for r in reports) <= reports[0].sqrt_d_times_bound
