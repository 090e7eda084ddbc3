"""Deterministic numerics: Bessel kernels, Green's function integrals, growth profiles."""

from product_percolation.analytics.bessel import bessel_i0, bessel_i0e
from product_percolation.analytics.green import (
    QuadratureResult,
    RemcoBoundReport,
    SimulatedGreen,
    dhat,
    dhat2_integral,
    green0,
    green2,
    remco_bound,
    simulated_green0,
)
from product_percolation.analytics.growth import (
    CheegerPoint,
    GrowthProfile,
    cheeger_profile,
    volume_growth_profile,
)

__all__ = [
    "CheegerPoint",
    "GrowthProfile",
    "QuadratureResult",
    "RemcoBoundReport",
    "SimulatedGreen",
    "bessel_i0",
    "bessel_i0e",
    "cheeger_profile",
    "dhat",
    "dhat2_integral",
    "green0",
    "green2",
    "remco_bound",
    "simulated_green0",
    "volume_growth_profile",
]
