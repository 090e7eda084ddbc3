"""Branching processes dominating percolation clusters, and their return statistics."""

from product_percolation.branching.brw import (
    BrwTrajectory,
    ParticleFront,
    brw_step,
    coupled_visited_set,
    is_copy_interior,
    simulate_brw,
)
from product_percolation.branching.offspring import (
    DominanceResult,
    OffspringLaw,
    OffspringLawU,
    SurvivalEstimate,
    dominance_test,
    extinction_probability,
    survival_probability,
)
from product_percolation.branching.slab import OffspringSample, build_slab, offspring_simulation
from product_percolation.branching.transience import (
    TransienceSeries,
    TreeBrwReport,
    expected_returns_series,
    simulate_tree_brw,
    spectral_radius_bound,
    tree_brw_expected_returns,
)

__all__ = [
    "BrwTrajectory",
    "DominanceResult",
    "OffspringLaw",
    "OffspringLawU",
    "OffspringSample",
    "ParticleFront",
    "SurvivalEstimate",
    "TransienceSeries",
    "TreeBrwReport",
    "brw_step",
    "build_slab",
    "coupled_visited_set",
    "dominance_test",
    "expected_returns_series",
    "extinction_probability",
    "is_copy_interior",
    "offspring_simulation",
    "simulate_brw",
    "simulate_tree_brw",
    "spectral_radius_bound",
    "survival_probability",
    "tree_brw_expected_returns",
]
