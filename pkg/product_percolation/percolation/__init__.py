"""Bond percolation sampling, cluster labeling and estimators."""

from product_percolation.percolation.estimators import (
    CrossingBox,
    CrossingSamples,
    Estimate,
    PcEstimate,
    bernoulli_estimate,
    crossing_probability,
    crossing_sweep,
    crossing_thresholds,
    estimate_pc,
    mean_estimate,
    percolation_probability,
    two_point_estimate,
)
from product_percolation.percolation.sampling import PercolationSample, sample_bonds
from product_percolation.percolation.union_find import ClusterLabeling, UnionFind, clusters, connected

__all__ = [
    "ClusterLabeling",
    "CrossingBox",
    "CrossingSamples",
    "Estimate",
    "PcEstimate",
    "PercolationSample",
    "UnionFind",
    "bernoulli_estimate",
    "clusters",
    "connected",
    "crossing_probability",
    "crossing_sweep",
    "crossing_thresholds",
    "estimate_pc",
    "mean_estimate",
    "percolation_probability",
    "sample_bonds",
    "two_point_estimate",
]
