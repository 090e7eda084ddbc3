"""Finite-window statistics of open clusters: counts, trifurcations, escape events, cutsets."""

from product_percolation.clusters.annulus import AnnulusReport, annulus_escape_events
from product_percolation.clusters.cutsets import (
    CutsetCertificate,
    CutsetSearch,
    CutsetVerdict,
    FordFulkerson,
    find_bounded_cutset,
    min_cut_in_window,
    verify_cutset,
)
from product_percolation.clusters.trichotomy import (
    TrichotomyReport,
    boundary_cluster_count,
    boundary_cluster_profile,
)
from product_percolation.clusters.trifurcation import trifurcation_count

__all__ = [
    "AnnulusReport",
    "CutsetCertificate",
    "CutsetSearch",
    "CutsetVerdict",
    "FordFulkerson",
    "TrichotomyReport",
    "annulus_escape_events",
    "boundary_cluster_count",
    "boundary_cluster_profile",
    "find_bounded_cutset",
    "min_cut_in_window",
    "trifurcation_count",
    "verify_cutset",
]
