"""Bernoulli bond percolation on finite truncations."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from product_percolation.errors import ConfigError
from product_percolation.graphs.truncation import FiniteTruncation
from product_percolation.percolation import rng

BOND_STREAM = "bonds"


def check_probability(p: float, name: str = "p") -> float:
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"{name} must lie in [0, 1], got {p}")
    return float(p)


@dataclass(frozen=True, eq=False)
class PercolationSample:
    """Open/closed state of every edge of a truncation.

    `open_edges[i]` refers to `truncation.edges[i]`. In threshold-coupling mode
    the per-edge uniforms are kept and `at(p)` re-thresholds them, so
    openEdges(p) ⊆ openEdges(p') for p <= p'.
    """

    truncation: FiniteTruncation
    p: float
    open_edges: np.ndarray
    seed: int
    replica_index: int
    uniforms: Optional[np.ndarray] = None

    @property
    def num_open(self) -> int:
        return int(np.count_nonzero(self.open_edges))

    @property
    def open_fraction(self) -> float:
        if self.open_edges.size == 0:
            return 0.0
        return self.num_open / self.open_edges.size

    def at(self, p: float) -> "PercolationSample":
        """Same randomness thresholded at another p (threshold-coupling mode only)."""
        if self.uniforms is None:
            raise ConfigError("Sample was drawn without threshold coupling; cannot re-threshold")
        p = check_probability(p)
        return PercolationSample(
            truncation=self.truncation,
            p=p,
            open_edges=self.uniforms < p,
            seed=self.seed,
            replica_index=self.replica_index,
            uniforms=self.uniforms,
        )


def edge_uniforms(truncation: FiniteTruncation, seed: int, replica_index: int, stream: str = BOND_STREAM) -> np.ndarray:
    return rng.uniforms(seed, truncation.num_edges, stream, replica_index)


def sample_bonds(
    truncation: FiniteTruncation,
    p: float,
    seed: int,
    replica_index: int,
    keep_uniforms: bool = False,
    stream: str = BOND_STREAM,
) -> PercolationSample:
    """Each edge open independently with probability p; edge i uses stream position i."""
    p = check_probability(p)
    u = edge_uniforms(truncation, seed, replica_index, stream)
    return PercolationSample(
        truncation=truncation,
        p=p,
        open_edges=u < p,
        seed=seed,
        replica_index=replica_index,
        uniforms=u if keep_uniforms else None,
    )
