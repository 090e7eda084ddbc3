"""Product percolation - seeded experiments on percolation in products with the line."""

__version__ = "1.0.0"

from product_percolation.config import ExperimentConfig  # noqa: E402
from product_percolation.core import ExperimentRunner, replay_check  # noqa: E402
from product_percolation.graphs import GraphKind, GraphSpec  # noqa: E402

__all__ = [
    "ExperimentConfig",
    "ExperimentRunner",
    "GraphKind",
    "GraphSpec",
    "replay_check",
]
