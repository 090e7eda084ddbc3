"""Utility functions."""

from product_percolation.utils.file_utils import (
    ensure_directory_exists,
    resolve_output_path,
    write_text_file,
)
from product_percolation.utils.pool import ReplicaPool, default_threads

__all__ = [
    "ReplicaPool",
    "default_threads",
    "ensure_directory_exists",
    "resolve_output_path",
    "write_text_file",
]
