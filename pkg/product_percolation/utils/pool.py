"""Replica worker pool with order-preserving results."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

from product_percolation.errors import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "PRODUCT_PERCOLATION_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def default_threads() -> int:
    """Thread count from the environment, falling back to 1."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from e
    if threads < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return threads


class ReplicaPool:
    """Maps a function over replicas, returning results in submission order.

    Each replica draws from its own keyed stream, so results do not depend on
    the number of threads.
    """

    def __init__(self, threads: Optional[int] = None) -> None:
        self.threads = threads if threads is not None else default_threads()
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        if self.threads == 1:
            return [fn(item) for item in items]
        logger.debug("Running replicas on %d threads", self.threads)
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(fn, items))


SERIAL = ReplicaPool(1)
