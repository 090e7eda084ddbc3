"""Trifurcation points: vertices whose removal splits their cluster into >= 3 boundary-reaching pieces."""

from collections import deque
from typing import Iterable, Optional

import numpy as np

from product_percolation.graphs.base import VertexId
from product_percolation.percolation.union_find import ClusterLabeling


def open_neighbors(label: ClusterLabeling, open_mask: np.ndarray) -> list[list[int]]:
    incidence = label.truncation.incidence
    return [[j for j, k in incidence[i] if open_mask[k]] for i in range(label.truncation.num_vertices)]


def boundary_pieces(
    adjacency: list[list[int]], boundary: np.ndarray, removed: int
) -> int:
    """Number of components of (open graph minus `removed`) that touch `removed` and reach the boundary."""
    seen = {removed}
    pieces = 0
    for start in adjacency[removed]:
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        reaches = False
        while queue:
            i = queue.popleft()
            if boundary[i]:
                reaches = True
            for j in adjacency[i]:
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        if reaches:
            pieces += 1
    return pieces


def trifurcation_count(
    label: ClusterLabeling,
    window: Optional[Iterable[VertexId]] = None,
    open_mask: Optional[np.ndarray] = None,
) -> int:
    """Count trifurcation points among `window` (default: every vertex).

    Boundary vertices are the truncation's boundary markers; the removed
    vertex itself never counts as reaching the boundary.
    """
    if open_mask is None:
        open_mask = label.sample.open_edges  # type: ignore[union-attr]
    trunc = label.truncation
    adjacency = open_neighbors(label, open_mask)
    boundary = trunc.boundary_mask
    candidates = range(trunc.num_vertices) if window is None else [trunc.index_of(v) for v in window]

    count = 0
    for i in candidates:
        if len(adjacency[i]) < 3:
            continue
        if boundary_pieces(adjacency, boundary, i) >= 3:
            count += 1
    return count
