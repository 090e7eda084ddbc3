"""Union-find cluster decomposition of percolation samples."""

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from product_percolation.graphs.base import VertexId
from product_percolation.graphs.truncation import FiniteTruncation


class UnionFind:
    """Disjoint sets over 0..n-1 with union by rank and path compression."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n
        self.size = [1] * n
        self.n_clusters = n

    def __repr__(self) -> str:
        return f"UnionFind: contains {self.n_clusters} clusters."

    def find(self, s: int) -> int:
        parent = self.parent
        root = s
        while parent[root] != root:
            root = parent[root]
        while parent[s] != root:
            parent[s], s = root, parent[s]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets holding a and b; returns False if they were already joined."""
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.n_clusters -= 1
        return True

    def union_pairs(self, pairs: Iterable[tuple[int, int]]) -> None:
        for a, b in pairs:
            self.union(a, b)


@dataclass(eq=False)
class ClusterLabeling:
    """Partition of a truncation into open clusters."""

    truncation: FiniteTruncation
    uf: UnionFind
    sample: Optional[object] = None
    _roots: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_edge_mask(
        cls, truncation: FiniteTruncation, open_mask: np.ndarray, sample: Optional[object] = None
    ) -> "ClusterLabeling":
        uf = UnionFind(truncation.num_vertices)
        if truncation.num_edges:
            uf.union_pairs(truncation.edges[open_mask].tolist())
        return cls(truncation=truncation, uf=uf, sample=sample)

    @property
    def parent(self) -> list[int]:
        return self.uf.parent

    @property
    def rank(self) -> list[int]:
        return self.uf.rank

    @property
    def num_clusters(self) -> int:
        return self.uf.n_clusters

    @property
    def roots(self) -> np.ndarray:
        """Root index of every vertex, fully compressed."""
        if self._roots is None:
            self._roots = np.fromiter(
                (self.uf.find(i) for i in range(self.truncation.num_vertices)),
                dtype=np.int64,
                count=self.truncation.num_vertices,
            )
        return self._roots

    @property
    def cluster_sizes(self) -> dict[int, int]:
        roots, counts = np.unique(self.roots, return_counts=True)
        return {int(r): int(c) for r, c in zip(roots, counts)}

    def find(self, i: int) -> int:
        return self.uf.find(i)

    def root_of(self, v: VertexId) -> int:
        return self.uf.find(self.truncation.index_of(v))

    def cluster_of(self, v: VertexId) -> list[VertexId]:
        root = self.root_of(v)
        return [self.truncation.vertices[i] for i in np.flatnonzero(self.roots == root)]

    def connected(self, x: VertexId, y: VertexId) -> bool:
        return self.root_of(x) == self.root_of(y)

    def roots_touching(self, vertex_mask: np.ndarray) -> set[int]:
        return set(np.unique(self.roots[vertex_mask]).tolist())


def clusters(sample) -> ClusterLabeling:
    """Union-find labeling of a PercolationSample's open subgraph."""
    return ClusterLabeling.from_edge_mask(sample.truncation, sample.open_edges, sample=sample)


def connected(label: ClusterLabeling, x: VertexId, y: VertexId) -> bool:
    """True iff x and y share an open cluster; unknown vertices raise WindowError."""
    return label.connected(x, y)
