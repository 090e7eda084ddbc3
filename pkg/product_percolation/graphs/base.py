"""Vertex identifiers and the graph family interface."""

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Union

from product_percolation.errors import InvalidVertexError
from product_percolation.graphs.spec import GraphSpec, level_sequence


@dataclass(frozen=True, slots=True)
class TreeNode:
    """Tree vertex addressed by its child-index word from the root."""

    word: tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.word)


@dataclass(frozen=True, slots=True)
class LatticePoint:
    """Point of the private ℤᵈ copy replacing the edge into tree node `owner`."""

    owner: tuple[int, ...]
    coords: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class StretchNode:
    """Interior vertex (position 1 or 2, counted from the parent) of a stretched edge."""

    owner: tuple[int, ...]
    position: int


@dataclass(frozen=True, slots=True)
class Plain:
    """Point of a plain lattice (also used for the vertices of an attached ray)."""

    coords: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class ProductVertex:
    """Vertex (base, z) of a product with ℤ."""

    base: "BaseVertex"
    z: int


BaseVertex = Union[TreeNode, LatticePoint, StretchNode, Plain]
VertexId = Union[TreeNode, LatticePoint, StretchNode, Plain, ProductVertex]


def lattice_sphere_sizes(d: int, r_max: int) -> list[int]:
    """Number of points of ℤᵈ at ℓ1 distance exactly j, for j = 0..r_max."""
    from math import comb

    sizes = [1]
    for j in range(1, r_max + 1):
        sizes.append(sum(2**i * comb(d, i) * comb(j - 1, i - 1) for i in range(1, min(d, j) + 1)))
    return sizes


def tree_sphere_sizes(degree: int, r_max: int) -> list[int]:
    sizes = [1]
    for j in range(1, r_max + 1):
        sizes.append(degree * (degree - 1) ** (j - 1))
    return sizes


class GraphFamily(ABC):
    """Adjacency oracle for one infinite graph construction."""

    def __init__(self, spec: GraphSpec) -> None:
        self.spec = spec

    @abstractmethod
    def origin(self) -> VertexId:
        """Canonical root vertex used as default centre."""
        pass

    @abstractmethod
    def validate(self, v: VertexId) -> None:
        """Raise InvalidVertexError unless `v` is a vertex of this graph."""
        pass

    @abstractmethod
    def adjacent(self, v: VertexId) -> list[VertexId]:
        """Adjacency list of a vertex already known to be valid."""
        pass

    @abstractmethod
    def sphere_sizes(self, r_max: int) -> list[int]:
        """Exact number of vertices at distance j from `origin()`, j = 0..r_max."""
        pass

    def neighbors(self, v: VertexId) -> list[VertexId]:
        self.validate(v)
        return self.adjacent(v)

    def _invalid(self, v: object, reason: str) -> InvalidVertexError:
        return InvalidVertexError(f"{v!r} is not a vertex of {self.spec.describe()}: {reason}")


class TreeFamily(GraphFamily):
    """Shared word handling for families built on a rooted regular tree."""

    def __init__(self, spec: GraphSpec) -> None:
        super().__init__(spec)
        self.tree_degree = spec.tree_degree

    def child_count(self, word: tuple[int, ...]) -> int:
        return self.tree_degree if not word else self.tree_degree - 1

    def validate_word(self, v: object, word: object) -> None:
        if not isinstance(word, tuple) or not all(isinstance(i, int) for i in word):
            raise self._invalid(v, "tree word must be a tuple of integers")
        for position, index in enumerate(word):
            limit = self.tree_degree if position == 0 else self.tree_degree - 1
            if not 0 <= index < limit:
                raise self._invalid(v, f"child index {index} out of range at depth {position}")


class LevelTable:
    """Lazily extended table of insertion levels l_1 < l_2 < ...

    Shared between threads; extension happens under a lock.
    """

    def __init__(self, d: int, n0: int, log_base: float) -> None:
        self.d = d
        self.n0 = n0
        self.log_base = log_base
        self._levels: list[int] = level_sequence(d, 1, log_base)
        self._index: dict[int, int] = {1: 1}
        self._lock = threading.Lock()

    def _extend_to(self, level: int) -> None:
        with self._lock:
            while self._levels[-1] < level:
                count = 2 * len(self._levels)
                self._levels = level_sequence(self.d, count, self.log_base)
                self._index = {value: n for n, value in enumerate(self._levels, start=1)}

    def levels(self, n_max: int) -> list[int]:
        while len(self._levels) < n_max:
            self._extend_to(self._levels[-1] + 1)
        return self._levels[:n_max]

    def insertion(self, level: int) -> int:
        """Return n if `level` equals l_n with n >= n0, otherwise 0."""
        if level < 1:
            return 0
        if self._levels[-1] < level:
            self._extend_to(level)
        n = self._index.get(level, 0)
        return n if n >= self.n0 else 0
