"""Lazy adjacency for every graph family, and products with the line."""

import functools
from typing import Sequence

from product_percolation.errors import InvalidVertexError
from product_percolation.graphs.base import (
    GraphFamily,
    LatticePoint,
    LevelTable,
    Plain,
    ProductVertex,
    StretchNode,
    TreeFamily,
    TreeNode,
    VertexId,
    lattice_sphere_sizes,
    tree_sphere_sizes,
)
from product_percolation.graphs.spec import GraphKind, GraphSpec


def _is_int_tuple(value: object, length: int) -> bool:
    return (
        isinstance(value, tuple)
        and len(value) == length
        and all(isinstance(c, int) and not isinstance(c, bool) for c in value)
    )


def lattice_steps(coords: Sequence[int]) -> list[tuple[int, ...]]:
    """Nearest neighbours of a ℤᵈ point, ordered -e_1, +e_1, -e_2, ..."""
    result = []
    for i, c in enumerate(coords):
        for delta in (-1, 1):
            moved = list(coords)
            moved[i] = c + delta
            result.append(tuple(moved))
    return result


class RegularTreeFamily(TreeFamily):
    def origin(self) -> VertexId:
        return TreeNode(())

    def validate(self, v: VertexId) -> None:
        if not isinstance(v, TreeNode):
            raise self._invalid(v, "expected a tree vertex")
        self.validate_word(v, v.word)

    def adjacent(self, v: VertexId) -> list[VertexId]:
        word = v.word  # type: ignore[union-attr]
        result: list[VertexId] = []
        if word:
            result.append(TreeNode(word[:-1]))
        result.extend(TreeNode(word + (i,)) for i in range(self.child_count(word)))
        return result

    def sphere_sizes(self, r_max: int) -> list[int]:
        return tree_sphere_sizes(self.tree_degree, r_max)


class LatticeFamily(GraphFamily):
    def __init__(self, spec: GraphSpec) -> None:
        super().__init__(spec)
        self.d = spec.d

    def origin(self) -> VertexId:
        return Plain((0,) * self.d)

    def validate(self, v: VertexId) -> None:
        if not isinstance(v, Plain) or not _is_int_tuple(v.coords, self.d):
            raise self._invalid(v, f"expected a Plain point with {self.d} integer coordinates")

    def adjacent(self, v: VertexId) -> list[VertexId]:
        return [Plain(c) for c in lattice_steps(v.coords)]  # type: ignore[union-attr]

    def sphere_sizes(self, r_max: int) -> list[int]:
        return lattice_sphere_sizes(self.d, r_max)


class _InsertionFamily(TreeFamily):
    """Common level bookkeeping for the two insertion constructions."""

    def __init__(self, spec: GraphSpec) -> None:
        super().__init__(spec)
        self.d = spec.d
        self.levels = LevelTable(spec.d, spec.n0, spec.log_base)

    def origin(self) -> VertexId:
        return TreeNode(())

    def _extra_length(self, n: int) -> int:
        """Number of extra edges a replaced tree edge at insertion n contributes."""
        raise NotImplementedError

    def tree_level_distances(self, r_max: int) -> list[int]:
        """Distance from the root to tree level k, for every level whose parent lies within r_max."""
        distances = [0]
        while distances[-1] <= r_max:
            k = len(distances)
            n = self.levels.insertion(k)
            distances.append(distances[-1] + (1 + self._extra_length(n) if n else 1))
        return distances


class TreeWithInsertionsFamily(_InsertionFamily):
    """Tree of degree 4d whose edges into level l_n (n >= n0) are replaced by ℤᵈ copies.

    The copy replacing the edge (x, y), y at level l_n, is addressed by y's word.
    Its origin is glued to x and the corner (n, ..., n) to y.
    """

    def _extra_length(self, n: int) -> int:
        return self.d * n + 1

    def validate(self, v: VertexId) -> None:
        if isinstance(v, TreeNode):
            self.validate_word(v, v.word)
            return
        if isinstance(v, LatticePoint):
            self.validate_word(v, v.owner)
            if not v.owner or not self.levels.insertion(len(v.owner)):
                raise self._invalid(v, "owner word does not end at an insertion level")
            if not _is_int_tuple(v.coords, self.d):
                raise self._invalid(v, f"expected {self.d} integer coordinates")
            return
        raise self._invalid(v, "expected a tree vertex or a lattice point")

    def adjacent(self, v: VertexId) -> list[VertexId]:
        if isinstance(v, TreeNode):
            word = v.word
            result: list[VertexId] = []
            if word:
                n = self.levels.insertion(len(word))
                if n:
                    result.append(LatticePoint(word, (n,) * self.d))
                else:
                    result.append(TreeNode(word[:-1]))
            count = self.child_count(word)
            if self.levels.insertion(len(word) + 1):
                zero = (0,) * self.d
                result.extend(LatticePoint(word + (i,), zero) for i in range(count))
            else:
                result.extend(TreeNode(word + (i,)) for i in range(count))
            return result

        point: LatticePoint = v  # type: ignore[assignment]
        result = [LatticePoint(point.owner, c) for c in lattice_steps(point.coords)]
        if not any(point.coords):
            result.append(TreeNode(point.owner[:-1]))
        n = self.levels.insertion(len(point.owner))
        if all(c == n for c in point.coords):
            result.append(TreeNode(point.owner))
        return result

    def sphere_sizes(self, r_max: int) -> list[int]:
        sizes = [0] * (r_max + 1)
        copy_sizes = lattice_sphere_sizes(self.d, r_max)
        distances = self.tree_level_distances(r_max)
        population = 1
        for k, dist in enumerate(distances):
            if k > 0:
                population = self.tree_degree * (self.tree_degree - 1) ** (k - 1)
            if dist <= r_max:
                sizes[dist] += population
            if k > 0 and self.levels.insertion(k):
                # Copy points are reached through the parent's glued origin.
                start = distances[k - 1] + 1
                for j in range(0, r_max - start + 1):
                    sizes[start + j] += population * copy_sizes[j]
        return sizes


class StretchedTreeFamily(_InsertionFamily):
    """Tree of degree 4d whose edges into level l_n (n >= n0) become paths of three edges."""

    def _extra_length(self, n: int) -> int:
        return 2

    def validate(self, v: VertexId) -> None:
        if isinstance(v, TreeNode):
            self.validate_word(v, v.word)
            return
        if isinstance(v, StretchNode):
            self.validate_word(v, v.owner)
            if not v.owner or not self.levels.insertion(len(v.owner)):
                raise self._invalid(v, "owner word does not end at an insertion level")
            if v.position not in (1, 2):
                raise self._invalid(v, "position must be 1 or 2")
            return
        raise self._invalid(v, "expected a tree vertex or a stretch vertex")

    def adjacent(self, v: VertexId) -> list[VertexId]:
        if isinstance(v, TreeNode):
            word = v.word
            result: list[VertexId] = []
            if word:
                if self.levels.insertion(len(word)):
                    result.append(StretchNode(word, 2))
                else:
                    result.append(TreeNode(word[:-1]))
            count = self.child_count(word)
            if self.levels.insertion(len(word) + 1):
                result.extend(StretchNode(word + (i,), 1) for i in range(count))
            else:
                result.extend(TreeNode(word + (i,)) for i in range(count))
            return result

        node: StretchNode = v  # type: ignore[assignment]
        if node.position == 1:
            return [TreeNode(node.owner[:-1]), StretchNode(node.owner, 2)]
        return [StretchNode(node.owner, 1), TreeNode(node.owner)]

    def sphere_sizes(self, r_max: int) -> list[int]:
        sizes = [0] * (r_max + 1)
        distances = self.tree_level_distances(r_max)
        population = 1
        for k, dist in enumerate(distances):
            if k > 0:
                population = self.tree_degree * (self.tree_degree - 1) ** (k - 1)
            if dist <= r_max:
                sizes[dist] += population
            if k > 0 and self.levels.insertion(k):
                for offset in (1, 2):
                    if distances[k - 1] + offset <= r_max:
                        sizes[distances[k - 1] + offset] += population
        return sizes


class TreePlusRayFamily(TreeFamily):
    """Regular tree with a one-sided ray Plain((1,)), Plain((2,)), ... attached at the root."""

    def origin(self) -> VertexId:
        return TreeNode(())

    def validate(self, v: VertexId) -> None:
        if isinstance(v, TreeNode):
            self.validate_word(v, v.word)
            return
        if isinstance(v, Plain) and _is_int_tuple(v.coords, 1) and v.coords[0] >= 1:
            return
        raise self._invalid(v, "expected a tree vertex or a ray vertex Plain((k,)), k >= 1")

    def adjacent(self, v: VertexId) -> list[VertexId]:
        if isinstance(v, TreeNode):
            word = v.word
            result: list[VertexId] = []
            if word:
                result.append(TreeNode(word[:-1]))
            result.extend(TreeNode(word + (i,)) for i in range(self.child_count(word)))
            if not word:
                result.append(Plain((1,)))
            return result
        k = v.coords[0]  # type: ignore[union-attr]
        previous: VertexId = TreeNode(()) if k == 1 else Plain((k - 1,))
        return [previous, Plain((k + 1,))]

    def sphere_sizes(self, r_max: int) -> list[int]:
        sizes = tree_sphere_sizes(self.tree_degree, r_max)
        return [s + (1 if j > 0 else 0) for j, s in enumerate(sizes)]


class LatticeJoinTreeFamily(TreeFamily):
    """ℤᵈ and a regular tree joined by one edge between their roots."""

    def __init__(self, spec: GraphSpec) -> None:
        super().__init__(spec)
        self.d = spec.d

    def origin(self) -> VertexId:
        return TreeNode(())

    def validate(self, v: VertexId) -> None:
        if isinstance(v, TreeNode):
            self.validate_word(v, v.word)
            return
        if isinstance(v, Plain) and _is_int_tuple(v.coords, self.d):
            return
        raise self._invalid(v, f"expected a tree vertex or a Plain point with {self.d} coordinates")

    def adjacent(self, v: VertexId) -> list[VertexId]:
        if isinstance(v, TreeNode):
            word = v.word
            result: list[VertexId] = []
            if word:
                result.append(TreeNode(word[:-1]))
            result.extend(TreeNode(word + (i,)) for i in range(self.child_count(word)))
            if not word:
                result.append(Plain((0,) * self.d))
            return result
        coords = v.coords  # type: ignore[union-attr]
        result = [Plain(c) for c in lattice_steps(coords)]
        if not any(coords):
            result.append(TreeNode(()))
        return result

    def sphere_sizes(self, r_max: int) -> list[int]:
        sizes = tree_sphere_sizes(self.tree_degree, r_max)
        lattice = lattice_sphere_sizes(self.d, max(r_max - 1, 0))
        return [s + (lattice[j - 1] if j > 0 else 0) for j, s in enumerate(sizes)]


class ProductFamily(GraphFamily):
    """Cartesian product of a base family with ℤ."""

    def __init__(self, spec: GraphSpec, base: GraphFamily) -> None:
        super().__init__(spec)
        self.base = base

    def origin(self) -> VertexId:
        return ProductVertex(self.base.origin(), 0)  # type: ignore[arg-type]

    def validate(self, v: VertexId) -> None:
        if not isinstance(v, ProductVertex):
            raise self._invalid(v, "expected a product vertex")
        if not isinstance(v.z, int) or isinstance(v.z, bool):
            raise self._invalid(v, "line coordinate must be an integer")
        self.base.validate(v.base)

    def adjacent(self, v: VertexId) -> list[VertexId]:
        pv: ProductVertex = v  # type: ignore[assignment]
        result: list[VertexId] = [ProductVertex(u, pv.z) for u in self.base.adjacent(pv.base)]  # type: ignore[arg-type]
        result.append(ProductVertex(pv.base, pv.z - 1))
        result.append(ProductVertex(pv.base, pv.z + 1))
        return result

    def sphere_sizes(self, r_max: int) -> list[int]:
        base = self.base.sphere_sizes(r_max)
        sizes = []
        below = 0
        for j in range(r_max + 1):
            sizes.append(base[j] + 2 * below)
            below += base[j]
        return sizes


_BASE_FAMILIES: dict[GraphKind, type[GraphFamily]] = {
    GraphKind.REGULAR_TREE: RegularTreeFamily,
    GraphKind.LATTICE: LatticeFamily,
    GraphKind.TREE_WITH_LATTICE_INSERTIONS: TreeWithInsertionsFamily,
    GraphKind.STRETCHED_TREE: StretchedTreeFamily,
    GraphKind.TREE_PLUS_RAY: TreePlusRayFamily,
    GraphKind.LATTICE_JOIN_TREE: LatticeJoinTreeFamily,
}


@functools.lru_cache(maxsize=64)
def family_for(spec: GraphSpec) -> GraphFamily:
    """Return the (shared, immutable apart from its level cache) family object for a spec."""
    base = _BASE_FAMILIES[spec.kind](spec.base())
    if spec.product:
        return ProductFamily(spec, base)
    return base


def neighbors(spec: GraphSpec, v: VertexId) -> list[VertexId]:
    """Exact adjacency list of `v`; raises InvalidVertexError for foreign vertices."""
    try:
        return family_for(spec).neighbors(v)
    except (AttributeError, TypeError) as e:
        raise InvalidVertexError(f"Malformed vertex {v!r}: {e}") from e


def origin(spec: GraphSpec) -> VertexId:
    return family_for(spec).origin()


def validate_vertex(spec: GraphSpec, v: VertexId) -> None:
    family_for(spec).validate(v)


def sphere_sizes(spec: GraphSpec, r_max: int) -> list[int]:
    """Exact sphere sizes around `origin(spec)` for radii 0..r_max."""
    return family_for(spec).sphere_sizes(r_max)
