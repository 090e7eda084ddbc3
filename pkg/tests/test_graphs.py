"""Graph specs, adjacency, balls and exact sphere sizes."""

import math

import networkx as nx
import pytest

from product_percolation.errors import ConfigError, InvalidVertexError, TruncationTooLargeError
from product_percolation.graphs import (
    GraphKind,
    GraphSpec,
    LatticePoint,
    Plain,
    ProductVertex,
    StretchNode,
    TreeNode,
    ball,
    cylinder,
    family_for,
    level_sequence,
    neighbors,
    origin,
    sphere_sizes,
)

SYMMETRY_SPECS = [
    GraphSpec.lattice(2),
    GraphSpec.regular_tree(3),
    GraphSpec.tree_with_insertions(1, 1),
    GraphSpec.tree_with_insertions(2, 1),
    GraphSpec.stretched_tree(1, 1),
    GraphSpec.tree_plus_ray(3),
    GraphSpec.lattice_join_tree(2, 3),
    GraphSpec.tree_with_insertions(1, 1).with_line(),
    GraphSpec.regular_tree(3).with_line(),
]


class TestLevelSequence:
    def test_base_case(self):
        assert level_sequence(3, 1) == [1]

    def test_natural_log_gaps(self):
        assert level_sequence(3, 4) == [1, 8, 18, 31]
        assert level_sequence(1, 3) == [1, 2, 4]
        assert level_sequence(2, 4) == [1, 4, 9, 15]

    def test_strictly_increasing(self):
        levels = level_sequence(2, 50)
        assert all(b > a for a, b in zip(levels, levels[1:]))

    def test_rejects_bad_input(self):
        with pytest.raises(ConfigError):
            level_sequence(0, 3)
        with pytest.raises(ConfigError):
            level_sequence(2, 0)


class TestGraphSpec:
    def test_unknown_kind(self):
        with pytest.raises(ConfigError, match="Unknown graph kind"):
            GraphSpec("hyperbolic")

    def test_tree_degree_validation(self):
        with pytest.raises(ConfigError):
            GraphSpec.regular_tree(2)

    def test_product_only_once(self):
        with pytest.raises(ConfigError):
            GraphSpec.lattice(1).with_line().with_line()

    def test_insertion_tree_degree(self):
        assert GraphSpec.tree_with_insertions(3, 1).tree_degree == 12

    def test_text_round_trip(self):
        spec = GraphSpec.tree_with_insertions(2, 3).with_line()
        assert GraphSpec.from_text(spec.to_text()) == spec
        assert GraphSpec.from_text(spec.to_line()) == spec

    def test_from_mapping_rejects_unknown_key(self):
        with pytest.raises(ConfigError, match="Unknown graph key"):
            GraphSpec.from_mapping({"kind": "lattice", "d": 2, "colour": "red"})

    def test_from_mapping_requires_kind(self):
        with pytest.raises(ConfigError):
            GraphSpec.from_mapping({"d": 2})

    def test_from_mapping_parses_strings(self):
        spec = GraphSpec.from_mapping({"kind": "regular-tree", "degree": "4", "product": "true"})
        assert spec.kind is GraphKind.REGULAR_TREE
        assert spec.degree == 4
        assert spec.product

    def test_describe(self):
        assert GraphSpec.lattice(2).with_line().describe() == "lattice(d=2)×Z"


class TestNeighbors:
    def test_square_lattice(self, square_lattice):
        result = set(neighbors(square_lattice, Plain((0, 0))))
        assert result == {Plain((1, 0)), Plain((-1, 0)), Plain((0, 1)), Plain((0, -1))}

    def test_root_of_insertions_is_glued_to_copies(self):
        spec = GraphSpec.tree_with_insertions(2, 1)
        result = neighbors(spec, TreeNode(()))
        assert len(result) == 8
        assert all(isinstance(u, LatticePoint) and u.coords == (0, 0) for u in result)

    def test_corner_is_glued_to_child(self):
        spec = GraphSpec.tree_with_insertions(2, 1)
        corner = LatticePoint((5,), (1, 1))
        assert TreeNode((5,)) in neighbors(spec, corner)
        assert LatticePoint((5,), (1, 1)) in neighbors(spec, TreeNode((5,)))

    def test_product_of_line_is_square_lattice(self):
        spec = GraphSpec.lattice(1).with_line()
        result = set(neighbors(spec, ProductVertex(Plain((0,)), 0)))
        assert result == {
            ProductVertex(Plain((1,)), 0),
            ProductVertex(Plain((-1,)), 0),
            ProductVertex(Plain((0,)), 1),
            ProductVertex(Plain((0,)), -1),
        }

    def test_stretched_edge(self):
        spec = GraphSpec.stretched_tree(1, 1)
        assert neighbors(spec, StretchNode((2,), 1)) == [TreeNode(()), StretchNode((2,), 2)]

    @pytest.mark.parametrize(
        "spec, vertex",
        [
            (GraphSpec.lattice(2), Plain((0,))),
            (GraphSpec.lattice(2), TreeNode(())),
            (GraphSpec.regular_tree(3), TreeNode((3,))),
            (GraphSpec.regular_tree(3), TreeNode((0, 2))),
            (GraphSpec.tree_with_insertions(2, 1), LatticePoint((0, 0), (0, 0))),
            (GraphSpec.tree_plus_ray(3), Plain((0,))),
            (GraphSpec.lattice(1).with_line(), Plain((0,))),
        ],
    )
    def test_invalid_vertices(self, spec, vertex):
        with pytest.raises(InvalidVertexError):
            neighbors(spec, vertex)

    @pytest.mark.parametrize("spec", SYMMETRY_SPECS, ids=lambda s: s.describe())
    def test_adjacency_is_symmetric(self, spec):
        family = family_for(spec)
        window = ball(spec, origin(spec), 5)
        for v in window.vertices:
            for u in family.adjacent(v):
                assert v in family.neighbors(u)

    def test_degree_law_with_insertions(self):
        d = 2
        spec = GraphSpec.tree_with_insertions(d, 1)
        family = family_for(spec)
        window = ball(spec, origin(spec), 6)
        for v in window.vertices:
            degree = len(family.adjacent(v))
            if isinstance(v, TreeNode):
                assert degree == 4 * d
            elif any(v.coords) and any(c != 1 for c in v.coords):
                assert degree == 2 * d
            else:
                assert degree == 2 * d + 1


class TestBall:
    def test_plus_shape(self, square_lattice):
        window = ball(square_lattice, Plain((0, 0)), 1)
        assert window.num_vertices == 5
        assert window.num_edges == 4

    def test_diamond(self, square_lattice):
        window = ball(square_lattice, Plain((0, 0)), 2)
        assert window.num_vertices == 13
        assert window.num_edges == 16

    @pytest.mark.parametrize("k, r", [(3, 2), (3, 5), (4, 3), (5, 4)])
    def test_regular_tree_volume(self, k, r):
        window = ball(GraphSpec.regular_tree(k), TreeNode(()), r)
        assert window.num_vertices == 1 + k * ((k - 1) ** r - 1) // (k - 2)

    def test_nesting(self, ternary_tree):
        small = ball(ternary_tree, TreeNode(()), 3)
        large = ball(ternary_tree, TreeNode(()), 4)
        assert set(small.vertices) <= set(large.vertices)

    def test_boundary_is_outer_sphere(self, square_lattice):
        window = ball(square_lattice, Plain((0, 0)), 3)
        assert window.boundary == {v for v in window.vertices if sum(map(abs, v.coords)) == 3}

    def test_deterministic_order(self, ternary_tree):
        first = ball(ternary_tree, TreeNode(()), 3)
        second = ball(ternary_tree, TreeNode(()), 3)
        assert first.vertices == second.vertices
        assert (first.edges == second.edges).all()

    def test_insertions_against_networkx_oracle(self):
        """Hand-built first two levels of the d=2 insertion tree, searched by networkx."""
        spec = GraphSpec.tree_with_insertions(2, 1)
        graph = nx.Graph()
        root = "root"
        for i in range(8):
            for x in range(-4, 5):
                for y in range(-4, 5):
                    graph.add_edge((i, x, y), (i, x + 1, y))
                    graph.add_edge((i, x, y), (i, x, y + 1))
            graph.add_edge(root, (i, 0, 0))
            graph.add_edge((i, 1, 1), ("tree", i))
        for r in range(0, 5):
            expected = len(nx.single_source_shortest_path_length(graph, root, cutoff=r))
            assert ball(spec, TreeNode(()), r).num_vertices == expected

    def test_product_against_distance_oracle(self, ternary_tree):
        spec = ternary_tree.with_line()
        base = sphere_sizes(ternary_tree, 3)
        expected = sum(s * (2 * (3 - j) + 1) for j, s in enumerate(base))
        assert ball(spec, origin(spec), 3).num_vertices == expected == 52

    def test_cap(self, square_lattice):
        with pytest.raises(TruncationTooLargeError) as info:
            ball(square_lattice, Plain((0, 0)), 50, cap=100)
        assert info.value.cap == 100

    def test_negative_radius(self, square_lattice):
        with pytest.raises(ConfigError):
            ball(square_lattice, Plain((0, 0)), -1)

    def test_edge_list_text(self, tmp_path):
        window = ball(GraphSpec.lattice(1), Plain((0,)), 1)
        path = window.write_edge_list(str(tmp_path / "edges.txt"))
        assert (tmp_path / "edges.txt").read_text(encoding="utf-8") == window.to_edge_list_text()
        assert path.endswith("edges.txt")


class TestCylinder:
    def test_shape(self, ternary_tree):
        window = cylinder(ternary_tree, TreeNode(()), 2, 3)
        assert window.num_vertices == 10 * 7
        assert window.spec == ternary_tree.with_line()
        assert set(window.distances.tolist()) == {0, 1, 2}

    def test_rejects_product_spec(self, ternary_tree):
        with pytest.raises(ConfigError):
            cylinder(ternary_tree.with_line(), TreeNode(()), 2, 3)


class TestSphereSizes:
    @pytest.mark.parametrize("spec", SYMMETRY_SPECS, ids=lambda s: s.describe())
    def test_closed_form_matches_bfs(self, spec):
        family = family_for(spec)
        window = ball(spec, family.origin(), 6)
        counted = [int((window.distances == j).sum()) for j in range(7)]
        assert sphere_sizes(spec, 6) == counted

    def test_lattice_spheres(self):
        assert sphere_sizes(GraphSpec.lattice(2), 3) == [1, 4, 8, 12]
        assert sphere_sizes(GraphSpec.lattice(3), 2) == [1, 6, 18]

    def test_tree_spheres(self):
        sizes = sphere_sizes(GraphSpec.regular_tree(8), 60)
        assert sizes[60] == 8 * 7**59
        assert math.isclose(math.log(sum(sizes)) / 60, math.log(7), abs_tol=0.05)
