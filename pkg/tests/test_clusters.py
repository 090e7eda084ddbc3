"""Crossing-cluster counts, trifurcations and shell-escape events."""

import random

import networkx as nx
import numpy as np
import pytest

from product_percolation.clusters import (
    annulus_escape_events,
    boundary_cluster_count,
    boundary_cluster_profile,
    trifurcation_count,
)
from product_percolation.errors import ConfigError
from product_percolation.graphs import GraphSpec, Plain, TreeNode, ball, origin
from product_percolation.percolation import ClusterLabeling, sample_bonds


def _deletion_oracle(window, open_edges):
    """Vertices whose deletion leaves >= 3 boundary-reaching pieces among their open neighbours."""
    graph = nx.Graph()
    graph.add_nodes_from(range(window.num_vertices))
    graph.add_edges_from(window.edges[open_edges].tolist())
    boundary = set(np.flatnonzero(window.boundary_mask).tolist())
    count = 0
    for v in range(window.num_vertices):
        touching = set(graph.neighbors(v))
        reduced = graph.copy()
        reduced.remove_node(v)
        pieces = 0
        for component in nx.connected_components(reduced):
            if component & touching and component & boundary:
                pieces += 1
        if pieces >= 3:
            count += 1
    return count


class TestTrichotomy:
    def test_p_zero(self, square_lattice):
        report = boundary_cluster_count(square_lattice, 1, 4, 0.0, 20, 1)
        assert report.histogram == {0: 20}

    def test_p_one(self, ternary_tree):
        report = boundary_cluster_count(ternary_tree, 1, 4, 1.0, 20, 1)
        assert report.histogram == {1: 20}
        assert report.frequency(1) == 1.0
        assert report.mean_count == 1.0

    def test_radii_order(self, square_lattice):
        with pytest.raises(ConfigError):
            boundary_cluster_count(square_lattice, 4, 4, 0.5, 10, 1)

    @pytest.mark.parametrize(
        "spec,R",
        [
            (GraphSpec.lattice(2), 4),
            (GraphSpec.regular_tree(3), 4),
            (GraphSpec.tree_with_insertions(1, 1).with_line(), 3),
        ],
    )
    def test_adjacent_radii_count_boundary_clusters(self, spec, R):
        report = boundary_cluster_count(spec, R - 1, R, 0.5, 30, 4)
        window = ball(spec, origin(spec), R)
        for index, count in enumerate(report.counts):
            sample = sample_bonds(window, 0.5, 4, index, stream="trichotomy")
            roots = ClusterLabeling.from_edge_mask(window, sample.open_edges).roots
            touching = set(roots[window.boundary_mask].tolist())
            # clusters lying entirely on the boundary sphere do not meet ball(R - 1)
            on_sphere_only = touching - set(roots[~window.boundary_mask].tolist())
            assert count == len(touching) - len(on_sphere_only)

        full = boundary_cluster_count(spec, R - 1, R, 1.0, 3, 4)
        assert full.histogram == {1: 3}

    def test_tree_has_many_crossing_clusters(self, ternary_tree):
        report = boundary_cluster_count(ternary_tree, 2, 6, 0.9, 200, 3)
        assert report.mean_count > 1.3

    def test_trifurcation_density(self, ternary_tree):
        report = boundary_cluster_count(ternary_tree, 1, 4, 1.0, 5, 1, trifurcation_replicas=5)
        assert report.trifurcation_density == 1.0

    def test_profile_is_coupled(self, ternary_tree):
        spec = ternary_tree.with_line()
        reports = boundary_cluster_profile(spec, 1, [3, 4, 5], 0.5, 40, 2)
        assert [rep.outer_radius for rep in reports] == [3, 4, 5]
        for a, b in zip(reports, reports[1:]):
            assert all(x >= y for x, y in zip(a.counts, b.counts))

    def test_profile_radii_exceed_inner(self, ternary_tree):
        with pytest.raises(ConfigError):
            boundary_cluster_profile(ternary_tree, 3, [2, 5], 0.5, 5, 1)

    def test_report_serializes(self, square_lattice):
        data = boundary_cluster_count(square_lattice, 1, 3, 0.5, 10, 1).to_dict()
        assert data["replicas"] == 10
        assert sum(data["histogram"].values()) == 10

    @pytest.mark.slow
    def test_square_lattice_uniqueness(self, square_lattice):
        report = boundary_cluster_count(square_lattice, 4, 32, 0.7, 1000, 1)
        assert report.frequency(1) >= 0.9

    @pytest.mark.slow
    def test_product_tree_profile(self):
        """All radii share one sample, so a cluster crossing to the larger sphere also crosses the smaller one."""
        spec = GraphSpec.regular_tree(4).with_line()
        reports = boundary_cluster_profile(spec, 1, [3, 4, 5], 0.4, 1000, 3)
        for a, b in zip(reports, reports[1:]):
            assert all(x >= y for x, y in zip(a.counts, b.counts))
        for report in reports:
            assert sum(report.histogram.values()) == 1000


class TestTrifurcation:
    def test_p_zero(self, square_lattice):
        window = ball(square_lattice, Plain((0, 0)), 3)
        sample = sample_bonds(window, 0.0, 1, 0)
        assert trifurcation_count(ClusterLabeling.from_edge_mask(window, sample.open_edges, sample)) == 0

    def test_y_shape(self, ternary_tree):
        window = ball(ternary_tree, TreeNode(()), 2)
        sample = sample_bonds(window, 1.0, 1, 0)
        label = ClusterLabeling.from_edge_mask(window, sample.open_edges, sample)
        assert trifurcation_count(label, [TreeNode(())]) == 1
        # Every inner vertex of a fully open tree ball splits into three arms.
        assert trifurcation_count(label) == 4

    def test_matches_deletion_oracle(self):
        windows = [
            ball(GraphSpec.lattice(2), Plain((0, 0)), 3),
            ball(GraphSpec.regular_tree(3), TreeNode(()), 3),
        ]
        rand = random.Random(5)
        for window in windows:
            for index in range(60):
                sample = sample_bonds(window, 0.4 + 0.5 * rand.random(), 21, index)
                label = ClusterLabeling.from_edge_mask(window, sample.open_edges, sample)
                assert trifurcation_count(label) == _deletion_oracle(window, sample.open_edges)


class TestAnnulus:
    def test_p_zero(self, ternary_tree):
        report = annulus_escape_events(ternary_tree, None, 0.0, [1, 2, 3], 2, 20, 1)
        assert report.e_frequencies == (0.0, 0.0)
        assert report.f_frequencies == (0.0, 0.0, 0.0)

    def test_events_are_disjoint(self, ternary_tree):
        report = annulus_escape_events(ternary_tree, TreeNode(()), 0.5, [1, 2, 3, 4], 2, 200, 7)
        assert report.max_events_per_replica <= 1
        assert report.e_total <= 1.0

    def test_p_one(self, ternary_tree):
        report = annulus_escape_events(ternary_tree, None, 1.0, [1, 2], 1, 10, 1, height=2)
        # Everything is reached, so no shell is the last one reached, and every height is hit.
        assert report.e_frequencies == (0.0,)
        assert report.f_frequencies == (0.0, 0.0)

    def test_rows_leave_last_e_empty(self, ternary_tree):
        report = annulus_escape_events(ternary_tree, None, 0.5, [1, 2], 3, 10, 1)
        rows = report.rows()
        assert rows[0][:2] == (1, 1)
        assert rows[-1][2] is None
        assert report.to_dict()["f_non_increasing"] == report.f_non_increasing

    @pytest.mark.parametrize(
        "radii, L",
        [([], 1), ([2, 2], 1), ([0, 1], 1), ([1, 2], 0)],
    )
    def test_validation(self, ternary_tree, radii, L):
        with pytest.raises(ConfigError):
            annulus_escape_events(ternary_tree, None, 0.5, radii, L, 5, 1)

    def test_lattice_f_decreasing(self):
        report = annulus_escape_events(GraphSpec.lattice(2), None, 0.6, [1, 2, 3, 4], 3, 300, 11)
        assert report.f_frequencies[0] >= report.f_frequencies[-1]
