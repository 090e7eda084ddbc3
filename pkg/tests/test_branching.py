"""Offspring laws, branching walks and the level-crossing simulation."""

import math

import networkx as nx
import numpy as np
import pytest
from scipy import stats
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from product_percolation.branching import (
    OffspringLaw,
    OffspringLawU,
    ParticleFront,
    brw_step,
    build_slab,
    coupled_visited_set,
    dominance_test,
    expected_returns_series,
    extinction_probability,
    is_copy_interior,
    offspring_simulation,
    simulate_brw,
    simulate_tree_brw,
    spectral_radius_bound,
    survival_probability,
    tree_brw_expected_returns,
)
from product_percolation.errors import ConfigError
from product_percolation.graphs import GraphSpec, LatticePoint, ProductVertex, ball, origin
from product_percolation.percolation import ClusterLabeling, sample_bonds

U_EXTINCTION = 0.5436890126920764


class TestOffspringLaws:
    @pytest.mark.parametrize("c,count", [(1.0, 4), (0.5, 8), (0.3, 14), (0.8, 5)])
    def test_u_support(self, c, count):
        law = OffspringLawU(c)
        assert law.values == (0, count)
        assert law.probabilities == pytest.approx((1 - c / 2, c / 2))
        assert law.mean >= 2.0

    @pytest.mark.parametrize("c", [0.0, -0.5, 1.5])
    def test_u_rejects_c(self, c):
        with pytest.raises(ConfigError):
            OffspringLawU(c)

    def test_law_validation(self):
        with pytest.raises(ConfigError):
            OffspringLaw((0, 1), (0.5, 0.6))
        with pytest.raises(ConfigError):
            OffspringLaw((1, 1), (0.5, 0.5))
        with pytest.raises(ConfigError):
            OffspringLaw((-1,), (1.0,))

    def test_extinction(self):
        assert extinction_probability(OffspringLawU(1.0)) == pytest.approx(U_EXTINCTION, abs=1e-10)
        assert extinction_probability(OffspringLaw((0, 2), (0.25, 0.75))) == pytest.approx(1 / 3, abs=1e-10)
        assert extinction_probability(OffspringLaw((0, 1, 2), (0.25, 0.5, 0.25))) == 1.0
        assert extinction_probability(OffspringLaw.point_mass(1)) == 0.0

    def test_survival_matches_extinction(self):
        result = survival_probability(OffspringLawU(1.0), 30, 20_000, seed=11)
        assert abs(result.estimate - (1 - U_EXTINCTION)) <= 3 * result.stderr + 1e-3
        assert result.capped > 0

    @pytest.mark.slow
    def test_survival_many_replicas(self):
        result = survival_probability(OffspringLawU(1.0), 40, 100_000, seed=5)
        assert abs(result.estimate - (1 - U_EXTINCTION)) <= 3 * result.stderr

    def test_survival_is_reproducible(self):
        law = OffspringLaw((0, 3), (0.5, 0.5))
        assert survival_probability(law, 10, 500, seed=2) == survival_probability(law, 10, 500, seed=2)

    def test_dominance(self):
        law = OffspringLawU(0.5)
        zeros = dominance_test([0] * 1000, law)
        assert not zeros.dominates
        assert zeros.margin < 0
        eights = dominance_test([8] * 1000, law)
        assert eights.dominates
        assert eights.margin == pytest.approx(eights.epsilon)
        with pytest.raises(ConfigError):
            dominance_test([], law)

    def test_law_dominates_itself(self):
        law = OffspringLaw((0, 1, 2, 3), (0.4, 0.3, 0.2, 0.1))
        samples = law.sample(np.random.default_rng(31), 10_000)
        result = dominance_test(samples, law, confidence=0.99)
        assert result.dominates
        assert result.epsilon == pytest.approx(math.sqrt(math.log(100) / 20_000))

    def test_shifted_law_dominates_with_margin(self):
        law = OffspringLaw((0, 1, 2, 3), (0.4, 0.3, 0.2, 0.1))
        samples = law.shifted(1).sample(np.random.default_rng(32), 10_000)
        result = dominance_test(samples, law, confidence=0.99)
        assert result.dominates
        assert result.margin > 0
        # every sample is >= 0, so the gap at k = 0 is exactly zero
        assert result.margin == pytest.approx(result.epsilon)


class TestTransienceSeries:
    def test_first_term(self):
        assert expected_returns_series(6, 1).partial_sums == (0.5,)

    def test_partial_sums_increase(self):
        sums = expected_returns_series(3, 40).partial_sums
        assert all(b > a for a, b in zip(sums, sums[1:]))

    @pytest.mark.parametrize("d", range(2, 13))
    def test_converges_only_above_four(self, d):
        series = expected_returns_series(d, 2000)
        assert series.converged == (d > 4)
        assert (series.limit is not None) == (d > 4)

    def test_limit_value(self):
        series = expected_returns_series(6, 2000)
        assert series.limit == pytest.approx(5.0)
        assert series.partial_sums[-1] == pytest.approx(5.0, rel=1e-9)
        assert series.to_dict()["converged"] is True

    def test_validation(self):
        with pytest.raises(ConfigError):
            expected_returns_series(0, 10)
        with pytest.raises(ConfigError):
            expected_returns_series(5, 0)


class TestTreeBrw:
    def test_exact_first_step(self):
        assert tree_brw_expected_returns(20, 0.02, 0.5, 1)[0] == pytest.approx(0.5)

    def test_subcritical_returns_settle(self):
        assert spectral_radius_bound(20, 0.02, 0.5) == pytest.approx(0.5 + 0.04 * math.sqrt(19))
        exact = tree_brw_expected_returns(20, 0.02, 0.5, 200)
        assert np.all(np.diff(exact) >= 0)
        assert exact[199] - exact[49] < 0.05

    def test_simulation_agrees_with_exact(self):
        exact = tree_brw_expected_returns(20, 0.02, 0.5, 30)
        report = simulate_tree_brw(20, 0.02, 0.5, 30, 4000, seed=9)
        assert report.aborted == 0
        assert abs(report.mean_returns - exact[-1]) <= 4 * report.stderr + 1e-3

    def test_validation(self):
        with pytest.raises(ConfigError):
            tree_brw_expected_returns(1, 0.1, 0.1, 5)
        with pytest.raises(ConfigError):
            simulate_tree_brw(3, 1.5, 0.1, 5, 10, seed=1)


class TestBranchingWalk:
    def test_step_is_deterministic(self, insertions_d1_line):
        start = origin(insertions_d1_line)
        front = ParticleFront.single(start)
        first = brw_step(insertions_d1_line, front, 0.7, seed=3)
        second = brw_step(insertions_d1_line, front, 0.7, seed=3)
        assert first.particles == second.particles
        assert first.generation == 1

    def test_closed_walk_dies(self, insertions_d1_line):
        start = origin(insertions_d1_line)
        trajectory = simulate_brw(insertions_d1_line, start, 0.0, 5, 100, seed=1)
        assert trajectory.population_history == (1, 0)
        assert trajectory.returns_to_start == 0
        assert trajectory.visited == frozenset({start})
        assert not trajectory.aborted

    def test_population_cap_aborts(self, insertions_d1_line):
        trajectory = simulate_brw(insertions_d1_line, origin(insertions_d1_line), 1.0, 10, 50, seed=1)
        assert trajectory.aborted
        assert trajectory.to_dict()["aborted"] is True

    def test_rejects_other_graphs(self, square_lattice):
        with pytest.raises(ConfigError):
            brw_step(square_lattice.with_line(), ParticleFront.single(origin(square_lattice.with_line())), 0.5, 1)
        with pytest.raises(ConfigError):
            ParticleFront({origin(square_lattice): -1})

    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("p", [0.4, 0.6])
    @pytest.mark.parametrize("d,n0,radius", [(1, 1, 4), (1, 2, 4), (2, 1, 3), (2, 2, 3)])
    def test_coupled_walk_covers_cluster(self, d, n0, radius, p, seed):
        spec = GraphSpec.tree_with_insertions(d, n0).with_line()
        start = origin(spec)
        window = ball(spec, start, radius)
        sample = sample_bonds(window, p, seed, 0)
        label = ClusterLabeling.from_edge_mask(window, sample.open_edges)
        root = label.find(window.index_of(start))
        cluster = {v for i, v in enumerate(window.vertices) if label.find(i) == root}
        visited = coupled_visited_set(sample, start)
        outside = {v for v in cluster if not is_copy_interior(spec, v)}
        assert outside <= visited
        assert start in visited


def _component_labels(num_vertices, edges):
    graph = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(num_vertices, num_vertices))
    return connected_components(graph, directed=False)[1]


def _copy_fiber_counts(d, n, window, height, p, draws, seed):
    """Fiber points reached from the glued origin in independently percolated boxes of Z^{d+1}."""
    side = n + 2 * window + 1
    index = np.arange(side**d * (2 * height + 1)).reshape((side,) * d + (2 * height + 1,))
    pairs = []
    for axis in range(d + 1):
        head = np.take(index, range(index.shape[axis] - 1), axis=axis).ravel()
        tail = np.take(index, range(1, index.shape[axis]), axis=axis).ravel()
        pairs.append(np.stack([head, tail], axis=1))
    edges = np.concatenate(pairs)
    fiber = np.concatenate([index[(window,) * d].ravel(), index[(n + window,) * d].ravel()])
    start = index[(window,) * d + (height,)]
    generator = np.random.default_rng(seed)
    counts = []
    for _ in range(draws):
        labels = _component_labels(index.size, edges[generator.random(len(edges)) < p])
        counts.append(int(np.count_nonzero(labels[fiber] == labels[start])) - 1)
    return np.array(counts)


class TestAttachmentPoint:
    @pytest.mark.slow
    def test_fiber_offspring_match_direct_percolation(self):
        """The glued origin of an n = 1 copy sends one particle per fiber point of its cluster."""
        spec = GraphSpec.tree_with_insertions(2, 1).with_line()
        particle = ProductVertex(LatticePoint((0,), (0, 0)), 0)
        front = ParticleFront.single(particle)
        draws, window = 10_000, 6
        walk = []
        for seed in range(draws):
            step = brw_step(spec, front, 0.3, seed=seed, window=window)
            walk.append(sum(c for u, c in step.particles.items() if isinstance(u.base, LatticePoint)))
        walk = np.array(walk)
        direct = _copy_fiber_counts(2, 1, window, 1 + window, 0.3, draws, seed=2024)

        assert stats.ks_2samp(walk, direct).pvalue > 1e-3
        spread = math.sqrt(walk.var() / draws + direct.var() / draws)
        assert abs(walk.mean() - direct.mean()) < 4 * spread + 1e-12


class TestLevelCrossing:
    def test_fully_open_slab(self):
        result = offspring_simulation(1, 2, 1.0, 3, seed=1)
        assert result.counts == (3, 3, 3)
        assert result.level_size == 3

    def test_closed_slab(self):
        result = offspring_simulation(1, 2, 0.0, 5, seed=1)
        assert set(result.counts) == {0}
        assert not result.lower_bound_only

    def test_matches_networkx_oracle(self):
        spec = GraphSpec.tree_with_insertions(1, 1)
        slab = build_slab(spec, 2, 1, 3)
        region = slab.window
        result = offspring_simulation(1, 2, 0.5, 30, seed=7, window=1)
        for index, count in enumerate(result.counts):
            sample = sample_bonds(region, 0.5, 7, index, stream="offspring")
            graph = nx.Graph()
            graph.add_nodes_from(range(region.num_vertices))
            graph.add_edges_from(tuple(e) for e in region.edges[sample.open_edges].tolist())
            component = nx.node_connected_component(graph, slab.start)
            assert count == sum(1 for i in component if slab.terminals[i])

    @pytest.mark.slow
    def test_d2_mean_matches_direct_slab_percolation(self):
        replicas = 10_000
        result = offspring_simulation(2, 2, 0.35, replicas, seed=12)
        slab = build_slab(GraphSpec.tree_with_insertions(2, 1), 2, 2, 4)
        region = slab.window
        generator = np.random.default_rng(99)
        direct = []
        for _ in range(replicas):
            open_edges = generator.random(region.num_edges) < 0.35
            labels = _component_labels(region.num_vertices, region.edges[open_edges])
            direct.append(int(np.count_nonzero((labels == labels[slab.start]) & slab.terminals)))
        direct = np.array(direct)
        counts = np.array(result.counts)
        spread = math.sqrt(counts.var() / replicas + direct.var() / replicas)
        assert abs(result.mean - direct.mean()) <= 3 * spread + 1e-12
        assert result.level_size == int(slab.terminals.sum())

    def test_distribution_sums_to_one(self):
        result = offspring_simulation(1, 2, 0.6, 40, seed=4)
        assert sum(result.distribution().values()) == pytest.approx(1.0)
        assert result.to_dict()["replicas"] == 40

    def test_validation(self):
        spec = GraphSpec.tree_with_insertions(1, 1)
        with pytest.raises(ConfigError):
            build_slab(spec, 1, 1, 3)
        with pytest.raises(ConfigError):
            build_slab(spec, 2, -1, 3)
        with pytest.raises(ConfigError):
            build_slab(spec.with_line(), 2, 1, 3)
        with pytest.raises(ConfigError):
            offspring_simulation(1, 2, 0.5, 0, seed=1)
