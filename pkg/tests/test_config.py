"""Tests for experiment configuration loading and validation."""

import pytest

from product_percolation.config import SEED_MAX, ExperimentConfig
from product_percolation.errors import ConfigError
from product_percolation.experiments import EXPERIMENTS
from product_percolation.utils.pool import THREADS_ENV, ReplicaPool, default_threads


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestLoading:
    def test_yaml(self, tmp_path):
        path = _write(tmp_path, "series.yaml", "experiment: transience-series\nseed: 3\nparams:\n  d: 6\n")
        config = ExperimentConfig.load(path)
        assert config.experiment == "transience-series"
        assert config.seed == 3
        assert config.params == {"d": 6, "t_max": 2000}
        assert config.graph.spec is None

    def test_sections(self, tmp_path):
        text = (
            "[experiment]\nexperiment = growth\nseed = 2\n\n"
            "[graph]\nkind = lattice\nd = 2\n\n"
            "[params]\nr_max = 5\nmethod = bfs\n"
        )
        config = ExperimentConfig.load(_write(tmp_path, "growth.cfg", text))
        assert config.seed == 2
        assert config.graph.spec.describe() == "lattice(d=2)"
        assert config.params["r_max"] == 5
        assert config.params["method"] == "bfs"

    def test_yaml_round_trip(self, tmp_path):
        config = ExperimentConfig.default("trichotomy")
        path = str(tmp_path / "trichotomy.yaml")
        config.to_yaml(path)
        assert ExperimentConfig.load(path).to_mapping() == config.to_mapping()

    @pytest.mark.parametrize("name", sorted(EXPERIMENTS))
    def test_every_experiment_has_a_valid_default(self, name):
        config = ExperimentConfig.default(name)
        assert config.experiment == name
        assert set(config.params) == {p.name for p in EXPERIMENTS[name].params}


class TestValidation:
    @pytest.mark.parametrize(
        "data",
        [
            {"experiment": "transience-series", "params": {"d": 5}, "colour": "red"},
            {"params": {"d": 5}},
            {"experiment": "no-such-experiment"},
            {"experiment": "transience-series", "params": {"d": 5, "depth": 3}},
            {"experiment": "transience-series", "params": {}},
            {"experiment": "transience-series", "params": {"d": "five"}},
            {"experiment": "transience-series", "params": {"d": 5}, "graph": {"kind": "lattice", "d": 2}},
            {"experiment": "growth", "params": {}},
            {"experiment": "growth", "graph": {"kind": "lattice", "d": 2, "colour": "red"}},
            {"experiment": "transience-series", "params": {"d": 5}, "threads": 0},
            "not a mapping",
        ],
    )
    def test_rejected(self, data):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_mapping(data)

    @pytest.mark.parametrize("seed", [-1, SEED_MAX + 1, True, 1.5])
    def test_seed_range(self, seed):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_mapping({"experiment": "transience-series", "seed": seed, "params": {"d": 5}})

    def test_largest_seed(self):
        config = ExperimentConfig.from_mapping({"experiment": "transience-series", "seed": SEED_MAX, "params": {"d": 5}})
        assert config.seed == SEED_MAX

    def test_malformed_files(self, tmp_path):
        with pytest.raises(ConfigError):
            ExperimentConfig.load(_write(tmp_path, "bad.yaml", "experiment: [unclosed\n"))
        with pytest.raises(ConfigError):
            ExperimentConfig.load(_write(tmp_path, "bad.cfg", "[colours]\nred = 1\n"))


class TestOverridesAndHash:
    def test_overrides(self):
        config = ExperimentConfig.default("growth").with_overrides(["r_max=7", "graph.d=3"])
        assert config.params["r_max"] == 7
        assert config.graph.spec.d == 3
        with pytest.raises(ConfigError):
            config.with_overrides(["r_max"])
        with pytest.raises(ConfigError):
            config.with_overrides(["depth=2"])

    def test_hash_ignores_threads_and_paths(self):
        base = ExperimentConfig.from_mapping({"experiment": "transience-series", "params": {"d": 5}, "threads": 1})
        other = ExperimentConfig.from_mapping(
            {"experiment": "transience-series", "params": {"d": 5}, "threads": 8, "output": {"csv_path": "x.csv"}}
        )
        assert base.config_hash() == other.config_hash()
        reseeded = ExperimentConfig.from_mapping({"experiment": "transience-series", "params": {"d": 5}, "seed": 9})
        assert base.config_hash() != reseeded.config_hash()


class TestThreads:
    def test_environment_default(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "3")
        assert default_threads() == 3
        assert ReplicaPool().threads == 3

    def test_environment_rejected(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "zero")
        with pytest.raises(ConfigError):
            default_threads()

    def test_pool_preserves_order(self):
        assert ReplicaPool(4).map(lambda i: i * i, range(50)) == [i * i for i in range(50)]
