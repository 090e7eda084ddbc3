"""Experiment configuration for product-percolation."""

import configparser
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from product_percolation.errors import ConfigError
from product_percolation.graphs.encoding import parse_vertex
from product_percolation.graphs.spec import GraphSpec
from product_percolation.utils.pool import default_threads

TOP_LEVEL_KEYS = ("experiment", "seed", "threads", "graph", "params", "output")
SEED_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class Param:
    """Declaration of one experiment parameter."""

    name: str
    kind: str
    default: Any = None
    required: bool = False
    description: str = ""

    def coerce(self, value: Any) -> Any:
        try:
            return _COERCERS[self.kind](value)
        except ConfigError as e:
            raise ConfigError(f"Parameter {self.name!r}: {e}") from e
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Parameter {self.name!r} expects {self.kind}, got {value!r}") from e


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(value)
    if isinstance(value, float) and not value.is_integer():
        raise ValueError(value)
    return int(value)


def _as_float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError(value)
    return float(value)


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    raise ValueError(value)


def _as_list(value: Any) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    raise ValueError(value)


def _as_vertex(value: Any) -> str:
    text = str(value)
    parse_vertex(text)
    return text


_COERCERS = {
    "int": _as_int,
    "float": _as_float,
    "bool": _as_bool,
    "str": str,
    "ints": lambda v: [_as_int(x) for x in _as_list(v)],
    "floats": lambda v: [_as_float(x) for x in _as_list(v)],
    "vertex": _as_vertex,
    "vertices": lambda v: [_as_vertex(x) for x in _as_list(v)],
}


@dataclass
class GraphSection:
    """The `graph` block; empty for experiments that take no graph."""

    values: dict = field(default_factory=dict)

    @property
    def spec(self) -> Optional[GraphSpec]:
        if not self.values:
            return None
        return GraphSpec.from_mapping(self.values)

    @classmethod
    def from_mapping(cls, data: Any) -> "GraphSection":
        if data is None:
            return cls()
        if not isinstance(data, dict):
            raise ConfigError(f"graph must be a mapping, got {type(data).__name__}")
        return cls(GraphSpec.from_mapping(data).to_mapping())


@dataclass
class OutputSection:
    """Where results go; the summary is also printed to standard output."""

    csv_path: Optional[str] = None
    summary_path: Optional[str] = None


@dataclass
class ExperimentConfig:
    """One archived, replayable experiment."""

    experiment: str
    seed: int = 0
    threads: int = field(default_factory=default_threads)
    graph: GraphSection = field(default_factory=GraphSection)
    params: dict = field(default_factory=dict)
    output: OutputSection = field(default_factory=OutputSection)

    @classmethod
    def from_mapping(cls, data: Any) -> "ExperimentConfig":
        """Validate a raw mapping against the experiment registry."""
        from product_percolation.experiments import get_experiment

        if not isinstance(data, dict):
            raise ConfigError(f"Invalid configuration: expected a mapping, got {type(data).__name__}")
        for key in data:
            if key not in TOP_LEVEL_KEYS:
                raise ConfigError(f"Unknown configuration key: {key!r}")
        if "experiment" not in data:
            raise ConfigError("Configuration requires 'experiment'")

        experiment = get_experiment(str(data["experiment"]))
        seed = data.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= SEED_MAX:
            raise ConfigError(f"seed must be an integer in [0, 2^64), got {seed!r}")
        threads = data.get("threads", default_threads())
        if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
            raise ConfigError(f"threads must be a positive integer, got {threads!r}")

        graph = GraphSection.from_mapping(data.get("graph"))
        if experiment.needs_graph and graph.spec is None:
            raise ConfigError(f"Experiment {experiment.name!r} requires a 'graph' block")
        if not experiment.needs_graph and graph.values:
            raise ConfigError(f"Experiment {experiment.name!r} takes no 'graph' block")

        output_data = data.get("output") or {}
        if not isinstance(output_data, dict):
            raise ConfigError("output must be a mapping")
        try:
            output = OutputSection(**output_data)
        except TypeError as e:
            raise ConfigError(f"Invalid configuration parameters: {e}") from e

        return cls(
            experiment=experiment.name,
            seed=seed,
            threads=threads,
            graph=graph,
            params=experiment.resolve_params(data.get("params") or {}),
            output=output,
        )

    @classmethod
    def from_yaml(cls, yaml_path: str) -> "ExperimentConfig":
        """Load configuration from a YAML file with validation."""
        with open(yaml_path, "r", encoding="utf-8") as f:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError(f"Malformed YAML in {yaml_path}: {e}") from e
        return cls.from_mapping(data)

    @classmethod
    def from_sections(cls, path: str) -> "ExperimentConfig":
        """Load the `[section]` / `key = value` form; values are read as YAML scalars."""
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str  # type: ignore[assignment,method-assign]
        try:
            with open(path, "r", encoding="utf-8") as f:
                parser.read_file(f)
        except configparser.Error as e:
            raise ConfigError(f"Malformed configuration file {path}: {e}") from e

        data: dict = {}
        for section in parser.sections():
            values = {k: yaml.safe_load(v) for k, v in parser.items(section)}
            if section == "experiment":
                data.update(values)
            elif section in ("graph", "params", "output"):
                data[section] = values
            else:
                raise ConfigError(f"Unknown configuration section: [{section}]")
        return cls.from_mapping(data)

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        if Path(path).suffix.lower() in (".cfg", ".ini"):
            return cls.from_sections(path)
        return cls.from_yaml(path)

    @classmethod
    def default(cls, experiment: str) -> "ExperimentConfig":
        """Configuration with every parameter at its default; required ones get their example value."""
        from product_percolation.experiments import get_experiment

        entry = get_experiment(experiment)
        return cls.from_mapping(entry.example())

    def with_overrides(self, assignments: list[str]) -> "ExperimentConfig":
        """Apply `KEY=VALUE` parameter overrides; values are parsed as YAML."""
        data = self.to_mapping()
        for assignment in assignments:
            if "=" not in assignment:
                raise ConfigError(f"Override must look like KEY=VALUE, got {assignment!r}")
            key, raw = (part.strip() for part in assignment.split("=", 1))
            value = yaml.safe_load(raw) if raw else None
            if key.startswith("graph."):
                data.setdefault("graph", {})[key[len("graph."):]] = value
            else:
                data["params"][key] = value
        return ExperimentConfig.from_mapping(data)

    def to_mapping(self) -> dict:
        data: dict = {
            "experiment": self.experiment,
            "seed": self.seed,
            "threads": self.threads,
            "params": dict(self.params),
        }
        if self.graph.values:
            data["graph"] = dict(self.graph.values)
        output = {k: v for k, v in vars(self.output).items() if v is not None}
        if output:
            data["output"] = output
        return data

    def identity(self) -> dict:
        """The part of the configuration that determines results (no threads, no paths)."""
        data = {"experiment": self.experiment, "seed": self.seed, "params": self.params}
        if self.graph.values:
            data["graph"] = self.graph.values
        return data

    def config_hash(self) -> str:
        canonical = json.dumps(self.identity(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_yaml(self, yaml_path: str) -> None:
        """Save configuration to a YAML file."""
        with open(yaml_path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_mapping(), f, default_flow_style=False, sort_keys=False)
