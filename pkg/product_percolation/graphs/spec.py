"""Declarative graph specifications and the insertion level recurrence."""

import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Mapping, Optional

from product_percolation.errors import ConfigError


class GraphKind(str, Enum):
    """Graph families that can be constructed."""

    REGULAR_TREE = "regular-tree"
    LATTICE = "lattice"
    TREE_WITH_LATTICE_INSERTIONS = "tree-with-lattice-insertions"
    STRETCHED_TREE = "stretched-tree"
    TREE_PLUS_RAY = "tree-plus-ray"
    LATTICE_JOIN_TREE = "lattice-join-tree"


# Parameters that carry meaning for each kind. `d` is the lattice dimension
# (for insertion kinds the tree degree is 4d), `degree` the tree degree.
_RELEVANT_FIELDS: dict[GraphKind, tuple[str, ...]] = {
    GraphKind.REGULAR_TREE: ("degree",),
    GraphKind.LATTICE: ("d",),
    GraphKind.TREE_WITH_LATTICE_INSERTIONS: ("d", "n0", "log_base"),
    GraphKind.STRETCHED_TREE: ("d", "n0", "log_base"),
    GraphKind.TREE_PLUS_RAY: ("degree",),
    GraphKind.LATTICE_JOIN_TREE: ("d", "degree"),
}

_TREE_KINDS = {GraphKind.REGULAR_TREE, GraphKind.TREE_PLUS_RAY, GraphKind.LATTICE_JOIN_TREE}
_INSERTION_KINDS = {GraphKind.TREE_WITH_LATTICE_INSERTIONS, GraphKind.STRETCHED_TREE}


def _parse_bool(value: object, key: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "yes", "1"):
        return True
    if text in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key} must be true or false, got {value!r}")


def _parse_int(value: object, key: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    try:
        number = float(value)  # type: ignore[arg-type]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from e
    if not number.is_integer():
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(number)


@dataclass(frozen=True)
class GraphSpec:
    """Immutable description of an infinite graph construction.

    `product=True` denotes the product of the base graph with the line ℤ.
    Nesting deeper than one product is not representable.
    """

    kind: GraphKind
    d: int = 1
    n0: int = 1
    degree: int = 3
    product: bool = False
    log_base: float = math.e

    def __post_init__(self) -> None:
        if not isinstance(self.kind, GraphKind):
            try:
                object.__setattr__(self, "kind", GraphKind(self.kind))
            except ValueError as e:
                raise ConfigError(f"Unknown graph kind: {self.kind!r}") from e

        if self.kind in _TREE_KINDS and self.degree < 3:
            raise ConfigError(f"Tree degree must be >= 3, got {self.degree}")
        if self.kind not in (GraphKind.REGULAR_TREE, GraphKind.TREE_PLUS_RAY) and self.d < 1:
            raise ConfigError(f"Dimension d must be >= 1, got {self.d}")
        if self.kind in _INSERTION_KINDS:
            if self.n0 < 1:
                raise ConfigError(f"n0 must be >= 1, got {self.n0}")
            if self.log_base <= 1.0:
                raise ConfigError(f"log_base must exceed 1, got {self.log_base}")

    @classmethod
    def regular_tree(cls, degree: int) -> "GraphSpec":
        return cls(GraphKind.REGULAR_TREE, degree=degree)

    @classmethod
    def lattice(cls, d: int) -> "GraphSpec":
        return cls(GraphKind.LATTICE, d=d)

    @classmethod
    def tree_with_insertions(cls, d: int, n0: int, log_base: float = math.e) -> "GraphSpec":
        return cls(GraphKind.TREE_WITH_LATTICE_INSERTIONS, d=d, n0=n0, log_base=log_base)

    @classmethod
    def stretched_tree(cls, d: int, n0: int, log_base: float = math.e) -> "GraphSpec":
        return cls(GraphKind.STRETCHED_TREE, d=d, n0=n0, log_base=log_base)

    @classmethod
    def tree_plus_ray(cls, degree: int = 3) -> "GraphSpec":
        return cls(GraphKind.TREE_PLUS_RAY, degree=degree)

    @classmethod
    def lattice_join_tree(cls, lattice_dim: int = 99, tree_degree: int = 10) -> "GraphSpec":
        return cls(GraphKind.LATTICE_JOIN_TREE, d=lattice_dim, degree=tree_degree)

    def with_line(self) -> "GraphSpec":
        """Return the product of this graph with ℤ."""
        if self.product:
            raise ConfigError("Product with the line may only be taken once")
        return replace(self, product=True)

    def base(self) -> "GraphSpec":
        """Return the spec without the ℤ factor."""
        return replace(self, product=False)

    @property
    def tree_degree(self) -> int:
        """Degree of the underlying regular tree, if any."""
        if self.kind in _INSERTION_KINDS:
            return 4 * self.d
        return self.degree

    def relevant_items(self) -> list[tuple[str, object]]:
        """Key/value pairs that identify this spec, in canonical order."""
        items: list[tuple[str, object]] = [("kind", self.kind.value)]
        for name in _RELEVANT_FIELDS[self.kind]:
            if name == "log_base" and self.log_base == math.e:
                continue
            items.append((name, getattr(self, name)))
        items.append(("product", self.product))
        return items

    def to_mapping(self) -> dict:
        return {k: v for k, v in self.relevant_items()}

    def to_text(self) -> str:
        """Serialize to the line-oriented key=value block."""
        lines = []
        for key, value in self.relevant_items():
            if isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"

    def to_line(self) -> str:
        """Single-line form of `to_text`, used in file headers."""
        return ";".join(self.to_text().split())

    def describe(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.relevant_items()[1:-1])
        text = f"{self.kind.value}({params})"
        return text + "×Z" if self.product else text

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "GraphSpec":
        """Build a spec from a mapping, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"Unknown graph key: {key!r}")
        if "kind" not in data:
            raise ConfigError("Graph specification requires 'kind'")

        kwargs: dict = {"kind": data["kind"]}
        for key in ("d", "n0", "degree"):
            if key in data:
                kwargs[key] = _parse_int(data[key], key)
        if "product" in data:
            kwargs["product"] = _parse_bool(data["product"], "product")
        if "log_base" in data:
            try:
                kwargs["log_base"] = float(data["log_base"])  # type: ignore[arg-type]
            except (TypeError, ValueError) as e:
                raise ConfigError(f"log_base must be a number, got {data['log_base']!r}") from e

        kind = kwargs["kind"]
        if kind in (GraphKind.LATTICE_JOIN_TREE, GraphKind.LATTICE_JOIN_TREE.value):
            kwargs.setdefault("d", 99)
            kwargs.setdefault("degree", 10)
        return cls(**kwargs)

    @classmethod
    def from_text(cls, text: str) -> "GraphSpec":
        """Parse the key=value block written by `to_text` (or `to_line`)."""
        data: dict[str, str] = {}
        for raw in text.replace(";", "\n").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"Malformed graph line: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in data:
                raise ConfigError(f"Duplicate graph key: {key!r}")
            data[key] = value
        return cls.from_mapping(data)


def _scaled_log(x: float, base: float) -> float:
    if base == 2.0:
        return math.log2(x)
    if base == 10.0:
        return math.log10(x)
    return math.log(x) / math.log(base)


def level_sequence(d: int, n_max: int, log_base: float = math.e) -> list[int]:
    """Return l_1..l_nMax with l_1 = 1 and l_{n+1} = l_n + ceil(d² log(n+1))."""
    if d < 1 or n_max < 1:
        raise ConfigError(f"level_sequence needs d >= 1 and nMax >= 1, got d={d}, nMax={n_max}")
    levels = [1]
    for n in range(1, n_max):
        gap = d * d * _scaled_log(n + 1, log_base)
        nearest = round(gap)
        if abs(gap - nearest) < 1e-9:
            gap = float(nearest)
        levels.append(levels[-1] + math.ceil(gap))
    return levels


def insertion_spec(spec: GraphSpec) -> Optional[GraphSpec]:
    """Return the base spec if it is an insertion family, otherwise None."""
    base = spec.base()
    return base if base.kind in _INSERTION_KINDS else None
