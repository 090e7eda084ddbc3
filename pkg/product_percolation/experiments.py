"""Registry of runnable experiments: parameters, CSV columns and runners."""

import copy
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from product_percolation.analytics import (
    cheeger_profile,
    green0,
    green2,
    remco_bound,
    simulated_green0,
    volume_growth_profile,
)
from product_percolation.branching import (
    OffspringLawU,
    dominance_test,
    expected_returns_series,
    extinction_probability,
    offspring_simulation,
    simulate_brw,
    simulate_tree_brw,
    survival_probability,
    tree_brw_expected_returns,
)
from product_percolation.clusters import (
    annulus_escape_events,
    boundary_cluster_count,
    boundary_cluster_profile,
    find_bounded_cutset,
    verify_cutset,
)
from product_percolation.config import ExperimentConfig, Param
from product_percolation.errors import ConfigError
from product_percolation.graphs import (
    DEFAULT_VERTEX_CAP,
    GraphSpec,
    format_vertex,
    origin,
    parse_vertex,
    validate_vertex,
)
from product_percolation.percolation import crossing_sweep, estimate_pc, percolation_probability, two_point_estimate
from product_percolation.percolation.rng import child_seed
from product_percolation.utils.pool import ReplicaPool

logger = logging.getLogger(__name__)

CAP = Param("cap", "int", DEFAULT_VERTEX_CAP, description="vertex cap for window exploration")


@dataclass
class Outcome:
    """What a runner hands back: JSON results, CSV rows, and the abort flag."""

    results: dict
    rows: list
    aborted: bool = False


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    params: tuple[Param, ...]
    columns: tuple[str, ...]
    runner: Callable[[ExperimentConfig, ReplicaPool], Outcome]
    needs_graph: bool = True
    example_graph: Optional[dict] = None
    example_params: dict = field(default_factory=dict)

    def param(self, name: str) -> Param:
        for declared in self.params:
            if declared.name == name:
                return declared
        raise ConfigError(f"Unknown parameter {name!r} for experiment {self.name!r}")

    def resolve_params(self, raw: Any) -> dict:
        """Apply defaults and coerce types; unknown or missing required keys raise ConfigError."""
        if not isinstance(raw, dict):
            raise ConfigError(f"params must be a mapping, got {type(raw).__name__}")
        for key in raw:
            self.param(key)
        resolved = {}
        for declared in self.params:
            value = raw.get(declared.name)
            if value is not None:
                resolved[declared.name] = declared.coerce(value)
            elif declared.required:
                raise ConfigError(f"Experiment {self.name!r} requires parameter {declared.name!r}")
            else:
                resolved[declared.name] = copy.deepcopy(declared.default)
        return resolved

    def example(self) -> dict:
        data: dict = {"experiment": self.name, "seed": 1, "params": dict(self.example_params)}
        if self.needs_graph:
            data["graph"] = dict(self.example_graph or {"kind": "lattice", "d": 2})
        return data

    def describe(self) -> str:
        lines = [f"{self.name}: {self.description}", ""]
        lines.append("graph block: " + ("required" if self.needs_graph else "not used"))
        lines.append("")
        lines.append("parameters:")
        for declared in self.params:
            status = "required" if declared.required else f"default {declared.default!r}"
            lines.append(f"  {declared.name} ({declared.kind}, {status}): {declared.description}")
        lines.append("")
        lines.append("CSV columns: " + ",".join(self.columns))
        return "\n".join(lines) + "\n"


def _spec(config: ExperimentConfig) -> GraphSpec:
    spec = config.graph.spec
    if spec is None:
        raise ConfigError(f"Experiment {config.experiment!r} requires a 'graph' block")
    return spec


def _vertex(spec: GraphSpec, text: Optional[str]):
    if text is None:
        return origin(spec)
    v = parse_vertex(text)
    validate_vertex(spec, v)
    return v


def run_growth(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    profile = volume_growth_profile(_spec(config), params["r_max"], params["method"], params["cap"])
    last = len(profile.volumes) - 1
    results = {
        "r_max": params["r_max"],
        "method": profile.method,
        "truncated": profile.truncated,
        "volume": profile.volumes[-1],
        "rate": profile.rate(last) if last >= 1 else None,
        "normalized": profile.normalized(last) if last >= 2 else None,
    }
    return Outcome(results, profile.rows())


def run_cheeger(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    points = cheeger_profile(_spec(config), config.params["radii"], config.params["cap"])
    rows = [(pt.radius, pt.volume, pt.edge_boundary, pt.ratio) for pt in points]
    return Outcome({"min_ratio": min(pt.ratio for pt in points)}, rows)


def run_percolate(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    spec = _spec(config)
    center = _vertex(spec, params["center"])
    estimates = [
        percolation_probability(
            spec, p, params["radius"], params["replicas"], config.seed, center, pool, params["cap"]
        )
        for p in params["p_values"]
    ]
    rows = [(e.p, e.estimate, e.stderr) for e in estimates]
    return Outcome({"estimates": [e.to_dict() for e in estimates]}, rows)


def run_trichotomy(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    spec = _spec(config)
    center = _vertex(spec, params["center"])
    report = boundary_cluster_count(
        spec, params["r"], params["R"], params["p"], params["replicas"], config.seed,
        center, params["trifurcation_replicas"], pool, params["cap"],
    )
    rows = [(report.outer_radius, k, f) for k, f in report.histogram_rows()]
    results = report.to_dict()
    if params["profile_radii"]:
        profile = boundary_cluster_profile(
            spec, params["r"], params["profile_radii"], params["p"], params["replicas"], config.seed,
            center, pool, params["cap"],
        )
        means = [rep.mean_count for rep in profile]
        results["profile"] = [
            {"R": rep.outer_radius, "mean_count": rep.mean_count, "stderr": rep.stderr} for rep in profile
        ]
        results["profile_non_increasing"] = all(a >= b for a, b in zip(means, means[1:]))
        for rep in profile:
            rows.extend((rep.outer_radius, k, f) for k, f in rep.histogram_rows())
    return Outcome(results, rows)


def run_twopoint(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    spec = _spec(config)
    x = _vertex(spec, params["x"])
    y = _vertex(spec, params["y"])
    estimate = two_point_estimate(
        spec, x, y, params["p"], params["window_radius"], params["replicas"], config.seed, pool, params["cap"]
    )
    rows = [(format_vertex(x), format_vertex(y), params["p"], estimate.estimate, estimate.stderr)]
    return Outcome(estimate.to_dict(), rows)


def run_brw(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    spec = _spec(config)
    start = _vertex(spec, params["start"])

    def replica(index: int):
        return simulate_brw(
            spec, start, params["p"], params["max_t"], params["population_cap"],
            child_seed(config.seed, "brw-replica", index), params["window"], params["height"],
        )

    trajectories = pool.map(replica, range(params["replicas"]))
    rows = [
        (i, tr.returns_to_start, tr.final_population, len(tr.visited), tr.aborted)
        for i, tr in enumerate(trajectories)
    ]
    aborted = sum(1 for tr in trajectories if tr.aborted)
    results = {
        "spec": spec.to_mapping(),
        "p": params["p"],
        "maxT": params["max_t"],
        "cap": params["population_cap"],
        "window": params["window"],
        "mean_returns": float(np.mean([tr.returns_to_start for tr in trajectories])),
        "aborted_replicas": aborted,
        "trajectories": [tr.to_dict() for tr in trajectories],
    }
    return Outcome(results, rows, aborted > 0)


def run_tree_brw(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    report = simulate_tree_brw(
        params["degree"], params["step_prob"], params["stay_prob"], params["max_t"],
        params["replicas"], config.seed, params["population_cap"], pool,
    )
    exact = tree_brw_expected_returns(params["degree"], params["step_prob"], params["stay_prob"], params["max_t"])
    rows = [(t + 1, m, float(e)) for t, (m, e) in enumerate(zip(report.partial_means, exact))]
    results = report.to_dict()
    results["exactReturns"] = float(exact[-1])
    return Outcome(results, rows, report.aborted > 0)


def run_offspring(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    sample = offspring_simulation(
        params["d"], params["n"], params["p"], params["replicas"], config.seed,
        params["window"], params["height"], params["n0"], pool, params["cap"],
    )
    law = OffspringLawU(params["c"])
    dominance = dominance_test(sample.counts, law, params["confidence"])
    survival = survival_probability(
        law, params["generations"], params["gw_replicas"], child_seed(config.seed, "galton-watson")
    )
    results = {
        "crossings": sample.to_dict(),
        "law": law.to_dict(),
        "dominance": dominance.to_dict(),
        "survival": survival.to_dict(),
        "extinction_probability": extinction_probability(law),
    }
    return Outcome(results, sample.histogram_rows())


def run_transience_series(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    series = expected_returns_series(config.params["d"], config.params["t_max"])
    return Outcome(series.to_dict(), series.rows())


def run_green(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    d = params["d"]
    g0 = green0(d, params["order"], params["panels_per_octave"])
    results: dict = {"d": d, "green0": g0.to_dict()}
    rows: list = [("green0", g0.value, g0.abs_error)]
    if d > 4:
        g2 = green2(d, params["order"], params["panels_per_octave"])
        results["green2"] = g2.to_dict()
        rows.append(("green2", g2.value, g2.abs_error))
    if params["walks"] > 0:
        simulated = simulated_green0(d, params["walks"], params["steps"], config.seed)
        results["simulated"] = simulated.to_dict()
        rows.append(("simulated_green0", simulated.value, simulated.stderr))
    return Outcome(results, rows)


def run_remco(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    reports = [remco_bound(d, config.params["o_beta_constant"]) for d in config.params["d_values"]]
    rows = [
        (r.d, r.g0, r.g2, r.cs_bound, r.direct_value, r.cs_holds, r.final_bound, r.sqrt_d_times_bound)
        for r in reports
    ]
    results = {
        "reports": [r.to_dict() for r in reports],
        "all_cs_hold": all(r.cs_holds for r in reports),
        "max_sqrt_d_times_bound": max(r.sqrt_d_times_bound for r in reports),
    }
    return Outcome(results, rows)


def run_cutset(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    spec = _spec(config)
    target = [_vertex(spec, text) for text in params["target"]]
    search = find_bounded_cutset(spec, target, params["K"], params["search_radius"], params["cap"])
    results = search.to_dict()
    rows: list = []
    if search.certificate is not None:
        verify_radius = params["verify_radius"] or params["search_radius"] + 2
        verdict = verify_cutset(spec, target, search.certificate.cut_edges, verify_radius, params["K"], params["cap"])
        results["verdict"] = verdict.name
        rows = sorted((format_vertex(u), format_vertex(v)) for u, v in search.certificate.cut_edges)
    return Outcome(results, rows)


def run_pc_estimate(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    spec = _spec(config)
    bracket = params["bracket"]
    if len(bracket) != 2:
        raise ConfigError(f"bracket needs two values, got {bracket}")
    pc = estimate_pc(spec, params["L"], params["tolerance"], config.seed, params["replicas"], tuple(bracket), pool)
    rows = []
    if params["sweep"]:
        sweep = crossing_sweep(spec, params["L"], params["sweep"], params["replicas"], config.seed, pool)
        rows = [(e.p, e.estimate, e.stderr) for e in sweep]
    return Outcome(pc.to_dict(), rows)


def run_annulus(config: ExperimentConfig, pool: ReplicaPool) -> Outcome:
    params = config.params
    spec = _spec(config)
    base = spec.base()
    v = _vertex(base, params["v"])
    report = annulus_escape_events(
        base, v, params["p"], params["radii"], params["L"], params["replicas"], config.seed,
        params["height"], pool, params["cap"],
    )
    return Outcome(report.to_dict(), report.rows())


_INSERTIONS_X_Z = {"kind": "tree-with-lattice-insertions", "d": 1, "n0": 1, "product": True}

EXPERIMENTS: dict[str, Experiment] = {
    e.name: e
    for e in (
        Experiment(
            "growth",
            "ball volumes |B(r)| around the root with g(r)/r and g(r)/(sqrt(r) log r)",
            (
                Param("r_max", "int", 60, description="largest radius"),
                Param("method", "str", "exact", description="'exact' (closed-form spheres) or 'bfs'"),
                CAP,
            ),
            ("r", "volume", "rate", "normalized"),
            run_growth,
            example_graph={"kind": "tree-with-lattice-insertions", "d": 2, "n0": 1},
        ),
        Experiment(
            "cheeger",
            "edge boundary over volume of balls, an upper bound on the Cheeger constant",
            (Param("radii", "ints", required=True, description="ball radii"), CAP),
            ("r", "volume", "edge_boundary", "ratio"),
            run_cheeger,
            example_params={"radii": [1, 2, 3, 4]},
        ),
        Experiment(
            "percolate",
            "probability that the centre is joined to the boundary of its ball",
            (
                Param("p_values", "floats", required=True, description="edge probabilities"),
                Param("radius", "int", required=True, description="window radius"),
                Param("replicas", "int", 1000, description="independent samples per p"),
                Param("center", "vertex", description="window centre (default: origin)"),
                CAP,
            ),
            ("p", "estimate", "stderr"),
            run_percolate,
            example_params={"p_values": [0.4, 0.5, 0.6], "radius": 8},
        ),
        Experiment(
            "trichotomy",
            "number of clusters joining ball(r) to the boundary of ball(R)",
            (
                Param("p", "float", required=True, description="edge probability"),
                Param("r", "int", required=True, description="inner radius"),
                Param("R", "int", required=True, description="outer radius"),
                Param("replicas", "int", 1000, description="independent samples"),
                Param("center", "vertex", description="window centre (default: origin)"),
                Param("trifurcation_replicas", "int", 0, description="replicas that also count trifurcations"),
                Param("profile_radii", "ints", [], description="extra outer radii sampled on one coupled window"),
                CAP,
            ),
            ("R", "count", "frequency"),
            run_trichotomy,
            example_params={"p": 0.7, "r": 4, "R": 32},
        ),
        Experiment(
            "twopoint",
            "two-point function P(x <-> y) in a window",
            (
                Param("x", "vertex", required=True, description="first vertex"),
                Param("y", "vertex", required=True, description="second vertex"),
                Param("p", "float", required=True, description="edge probability"),
                Param("window_radius", "int", required=True, description="radius of the window"),
                Param("replicas", "int", 1000, description="independent samples"),
                CAP,
            ),
            ("x", "y", "p", "estimate", "stderr"),
            run_twopoint,
            example_params={"x": "plain:0,0", "y": "plain:2,0", "p": 0.5, "window_radius": 6},
        ),
        Experiment(
            "brw",
            "the modified branching random walk (rules 1-3) on tree-with-lattice-insertions x Z",
            (
                Param("p", "float", required=True, description="emission probability"),
                Param("start", "vertex", description="starting vertex (default: origin)"),
                Param("max_t", "int", 20, description="generations"),
                Param("population_cap", "int", 100_000, description="abort threshold for the population"),
                Param("window", "int", 2, description="margin w of the copy box [-w, n+w]^d"),
                Param("height", "int", description="half-height of the copy box (default n + w)"),
                Param("replicas", "int", 1, description="independent trajectories"),
            ),
            ("replica", "returns", "final_population", "visited", "aborted"),
            run_brw,
            example_graph=_INSERTIONS_X_Z,
            example_params={"p": 0.2},
        ),
        Experiment(
            "tree-brw",
            "the dominating branching walk on a regular tree, tracked by distance from the start",
            (
                Param("degree", "int", 20, description="tree degree"),
                Param("step_prob", "float", 0.02, description="probability of a particle per neighbour"),
                Param("stay_prob", "float", 0.5, description="probability of an in-place particle"),
                Param("max_t", "int", 200, description="generations"),
                Param("replicas", "int", 1000, description="independent runs"),
                Param("population_cap", "int", 1_000_000, description="abort threshold for the population"),
            ),
            ("t", "mean_returns", "exact_returns"),
            run_tree_brw,
            needs_graph=False,
        ),
        Experiment(
            "offspring",
            "crossing count |Z| between consecutive insertion levels, against the law U",
            (
                Param("p", "float", required=True, description="edge probability"),
                Param("d", "int", 1, description="lattice dimension"),
                Param("n", "int", 2, description="crossing from level l_(n-1) to l_n"),
                Param("n0", "int", 1, description="first insertion index"),
                Param("replicas", "int", 1000, description="independent samples"),
                Param("window", "int", 2, description="margin w of the copy box"),
                Param("height", "int", description="half-height of the line window (default n + w)"),
                Param("c", "float", 1.0, description="parameter of the law U"),
                Param("confidence", "float", 0.99, description="confidence of the dominance band"),
                Param("generations", "int", 60, description="Galton-Watson generations"),
                Param("gw_replicas", "int", 10_000, description="Galton-Watson replicas"),
                CAP,
            ),
            ("count", "replicas", "frequency"),
            run_offspring,
            needs_graph=False,
            example_params={"p": 0.35},
        ),
        Experiment(
            "transience-series",
            "partial sums of the expected-returns bound of the dominating walk",
            (
                Param("d", "int", required=True, description="lattice dimension"),
                Param("t_max", "int", 2000, description="number of terms"),
            ),
            ("t", "partialSum"),
            run_transience_series,
            needs_graph=False,
            example_params={"d": 5},
        ),
        Experiment(
            "green",
            "lattice Green's function integrals, with an optional random-walk check",
            (
                Param("d", "int", required=True, description="dimension (>= 3)"),
                Param("order", "int", 32, description="Gauss-Legendre order per panel"),
                Param("panels_per_octave", "int", 1, description="geometric panel density"),
                Param("walks", "int", 0, description="simulated walks (0 skips the simulation)"),
                Param("steps", "int", 10_000, description="steps per simulated walk"),
            ),
            ("quantity", "value", "error"),
            run_green,
            needs_graph=False,
            example_params={"d": 3},
        ),
        Experiment(
            "remco",
            "Cauchy-Schwarz bound on the integral of D/(1-D) and the assembled final bound",
            (
                Param("d_values", "ints", required=True, description="dimensions (>= 6)"),
                Param("o_beta_constant", "float", 1.0, description="constant standing for 1 + O(beta)"),
            ),
            ("d", "g0", "g2", "cs_bound", "direct_value", "cs_holds", "final_bound", "sqrt_d_times_bound"),
            run_remco,
            needs_graph=False,
            example_params={"d_values": [6, 8, 10, 12]},
        ),
        Experiment(
            "cutset",
            "search and verify a bounded edge cutset around a target set",
            (
                Param("target", "vertices", required=True, description="vertices to confine"),
                Param("K", "int", required=True, description="largest admissible cutset"),
                Param("search_radius", "int", required=True, description="radius of the search window"),
                Param("verify_radius", "int", description="confinement radius (default search_radius + 2)"),
                CAP,
            ),
            ("u", "v"),
            run_cutset,
            example_graph={"kind": "lattice", "d": 1},
            example_params={"target": ["plain:0"], "K": 2, "search_radius": 3},
        ),
        Experiment(
            "pc-estimate",
            "critical probability of a lattice by bisection of left-right crossing frequencies",
            (
                Param("L", "int", required=True, description="box size"),
                Param("tolerance", "float", 0.005, description="width of the final bracket"),
                Param("replicas", "int", 10_000, description="crossing samples"),
                Param("bracket", "floats", [0.0, 1.0], description="initial bracket"),
                Param("sweep", "floats", [], description="p values for the crossing table"),
            ),
            ("p", "estimate", "stderr"),
            run_pc_estimate,
            example_params={"L": 32, "replicas": 2000},
        ),
        Experiment(
            "annulus",
            "shell-escape events E_i and F_i on a cylinder window of a product with Z",
            (
                Param("p", "float", required=True, description="edge probability"),
                Param("radii", "ints", required=True, description="increasing shell radii"),
                Param("L", "int", required=True, description="most distinct heights allowed in F_i"),
                Param("v", "vertex", description="base vertex (default: origin)"),
                Param("replicas", "int", 500, description="independent samples"),
                Param("height", "int", description="half-height of the fiber (default 2 * max radius)"),
                CAP,
            ),
            ("i", "Q", "E", "F"),
            run_annulus,
            example_graph={"kind": "regular-tree", "degree": 3, "product": True},
            example_params={"p": 0.4, "radii": [1, 2, 3], "L": 2},
        ),
    )
}


def get_experiment(name: str) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown experiment {name!r}; choose from {', '.join(sorted(EXPERIMENTS))}"
        ) from None
