"""Experiment runner: seeded execution, structured outputs and replay checks."""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from product_percolation import __version__
from product_percolation.config import ExperimentConfig
from product_percolation.errors import ReplayVersionError
from product_percolation.experiments import get_experiment
from product_percolation.outputs.summary import SummaryWriter, load_summary, render_csv
from product_percolation.utils.file_utils import resolve_output_path
from product_percolation.utils.pool import ReplicaPool

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """Outcome of one experiment run."""

    summary: dict
    csv_text: str
    aborted: bool
    csv_path: str = ""
    summary_path: str = ""
    elapsed_seconds: float = 0.0


@dataclass
class ReplayResult:
    matches: bool
    diagnostics: list[str] = field(default_factory=list)


class ExperimentRunner:
    """Runs one configured experiment and writes its outputs."""

    def __init__(self, config: ExperimentConfig, output_root: Optional[str] = None):
        self.config = config
        self.experiment = get_experiment(config.experiment)
        self.pool = ReplicaPool(config.threads)
        self.csv_path = self._resolve(config.output.csv_path, output_root)
        self.summary_path = self._resolve(config.output.summary_path, output_root)
        self.writer = SummaryWriter(__version__, self.csv_path, self.summary_path)

    @staticmethod
    def _resolve(path: Optional[str], root: Optional[str]) -> Optional[str]:
        if not path:
            return None
        return resolve_output_path(path, root) if root else path

    def execute(self) -> RunResult:
        """Run the experiment without touching the file system."""
        logger.info(
            "Running %s (seed %d, %d threads, config %s)",
            self.experiment.name, self.config.seed, self.pool.threads, self.config.config_hash()[:12],
        )
        started = time.perf_counter()
        outcome = self.experiment.runner(self.config, self.pool)
        elapsed = time.perf_counter() - started
        summary = self.writer.build(
            experiment=self.experiment.name,
            config_hash=self.config.config_hash(),
            seed=self.config.seed,
            config=self.config.identity(),
            results=outcome.results,
            aborted=outcome.aborted,
            columns=self.experiment.columns,
            row_count=len(outcome.rows),
        )
        logger.info("Finished %s in %.2fs (%d rows)", self.experiment.name, elapsed, len(outcome.rows))
        if outcome.aborted:
            logger.warning("Experiment %s hit its population cap; results are partial", self.experiment.name)
        return RunResult(
            summary=summary,
            csv_text=render_csv(self.experiment.columns, outcome.rows),
            aborted=outcome.aborted,
            elapsed_seconds=elapsed,
        )

    def run(self) -> RunResult:
        """Run the experiment and write the configured CSV and summary files."""
        result = self.execute()
        if self.csv_path:
            result.csv_path = self.writer.write_csv_text(result.csv_text)
        result.summary_path = self.writer.write_summary(result.summary)
        return result


def replay_check(summary_path: str, config: ExperimentConfig) -> ReplayResult:
    """Re-run `config` and compare with a stored summary.

    Raises ReplayVersionError when the summary comes from another artifact version.
    """
    stored = load_summary(summary_path)
    if stored["artifact_version"] != __version__:
        raise ReplayVersionError(
            f"Summary was written by version {stored['artifact_version']}, this is {__version__}"
        )

    diagnostics = []
    if stored["experiment"] != config.experiment:
        diagnostics.append(f"experiment differs: summary {stored['experiment']!r}, config {config.experiment!r}")
    if stored["seed"] != config.seed:
        diagnostics.append(f"seed differs: summary {stored['seed']}, config {config.seed}")
    stored_params = stored["config"].get("params", {})
    for key in sorted(set(stored_params) | set(config.params)):
        if stored_params.get(key) != config.params.get(key):
            label = "replica count" if key == "replicas" else f"parameter {key!r}"
            diagnostics.append(f"{label} differs: summary {stored_params.get(key)!r}, config {config.params.get(key)!r}")
    if stored["config_hash"] != config.config_hash():
        diagnostics.append("config hash differs")
    if diagnostics:
        return ReplayResult(False, diagnostics)

    fresh = ExperimentRunner(config).execute()
    if fresh.summary["results"] != stored["results"]:
        diagnostics.append("results differ from the stored summary")
    if fresh.summary["aborted"] != stored["aborted"]:
        diagnostics.append("abort flag differs from the stored summary")
    return ReplayResult(not diagnostics, diagnostics)
