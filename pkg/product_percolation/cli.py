"""Command-line interface for product-percolation."""

import argparse
import logging
import sys
from typing import Optional

from product_percolation.config import ExperimentConfig
from product_percolation.core import ExperimentRunner, replay_check
from product_percolation.errors import ConfigError, PercolationLabError, PopulationCapError
from product_percolation.experiments import EXPERIMENTS, get_experiment
from product_percolation.outputs.summary import SummaryWriter

EXIT_OK = 0
EXIT_REPLAY_MISMATCH = 1
EXIT_CONFIG = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="product-percolation",
        description="Product Percolation - seeded percolation experiments on graphs and their products with Z",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Run an experiment; the JSON summary goes to standard output
  product-percolation run trichotomy.yaml

  # Override parameters, seed and threads from the command line
  product-percolation run green.yaml --set d=4 --seed 7 --threads 4

  # Write the CSV table and the summary to files
  product-percolation run growth.yaml --csv out/growth.csv --summary out/growth.json

  # Show the parameters and CSV columns of an experiment
  product-percolation describe offspring

  # Check that a stored summary is reproduced by its configuration
  product-percolation replay-check out/growth.json growth.yaml

  # Generate a default config file
  product-percolation --generate-config trichotomy trichotomy.yaml

Exit codes: 0 success, 1 replay mismatch, 2 invalid configuration,
3 numerical non-convergence, 4 cap exceeded, 5 summary version mismatch.
        """,
    )
    parser.add_argument(
        "--generate-config",
        nargs=2,
        metavar=("EXPERIMENT", "PATH"),
        help="Generate a default configuration file for EXPERIMENT and exit",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress to standard error")

    commands = parser.add_subparsers(dest="command")

    run = commands.add_parser("run", help="Run the experiment described by a config file")
    run.add_argument("config", help="Path to a YAML (or [section] .cfg) configuration file")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="Override a parameter (repeatable); graph.KEY overrides the graph block")
    run.add_argument("--seed", type=int, help="Override the master seed")
    run.add_argument("--threads", type=int, help="Override the worker thread count")
    run.add_argument("--csv", help="Write the CSV table to this path")
    run.add_argument("--summary", help="Write the JSON summary to this path")
    run.add_argument("--output-root", help="Refuse output paths outside this directory")

    describe = commands.add_parser("describe", help="Describe an experiment's parameters and CSV columns")
    describe.add_argument("experiment", nargs="?", help="Experiment name (omit to list all)")

    replay = commands.add_parser("replay-check", help="Re-run a config and compare with a stored summary")
    replay.add_argument("summary", help="Path to a JSON summary")
    replay.add_argument("config", help="Path to the configuration that produced it")
    return parser


def _load_config(path: str) -> ExperimentConfig:
    try:
        return ExperimentConfig.load(path)
    except FileNotFoundError:
        raise ConfigError(f"Configuration file not found: {path}") from None


def _apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    config = config.with_overrides(args.set)
    if args.seed is not None:
        config.seed = args.seed
        config = ExperimentConfig.from_mapping(config.to_mapping())
    if args.threads is not None:
        config.threads = args.threads
    if args.csv:
        config.output.csv_path = args.csv
    if args.summary:
        config.output.summary_path = args.summary
    return config


def _run(args: argparse.Namespace) -> int:
    config = _apply_overrides(_load_config(args.config), args)
    runner = ExperimentRunner(config, output_root=args.output_root)
    result = runner.run()
    print(SummaryWriter.dumps(result.summary), end="")
    if result.aborted:
        raise PopulationCapError("Population cap exceeded; partial results were written")
    return EXIT_OK


def _describe(args: argparse.Namespace) -> int:
    if not args.experiment:
        for name in sorted(EXPERIMENTS):
            print(f"{name:20s} {EXPERIMENTS[name].description}")
        return EXIT_OK
    print(get_experiment(args.experiment).describe(), end="")
    return EXIT_OK


def _replay(args: argparse.Namespace) -> int:
    result = replay_check(args.summary, _load_config(args.config))
    if result.matches:
        print("Replay matches the stored summary")
        return EXIT_OK
    for line in result.diagnostics:
        print(f"Mismatch: {line}", file=sys.stderr)
    return EXIT_REPLAY_MISMATCH


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point for CLI."""
    parser = _build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        if args.generate_config:
            experiment, path = args.generate_config
            ExperimentConfig.default(experiment).to_yaml(path)
            print(f"Generated default configuration at: {path}")
            return EXIT_OK
        if args.command == "run":
            return _run(args)
        if args.command == "describe":
            return _describe(args)
        if args.command == "replay-check":
            return _replay(args)
    except PercolationLabError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    parser.print_help()
    print("\nError: a command is required", file=sys.stderr)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
