"""JSON summaries and CSV tables for experiment runs."""

import csv
import io
import json
import logging
import math
from functools import lru_cache
from importlib import resources
from typing import Any, Iterable, Optional, Sequence

from jsonschema import Draft202012Validator

from product_percolation.errors import ConfigError
from product_percolation.utils.file_utils import write_text_file

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SCHEMA_RESOURCE = "summary.schema.json"


@lru_cache(maxsize=None)
def summary_schema() -> dict:
    """The versioned summary schema shipped next to this module."""
    text = resources.files("product_percolation.outputs").joinpath(SCHEMA_RESOURCE).read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator() -> Draft202012Validator:
    schema = summary_schema()
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


def _clean(value: Any) -> Any:
    """JSON-safe copy: non-finite floats become strings, tuples become lists."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _clean(value.item())
    return value


def _location(error) -> str:
    return "/".join(str(part) for part in error.absolute_path) or "<root>"


def validate_summary(data: Any) -> list[str]:
    """Problems found in a summary document; empty when it matches the schema."""
    errors = sorted(_validator().iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    return [f"{_location(error)}: {error.message}" for error in errors]


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with a header row; floats use their shortest round-trip repr."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"Row {row!r} does not match columns {list(columns)}")
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


class SummaryWriter:
    """Builds the JSON summary of one run and writes it with the CSV table."""

    def __init__(self, artifact_version: str, csv_path: Optional[str] = None, summary_path: Optional[str] = None):
        self.artifact_version = artifact_version
        self.csv_path = csv_path
        self.summary_path = summary_path

    def build(
        self,
        experiment: str,
        config_hash: str,
        seed: int,
        config: dict,
        results: dict,
        aborted: bool,
        columns: Sequence[str],
        row_count: int,
    ) -> dict:
        summary = {
            "schema_version": SCHEMA_VERSION,
            "artifact_version": self.artifact_version,
            "experiment": experiment,
            "config_hash": config_hash,
            "seed": seed,
            "config": _clean(config),
            "results": _clean(results),
            "aborted": aborted,
            "csv_path": self.csv_path,
            "csv_columns": list(columns),
            "csv_rows": row_count,
        }
        problems = validate_summary(summary)
        if problems:
            raise ConfigError(f"Summary does not match schema v{SCHEMA_VERSION}: {'; '.join(problems)}")
        return summary

    @staticmethod
    def dumps(summary: dict) -> str:
        return json.dumps(summary, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def write_csv_text(self, text: str) -> str:
        """Write the rendered CSV table and return its path, or "" if no path is configured."""
        if not self.csv_path:
            return ""
        write_text_file(self.csv_path, text)
        logger.info("Writing CSV table: %s", self.csv_path)
        return self.csv_path

    def write_summary(self, summary: dict) -> str:
        if not self.summary_path:
            return ""
        write_text_file(self.summary_path, self.dumps(summary))
        logger.info("Writing JSON summary: %s", self.summary_path)
        return self.summary_path


def load_summary(path: str) -> dict:
    """Read and schema-check a summary file."""
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Summary {path} is not valid JSON: {e}") from e
    problems = validate_summary(data)
    if problems:
        raise ConfigError(f"Summary {path} does not match schema v{SCHEMA_VERSION}: {'; '.join(problems)}")
    return data
