"""Output writers."""

from product_percolation.outputs.summary import (
    SCHEMA_VERSION,
    SummaryWriter,
    load_summary,
    render_csv,
    summary_schema,
    validate_summary,
)

__all__ = [
    "SCHEMA_VERSION",
    "SummaryWriter",
    "load_summary",
    "render_csv",
    "summary_schema",
    "validate_summary",
]
