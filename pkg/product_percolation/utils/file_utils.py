"""File operation utilities."""

import os
from pathlib import Path
from typing import Optional


def ensure_directory_exists(file_path: str) -> None:
    """Ensure parent directory exists for a file path."""
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def resolve_output_path(path: str, root: Optional[str] = None) -> str:
    """Resolve an output path, refusing paths that escape `root` when one is given."""
    resolved = Path(root, path).resolve() if root else Path(path).resolve()
    if root:
        resolved_root = Path(root).resolve()
        if resolved != resolved_root and resolved_root not in resolved.parents:
            raise ValueError(f"Output path escapes output root: {path}")
    return str(resolved)


def write_text_file(path: str, text: str) -> str:
    """Write text with LF line endings, creating parent directories."""
    ensure_directory_exists(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path
