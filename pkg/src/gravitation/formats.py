"""Deterministic text formatting and file hashing shared by the exporters."""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable


def fmt(value: float) -> str:
    """Format a float with 17 significant digits (round-trips exactly)."""
    return format(float(value), ".17g")


def write_csv(path: Path | str, header: str, rows: Iterable[str]) -> Path:
    """Write a CSV file with a fixed header and pre-formatted rows."""
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")
    return path


def file_sha256(path: Path | str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
