"""OEIS b-files: ``<index> <value>`` per line, ``#`` comments allowed."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .errors import CacheFormatError


def format_bfile(values: Iterable[int], offset: int = 0) -> str:
    return "".join(f"{i} {v}\n" for i, v in enumerate(values, start=offset))


def read_bfile(path) -> dict[int, int]:
    """Parse a b-file into {index: value}; malformed lines raise CacheFormatError."""
    path = Path(path)
    out: dict[int, int] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise CacheFormatError(path, lineno, "expected '<index> <value>'")
            try:
                idx, val = int(parts[0]), int(parts[1])
            except ValueError:
                raise CacheFormatError(path, lineno, "index and value must be integers") from None
            if idx in out:
                raise CacheFormatError(path, lineno, f"index {idx} repeated")
            out[idx] = val
    return out


def first_mismatch(values: list[int], reference: dict[int, int]) -> int | None:
    """Smallest shared index where the values differ, else None."""
    for i, v in enumerate(values):
        if i in reference and reference[i] != v:
            return i
    return None
