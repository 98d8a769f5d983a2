from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from aniso_swarm.dynamics.models import ParticleState

FLOAT_FORMAT = ".17g"


def format_value(value: object) -> str:
    """17 significant digits for floats, so every float64 reads back unchanged."""
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return path


def snapshot_name(time: float) -> str:
    """``snapshot_<t>.csv`` with six decimals when they give ``t`` back exactly, else 17 significant digits.

    Distinct times always get distinct names.
    """
    stamp = f"{time:012.6f}"
    if float(stamp) != time:
        stamp = format(time, FLOAT_FORMAT)
    return f"snapshot_{stamp}.csv"


def write_snapshot(directory: Path, state: ParticleState) -> Path:
    return write_rows(directory / snapshot_name(state.time), ("x", "y"), state.positions.tolist())


def read_snapshot(path: Path) -> np.ndarray:
    with path.open(newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ["x", "y"]:
            raise ValueError(f"{path} is not a snapshot file, header is {header}")
        return np.array([[float(x), float(y)] for x, y in reader], dtype=float).reshape(-1, 2)
