"""Reader for the simulator's trajectory CSV schema.

The expected header is fixed; a file whose header deviates is rejected
with the missing column named. Empty fields (undefined perturbation rate
on step edges, Lyapunov value outside dynamic mode) become NaN so they
render as gaps.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

EXPECTED_COLUMNS = ("t", "s", "u", "v", "k1", "k2", "mode", "d", "delta", "V_out")


class SchemaError(ValueError):
    """The CSV does not match the trajectory schema."""


@dataclass(frozen=True)
class TrajectoryTable:
    path: Path
    t: np.ndarray
    s: np.ndarray
    u: np.ndarray
    v: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    mode: np.ndarray
    d: np.ndarray
    delta: np.ndarray
    v_out: np.ndarray

    def __len__(self) -> int:
        return len(self.t)


def _parse(value: str) -> float:
    return math.nan if value == "" else float(value)


def read_trajectory(path) -> TrajectoryTable:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None

        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column {missing[0]!r}")
        if header != EXPECTED_COLUMNS:
            raise SchemaError(
                f"{path}: header {','.join(header)!r} does not match the "
                f"trajectory schema {','.join(EXPECTED_COLUMNS)!r}"
            )

        columns = [[] for _ in EXPECTED_COLUMNS]
        for row in reader:
            if len(row) != len(EXPECTED_COLUMNS):
                raise SchemaError(f"{path}: row with {len(row)} fields")
            for col, value in zip(columns, row):
                col.append(_parse(value))

    if not columns[0]:
        raise SchemaError(f"{path}: no data rows")

    arrays = [np.asarray(col, dtype=float) for col in columns]
    return TrajectoryTable(path, *arrays)
