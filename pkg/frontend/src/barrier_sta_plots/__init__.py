"""Offline figure generation for barrier-sta trajectory CSV files."""

from .csvio import EXPECTED_COLUMNS, SchemaError, TrajectoryTable, read_trajectory
from .render import KINDS, PlotSpec, build_figure, render

__version__ = "0.1.0"

__all__ = [
    "EXPECTED_COLUMNS", "SchemaError", "TrajectoryTable", "read_trajectory",
    "KINDS", "PlotSpec", "build_figure", "render",
]
