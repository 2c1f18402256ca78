"""Figure rendering for dualsat sweep CSVs."""

from .io import read_samples, read_sweep, se_crossing, SchemaError
from .plots import KINDS, LEGEND_NAMES, PlotSpec, render

__version__ = "0.1.0"
