# Reports package initialization
"""
CSV and JSON exports and SVG plots of scenario results.
"""

from .export import (
    write_frame,
    write_series,
    write_profiles,
    write_steady,
    write_hopf,
    write_roots,
    write_summary,
    write_diagnostic,
)
from .plots import LinePlot, PlotBundle, emit_plots
