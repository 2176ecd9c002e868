"""LGL and CGL grids, dyadic grids built from them, and checks of their properties."""
from .errors import DomainError, RangeError, SolverError
from .orthopoly import LegendreEval, legendre_eval
from .grid_core import (
    CheckResult,
    EquivalenceReport,
    Grid,
    check_equivalence,
    check_monotone_symmetric,
    check_quasi_uniform,
    check_str,
    partition,
    stretch,
)
from .lgl import LglBounds, LglGrid, lgl_angle_bounds, lgl_grid, lgl_length_bounds, lgl_quotients
from .cgl import CglGrid, cgl_grid, cgl_interval_length, cgl_quotients
from .dyadic import (
    DyadicGrid,
    DyadicInterval,
    OverlapExtremals,
    check_closed_under_stretching,
    check_graded,
    check_nested,
    dyadic_refine,
    nested_dyadic_family,
    overlap_extremals,
    standalone_dyadic,
)
from .asymptotics import BesselZeros, bessel_j1_zeros, limit_gap, qhat
from .report import PropertyReport, from_json, to_csv, to_json

__version__ = "0.1.0"
