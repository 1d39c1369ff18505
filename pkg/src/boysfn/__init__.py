"""Global rational approximations to the Boys functions.

High-precision reference oracle, constrained minimax refitting of the
closed-form approximation, bit-exact coefficient datasets, and fast
branch-free evaluation kernels for double and single precision.
"""

from .refmath import (
    AnalyticConstants,
    CutoffTable,
    Precision,
    PrecisionError,
    ReferencePoint,
    boys_ref,
    boys_ref_cf,
    boys_ref_series,
    boys_downward,
    constants,
    cutoff_solve,
    cutoff_table,
    fig1_samples,
    fig1_tsv,
    q_grid,
    q_of_x,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticConstants",
    "CutoffTable",
    "Precision",
    "PrecisionError",
    "ReferencePoint",
    "boys_ref",
    "boys_ref_cf",
    "boys_ref_series",
    "boys_downward",
    "constants",
    "cutoff_solve",
    "cutoff_table",
    "fig1_samples",
    "fig1_tsv",
    "q_grid",
    "q_of_x",
    "__version__",
]
