"""Smoothly adaptively centered ridge (SACR) for scalar-on-function regression.

The package provides a dense interior point QP solver, functional data
preprocessing and simulation, SACR and its closed-form and convex
baselines, and a nested cross-validation harness.
"""

from .errors import (
    ConfigError,
    DataError,
    InvalidProblem,
    NumericalError,
    SacrError,
)
from .estimators import (
    LinearFit,
    SacrFit,
    assemble_sacr_qp,
    fit_adaptive_lasso,
    fit_bar,
    fit_centered_ridge,
    fit_lasso,
    fit_nng,
    fit_relaxed_lasso,
    fit_ridge,
    fit_ridge_logistic,
    fit_roughness,
    fit_sacr,
    fit_sacr_logistic,
    load_fit,
    predict,
    save_fit,
)
from .fda import (
    FunctionalDataset,
    SimulationConfig,
    StandardizationParams,
    design_matrix,
    load_csv,
    save_csv,
    simulate,
    standardize,
)
from .qp import QpProblem, QpSolution, check_kkt, solve_qp
from .selection import (
    CvReport,
    EstimatorSpec,
    HyperGrid,
    comparison_table,
    grid_search,
    kfold_split,
    nested_evaluate,
)

__version__ = "0.1.0"
