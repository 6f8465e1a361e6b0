"""Estimation, exponent fitting, exact oracles and identity checks."""
from .estimate import (
    MeanMaxEstimate,
    PersistenceEstimate,
    estimate_mean_max,
    estimate_persistence,
    make_estimate,
    mean_max_grid,
    persistence_grid,
    sample_path,
    scale_sequence,
    wilson_interval,
)
from .fit import ExponentFit, fit_exponent
from .identities import FAIL, NOT_APPLICABLE, PASS, IdentityReport, IdentityResult, verify_identities
from .oracle import (
    EnumerationBudgetExceeded,
    ExactResult,
    brute_force_persistence,
    brute_force_survival,
    enumerate_paths,
    exact_law,
)

__all__ = [
    "EnumerationBudgetExceeded", "ExactResult", "ExponentFit", "FAIL", "IdentityReport",
    "IdentityResult", "MeanMaxEstimate", "NOT_APPLICABLE", "PASS", "PersistenceEstimate",
    "brute_force_persistence", "brute_force_survival", "enumerate_paths", "estimate_mean_max",
    "estimate_persistence", "exact_law", "fit_exponent", "make_estimate", "mean_max_grid",
    "persistence_grid", "sample_path", "scale_sequence", "verify_identities", "wilson_interval",
]
