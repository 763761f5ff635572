"""Stability diagnostics for OLS and PCA on panel indicator data."""
__version__ = "0.1.0"

from ._backend import BACKEND
from .diagnostics import (
    FitReport,
    adjusted_r_squared,
    chi2_survival,
    durbin_watson,
    jarque_bera,
    moments,
    normality_gate,
    omnibus,
    r_squared,
    student_t_tail,
    summarize,
    t_test,
    vif,
    vif_table,
)
from .ols import build_design, condition_number, design_from_arrays, ols_fit, predict
from .panel import IndicatorPanel, bin_series, complete_cases, extract_series, parse_panel
from .pca import loading_scores, pca_fit, pca_project, scree
from .search import SearchConfig, count_subsets, run_search, sample_subsets, vif_filter
from .synth import SynthSpec, generate
from .transforms import boxcox, boxcox_mle, standardize

__all__ = [
    "BACKEND",
    "FitReport",
    "IndicatorPanel",
    "SearchConfig",
    "SynthSpec",
    "adjusted_r_squared",
    "bin_series",
    "boxcox",
    "boxcox_mle",
    "build_design",
    "chi2_survival",
    "complete_cases",
    "condition_number",
    "count_subsets",
    "design_from_arrays",
    "durbin_watson",
    "extract_series",
    "generate",
    "jarque_bera",
    "loading_scores",
    "moments",
    "normality_gate",
    "ols_fit",
    "omnibus",
    "parse_panel",
    "pca_fit",
    "pca_project",
    "predict",
    "r_squared",
    "run_search",
    "sample_subsets",
    "scree",
    "standardize",
    "student_t_tail",
    "summarize",
    "t_test",
    "vif",
    "vif_filter",
    "vif_table",
]
