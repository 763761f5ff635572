"""Ordinary least squares with an intercept, and design-matrix conditioning.

The estimator ``beta = (X'X)^-1 X'y`` is computed from a Householder QR
factorization of ``X``; the normal equations are never formed. The condition
number is the singular-value ratio of the raw design, intercept column
included and without rescaling, so regressors in large natural units give
very large values by construction.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, DuplicateColumnName, SingularDesign, TooFewObservations

ILL_CONDITIONED = 1e6
SINGULAR_RTOL = 1e-12


class Conditioning(str, Enum):
    WELL = "WellConditioned"
    ILL = "IllConditioned"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class ConditionVerdict:
    kappa: float
    classification: Conditioning
    singular_values: np.ndarray


def condition_number(X):
    """Classify ``X`` by ``kappa = s_max / s_min``.

    Singular when ``s_min < 1e-12 * s_max``; otherwise ill-conditioned when
    ``kappa > 1e6`` (strict).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < X.shape[1] or X.shape[1] < 1:
        raise DimensionMismatch(f"condition_number needs n >= m >= 1, got shape {X.shape}")
    s = np.linalg.svd(X, compute_uv=False)
    smax, smin = float(s[0]), float(s[-1])
    if smax == 0 or smin < SINGULAR_RTOL * smax:
        kappa = np.inf if smin == 0 else smax / smin
        return ConditionVerdict(kappa, Conditioning.SINGULAR, s)
    kappa = smax / smin
    cls = Conditioning.ILL if kappa > ILL_CONDITIONED else Conditioning.WELL
    return ConditionVerdict(kappa, cls, s)


@dataclass(frozen=True)
class DesignMatrix:
    X: np.ndarray
    y: np.ndarray
    column_names: tuple

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def k(self):
        """Number of regressors, excluding the intercept."""
        return self.X.shape[1] - 1


def design_from_arrays(features, y, names):
    """Prepend the intercept column to an ``n x k`` feature block."""
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, None]
    y = np.asarray(y, dtype=float).ravel()
    names = tuple(names)
    if len(set(names)) != len(names) or "Intercept" in names:
        raise DuplicateColumnName(f"repeated column name in {list(names)}")
    n, k = features.shape
    if len(names) != k or y.shape[0] != n:
        raise DimensionMismatch("features, response and names disagree in size")
    if n <= k + 1:
        raise TooFewObservations(f"need more than {k + 1} observations, got {n}")
    X = np.column_stack([np.ones(n), features])
    return DesignMatrix(X, y, ("Intercept",) + names)


def build_design(table, indicator_names, response_name):
    """Design matrix from a complete-case table; columns in the given order."""
    names = tuple(indicator_names)
    if len(set(names)) != len(names):
        raise DuplicateColumnName(f"repeated indicator in {list(names)}")
    return design_from_arrays(table.columns(names), table.column(response_name), names)


@dataclass(frozen=True)
class OlsFit:
    beta: np.ndarray
    std_errs: np.ndarray
    residuals: np.ndarray
    rss: float
    tss: float
    sigma2: float
    df_resid: int
    cond_number: float
    conditioning: Conditioning
    column_names: tuple
    cov_unscaled: np.ndarray

    @property
    def n(self):
        return self.residuals.shape[0]

    @property
    def k(self):
        return self.beta.shape[0] - 1


def ols_fit(design):
    """Least-squares fit of ``design.y`` on ``design.X``.

    Raises
    ------
    SingularDesign
        ``X`` is rank deficient (``s_min < 1e-12 * s_max``).
    """
    X, y = design.X, design.y
    verdict = condition_number(X)
    if verdict.classification is Conditioning.SINGULAR:
        raise SingularDesign(f"design is rank deficient (kappa={verdict.kappa:.3g})")
    n, m = X.shape
    Q, R = np.linalg.qr(X, mode="reduced")
    beta = solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    centered = y - y.mean()
    tss = float(centered @ centered)
    df = n - m
    sigma2 = rss / df
    # (X'X)^-1 = R^-1 R^-T
    r_inv = solve_triangular(R, np.eye(m))
    cov_unscaled = r_inv @ r_inv.T
    std_errs = np.sqrt(sigma2 * np.einsum("ij,ij->i", r_inv, r_inv))
    return OlsFit(
        beta=beta,
        std_errs=std_errs,
        residuals=resid,
        rss=rss,
        tss=tss,
        sigma2=sigma2,
        df_resid=df,
        cond_number=verdict.kappa,
        conditioning=verdict.classification,
        column_names=design.column_names,
        cov_unscaled=cov_unscaled,
    )


def predict(fit, design):
    if design.X.shape[1] != fit.beta.shape[0]:
        raise DimensionMismatch(
            f"design has {design.X.shape[1]} columns, fit has {fit.beta.shape[0]} coefficients"
        )
    return design.X @ fit.beta
