"""Box-Cox power transform and z-score standardization."""
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DegenerateData, NonPositiveInput, ZeroVarianceColumn

DEFAULT_GRID = (-3.0, 3.0, 601)


def _positive(values):
    x = np.ascontiguousarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-d vector")
    if not np.all(np.isfinite(x)):
        raise NonPositiveInput("Box-Cox input must be finite")
    if np.any(x <= 0):
        raise NonPositiveInput(f"Box-Cox needs strictly positive input; min is {x.min()}")
    return x


def boxcox(values, lam):
    """``(x**lam - 1) / lam``, or ``log(x)`` at ``lam == 0``.

    Evaluated as ``expm1(lam * log x) / lam`` so the result is continuous
    through ``lam -> 0``.
    """
    x = _positive(values)
    logs = np.log(x)
    if lam == 0:
        return logs
    return np.expm1(lam * logs) / lam


def inv_boxcox(y, lam):
    y = np.asarray(y, dtype=float)
    if lam == 0:
        return np.exp(y)
    return np.exp(np.log1p(lam * y) / lam)


def lambda_grid(lo, hi, steps):
    if not lo < hi:
        raise ValueError(f"grid needs lo < hi, got [{lo}, {hi}]")
    if steps < 2:
        raise ValueError("grid needs at least 2 steps")
    i = np.arange(steps, dtype=float)
    grid = lo + (hi - lo) * i / (steps - 1)
    # land symmetric grids exactly on 0 and 1 instead of 1e-16 neighbours
    grid[np.abs(grid) < 1e-12 * (hi - lo)] = 0.0
    grid[np.abs(grid - 1.0) < 1e-12 * (hi - lo)] = 1.0
    return grid


def boxcox_profile(values, lambdas):
    """Profile log-likelihood ``-(n/2) log var(y_lam) + (lam - 1) sum(log x)`` per lambda."""
    x = _positive(values)
    lambdas = np.ascontiguousarray(lambdas, dtype=float)
    out = np.empty(lambdas.shape[0])
    kernels.boxcox_loglik_grid(x, lambdas, out)
    return out


@dataclass(frozen=True)
class BoxCoxResult:
    lam: float
    transformed: np.ndarray
    log_likelihood: float
    grid: np.ndarray
    profile: np.ndarray


def boxcox_mle(values, grid=DEFAULT_GRID):
    """Grid-search the profile maximum-likelihood Box-Cox exponent.

    Parameters
    ----------
    values : array_like
        Strictly positive sample, at least 3 values.
    grid : (lo, hi, steps)
        Search grid, inclusive at both ends.

    Returns
    -------
    BoxCoxResult
        ``lam`` maximizes the profile likelihood; among exact ties the
        candidate closest to 1 (the identity shape) wins.
    """
    x = _positive(values)
    if x.size < 3:
        raise DegenerateData(f"Box-Cox MLE needs n >= 3, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateData("Box-Cox MLE on a constant vector")
    lambdas = lambda_grid(*grid)
    profile = boxcox_profile(x, lambdas)
    best = profile.max()
    if not math.isfinite(best):
        raise DegenerateData("profile likelihood is not finite anywhere on the grid")
    tied = np.flatnonzero(profile == best)
    k = tied[np.argmin(np.abs(lambdas[tied] - 1.0))]
    assert np.all(profile[k] >= profile), "grid maximum is not maximal"
    lam = float(lambdas[k])
    return BoxCoxResult(lam, boxcox(x, lam), float(profile[k]), lambdas, profile)


@dataclass(frozen=True)
class StandardizedMatrix:
    """Column z-scores with population (divisor n) standard deviations."""

    data: np.ndarray
    means: np.ndarray
    stdevs: np.ndarray

    @property
    def shape(self):
        return self.data.shape

    def inverse(self, data=None):
        """Map z-scores back to the original units."""
        z = self.data if data is None else np.asarray(data, dtype=float)
        return z * self.stdevs + self.means


def standardize(matrix):
    """Center each column and scale it to unit population variance.

    Raises :class:`ZeroVarianceColumn` (with ``.column`` set) for a constant
    column.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] < 2:
        raise DegenerateData("standardize needs an n x p matrix with n >= 2")
    for j in range(a.shape[1]):
        if np.ptp(a[:, j]) == 0:
            raise ZeroVarianceColumn(j)
    means = a.mean(axis=0)
    centered = a - means
    stdevs = np.sqrt(np.mean(centered**2, axis=0))
    return StandardizedMatrix(centered / stdevs, means, stdevs)
