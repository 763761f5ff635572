"""Principal component analysis of standardized indicator data."""
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateData,
    DimensionMismatch,
    IndexOutOfRange,
    TooFewComponents,
    TooManyComponents,
)
from .transforms import StandardizedMatrix

DEFAULT_COMPONENTS = 10
ROBUST_TWO_PC_SHARE = 0.5


@dataclass(frozen=True)
class PcaModel:
    """Fitted components.

    ``components`` rows are orthonormal loading vectors, each signed so its
    largest-magnitude entry is positive. ``explained_variance`` uses the
    n - 1 covariance divisor; ``total_variance`` is the trace of that
    covariance, so the ratios sum to 1 only when every component is kept.
    """

    components: np.ndarray
    explained_variance: np.ndarray
    explained_variance_ratio: np.ndarray
    total_variance: float
    n_samples: int

    @property
    def p(self):
        return self.components.shape[1]

    @property
    def c(self):
        return self.components.shape[0]


def _matrix(data):
    return data.data if isinstance(data, StandardizedMatrix) else np.asarray(data, dtype=float)


def max_components(n, p):
    return min(n - 1, p)


def pca_fit(data, n_components=None):
    """Fit the top principal components by SVD of the data matrix.

    Parameters
    ----------
    data : StandardizedMatrix or ndarray
        Centered (normally z-scored) n x p data.
    n_components : int, optional
        Defaults to ``min(10, n - 1, p)``; larger explicit requests raise
        :class:`TooManyComponents`.
    """
    Z = _matrix(data)
    if Z.ndim != 2:
        raise DimensionMismatch("pca_fit needs a 2-d matrix")
    n, p = Z.shape
    limit = max_components(n, p)
    if n_components is None:
        n_components = min(DEFAULT_COMPONENTS, limit)
    if n_components < 1 or n_components > limit:
        raise TooManyComponents(f"n_components must be in [1, {limit}], got {n_components}")
    if not np.any(Z):
        raise DegenerateData("PCA of a zero matrix")

    _, s, vt = np.linalg.svd(Z, full_matrices=False)
    ev_all = s**2 / (n - 1)
    total = float(np.sum(Z * Z) / (n - 1))
    comps = vt[:n_components].copy()
    lead = np.argmax(np.abs(comps), axis=1)
    signs = np.where(comps[np.arange(n_components), lead] < 0, -1.0, 1.0)
    comps *= signs[:, None]
    ev = ev_all[:n_components]
    return PcaModel(comps, ev, ev / total, total, n)


@dataclass(frozen=True)
class PcaProjection:
    scores: np.ndarray
    color_values: np.ndarray
    point_labels: tuple


def pca_project(model, data, color=None, labels=None):
    """Scores ``data @ components.T``; colour values and labels pass through."""
    Z = _matrix(data)
    if Z.ndim != 2 or Z.shape[1] != model.p:
        raise DimensionMismatch(f"data has {Z.shape[-1]} features, model expects {model.p}")
    n = Z.shape[0]
    color = np.full(n, np.nan) if color is None else np.asarray(color, dtype=float)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    if color.shape != (n,) or len(labels) != n:
        raise DimensionMismatch("color and labels need one entry per row")
    return PcaProjection(Z @ model.components.T, color, labels)


def reconstruct(model, scores):
    return np.asarray(scores) @ model.components


@dataclass(frozen=True)
class ScreeData:
    ratios: np.ndarray
    relative_to_pc1: np.ndarray
    two_pc_share: float

    @property
    def robust(self):
        """Whether the first two components carry at least half the variance."""
        return self.two_pc_share >= ROBUST_TWO_PC_SHARE


def scree(model):
    if model.c < 2:
        raise TooFewComponents("scree needs at least 2 components")
    r = model.explained_variance_ratio
    return ScreeData(r.copy(), r / r[0], float(r[0] + r[1]))


def loading_scores(model, component_index, feature_names):
    """``(name, loading)`` pairs for one component, largest magnitude first."""
    if not 0 <= component_index < model.c:
        raise IndexOutOfRange(f"component {component_index} not in [0, {model.c})")
    names = list(feature_names)
    if len(names) != model.p:
        raise DimensionMismatch(f"expected {model.p} feature names, got {len(names)}")
    row = model.components[component_index]
    order = sorted(range(model.p), key=lambda j: -abs(row[j]))
    return [(names[j], float(row[j])) for j in order]
