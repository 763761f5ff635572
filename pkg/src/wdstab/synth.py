"""Deterministic synthetic regression data with controllable pathologies."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidSpec
from .panel import CaseTable, IndicatorPanel, to_csv
from .rng import Xoshiro256

COUNTRY = "SYN"
RESPONSE = "y"


@dataclass(frozen=True)
class SynthSpec:
    """Generator settings.

    collinearity_eps
        ``None`` for independent features; otherwise the last feature is
        replaced by ``x1 + eps * noise`` (``eps = 0`` duplicates ``x1``).
    hetero_gamma
        Error standard deviation is ``noise_sd * |x1| ** gamma``.
    skew_lambda
        Errors are bent through ``expm1(lam * e) / lam``; 0 leaves them normal.
    true_beta
        Intercept followed by one slope per feature; defaults to all ones.
    """

    n: int
    p: int
    seed: int = 0
    collinearity_eps: Optional[float] = None
    hetero_gamma: float = 0.0
    noise_sd: float = 1.0
    skew_lambda: float = 0.0
    true_beta: Optional[tuple] = None

    def __post_init__(self):
        if self.p < 1:
            raise InvalidSpec(f"p must be >= 1, got {self.p}")
        if self.n <= self.p + 1:
            raise InvalidSpec(f"n={self.n} must exceed p+1={self.p + 1}")
        if self.collinearity_eps is not None:
            if self.collinearity_eps < 0:
                raise InvalidSpec("collinearity_eps must be >= 0")
            if self.p < 2:
                raise InvalidSpec("a collinear column needs p >= 2")
        if self.hetero_gamma < 0 or self.noise_sd < 0:
            raise InvalidSpec("hetero_gamma and noise_sd must be >= 0")
        if self.true_beta is not None and len(self.true_beta) != self.p + 1:
            raise InvalidSpec(f"true_beta needs {self.p + 1} entries, got {len(self.true_beta)}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must be in [0, 2**64)")

    @property
    def beta(self):
        if self.true_beta is None:
            return np.ones(self.p + 1)
        return np.asarray(self.true_beta, dtype=float)

    @property
    def feature_names(self):
        return tuple(f"x{j}" for j in range(1, self.p + 1))


def generate(spec, kernels=None):
    """Draw ``(table, true_beta)`` for ``spec``.

    Draw order (each a separate ``normal`` call): the n x p feature block in
    row-major order, then the n collinearity noises if requested, then the n
    error deviates.
    """
    rng = Xoshiro256(spec.seed, kernels)
    n, p = spec.n, spec.p
    X = rng.normal(n * p).reshape(n, p)
    if spec.collinearity_eps is not None:
        X[:, p - 1] = X[:, 0] + spec.collinearity_eps * rng.normal(n)
    e = rng.normal(n)
    sd = spec.noise_sd * np.abs(X[:, 0]) ** spec.hetero_gamma
    err = sd * e
    if spec.skew_lambda != 0:
        err = np.expm1(spec.skew_lambda * err) / spec.skew_lambda
    beta = spec.beta
    y = beta[0] + X @ beta[1:] + err
    keys = tuple((COUNTRY, t) for t in range(1, n + 1))
    table = CaseTable(keys, spec.feature_names + (RESPONSE,), np.column_stack([X, y]))
    return table, beta


def table_to_panel(table, country=COUNTRY):
    values = {}
    for (c, year), row in zip(table.keys, table.data):
        for name, v in zip(table.names, row):
            values[(c, year, name)] = float(v)
    years = [y for _, y in table.keys]
    return IndicatorPanel((country,), range(min(years), max(years) + 1), tuple(sorted(table.names)), values)


def synth_csv(spec, kernels=None):
    table, beta = generate(spec, kernels)
    return to_csv(table_to_panel(table)), beta
