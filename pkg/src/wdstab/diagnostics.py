"""Fit statistics, collinearity measures and normality tests.

Moments use population (divisor n) central moments and kurtosis is reported
non-excess, so a normal sample sits near 3.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
from scipy import special

from ._backend import kernels
from .errors import (
    DegenerateData,
    DegenerateDegreesOfFreedom,
    DegenerateResiduals,
    InvalidAlpha,
    NonPositiveStdErr,
    SampleTooSmall,
    ZeroTotalVariance,
)
from .ols import SINGULAR_RTOL

SKEW_BOUND = 0.5
NORMAL_KURTOSIS = 3.0
PERFECT_COLLINEARITY = 1.0 - 1e-12


def r_squared(rss, tss):
    if tss <= 0:
        raise ZeroTotalVariance("total sum of squares is zero")
    if rss < 0:
        raise ValueError("rss must be non-negative")
    return 1.0 - rss / tss


def adjusted_r_squared(r2, n, k):
    """``1 - (1 - r2) (n - 1) / (n - k - 1)``."""
    if n <= k + 1:
        raise DegenerateDegreesOfFreedom(f"n={n} must exceed k+1={k + 1}")
    return 1.0 - (1.0 - r2) * (n - 1) / (n - (k + 1))


def vif(r2_i):
    """Variance inflation factor ``1 / (1 - r2_i)``; infinite at perfect collinearity."""
    if r2_i < 0:
        if r2_i < -1e-12:
            raise ValueError(f"R^2 must be non-negative, got {r2_i}")
        r2_i = 0.0
    if r2_i >= PERFECT_COLLINEARITY:
        return math.inf
    return 1.0 / (1.0 - r2_i)


def vif_table(table, indicator_names):
    """VIF of every indicator regressed (with intercept) on all the others.

    The auxiliary regressions run on mean-centred columns through a
    rank-revealing least-squares solve, so a collinear set of *other*
    columns still yields a finite VIF for an unrelated target.
    """
    names = list(indicator_names)
    if len(names) < 2:
        raise ValueError("VIF needs at least two indicators")
    block = table.columns(names)
    block = block - block.mean(axis=0)
    out = {}
    for j, name in enumerate(names):
        y = block[:, j]
        tss = float(y @ y)
        if tss == 0:
            out[name] = math.inf
            continue
        others = np.delete(block, j, axis=1)
        coef, *_ = np.linalg.lstsq(others, y, rcond=SINGULAR_RTOL)
        resid = y - others @ coef
        out[name] = vif(r_squared(float(resid @ resid), tss))
    return out


class Moments(NamedTuple):
    skew: float
    kurtosis: float


def moments(values):
    """Skewness ``m3 / m2**1.5`` and non-excess kurtosis ``m4 / m2**2``."""
    x = np.ascontiguousarray(values, dtype=float)
    if x.size < 3:
        raise DegenerateData(f"moments need n >= 3, got {x.size}")
    _, m2, m3, m4 = kernels.central_moments(x)
    if m2 <= 0 or np.ptp(x) == 0:
        raise DegenerateData("moments of a constant vector")
    return Moments(m3 / m2**1.5, m4 / (m2 * m2))


def chi2_survival(x, df):
    """Upper tail of the chi-square distribution; ``exp(-x/2)`` for ``df == 2``."""
    if x < 0 or df < 1:
        raise ValueError("chi2_survival needs x >= 0 and df >= 1")
    if df == 2:
        return math.exp(-x / 2.0)
    return float(special.gammaincc(df / 2.0, x / 2.0))


def student_t_tail(t, df):
    """Two-sided tail ``P(|T| > |t|)``, via ``I_{df/(df+t^2)}(df/2, 1/2)``."""
    if df < 1:
        raise ValueError("df must be >= 1")
    t2 = float(t) ** 2
    if math.isinf(t2):
        return 0.0
    return float(special.betainc(df / 2.0, 0.5, df / (df + t2)))


def student_t_quantile(q, df):
    return float(special.stdtrit(df, q))


class JarqueBera(NamedTuple):
    jb: float
    prob: float


def jarque_bera(skew, kurtosis, n):
    if n < 3:
        raise DegenerateData("Jarque-Bera needs n >= 3")
    jb = n / 6.0 * (skew**2 + (kurtosis - 3.0) ** 2 / 4.0)
    return JarqueBera(jb, chi2_survival(jb, 2))


def durbin_watson(residuals):
    e = np.ascontiguousarray(residuals, dtype=float)
    if e.size < 2:
        raise DegenerateResiduals("Durbin-Watson needs at least 2 residuals")
    num, den = kernels.durbin_watson_sums(e)
    if den == 0:
        raise DegenerateResiduals("all residuals are zero")
    return num / den


def skew_z(skew, n):
    """D'Agostino (1970) normal approximation for sample skewness; n >= 8."""
    y = skew * math.sqrt((n + 1) * (n + 3) / (6.0 * (n - 2)))
    beta2 = 3.0 * (n * n + 27 * n - 70) * (n + 1) * (n + 3) / ((n - 2.0) * (n + 5) * (n + 7) * (n + 9))
    w2 = -1.0 + math.sqrt(2.0 * (beta2 - 1.0))
    delta = 1.0 / math.sqrt(0.5 * math.log(w2))
    alpha = math.sqrt(2.0 / (w2 - 1.0))
    ya = y / alpha
    return delta * math.log(ya + math.sqrt(ya * ya + 1.0))


def kurtosis_z(kurtosis, n):
    """Anscombe-Glynn (1983) normal approximation for non-excess kurtosis."""
    mean = 3.0 * (n - 1) / (n + 1)
    var = 24.0 * n * (n - 2) * (n - 3) / ((n + 1.0) ** 2 * (n + 3) * (n + 5))
    x = (kurtosis - mean) / math.sqrt(var)
    sqrt_beta1 = (
        6.0 * (n * n - 5 * n + 2) / ((n + 7.0) * (n + 9))
        * math.sqrt(6.0 * (n + 3) * (n + 5) / (n * (n - 2.0) * (n - 3)))
    )
    a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + math.sqrt(1.0 + 4.0 / sqrt_beta1**2))
    term1 = 1.0 - 2.0 / (9.0 * a)
    denom = 1.0 + x * math.sqrt(2.0 / (a - 4.0))
    if denom == 0:
        return math.inf
    term2 = math.copysign(abs((1.0 - 2.0 / a) / denom) ** (1.0 / 3.0), denom)
    return (term1 - term2) / math.sqrt(2.0 / (9.0 * a))


class Omnibus(NamedTuple):
    k2: float
    prob: float


def omnibus(values):
    """D'Agostino-Pearson K^2 = Z(skew)^2 + Z(kurtosis)^2, referred to chi-square(2)."""
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 8:
        raise SampleTooSmall(f"omnibus test needs n >= 8, got {n}")
    m = moments(x)
    k2 = skew_z(m.skew, n) ** 2 + kurtosis_z(m.kurtosis, n) ** 2
    return Omnibus(k2, chi2_survival(k2, 2))


class TTest(NamedTuple):
    t_stat: float
    p_value: float
    ci_low: float
    ci_high: float


def t_test(coef, std_err, df, alpha=0.05):
    """Two-sided test of ``coef == 0`` with a ``1 - alpha`` confidence interval."""
    if not 0 < alpha < 1:
        raise InvalidAlpha(f"alpha must be in (0, 1), got {alpha}")
    if not std_err > 0:
        raise NonPositiveStdErr(f"std_err must be positive, got {std_err}")
    if df < 1:
        raise DegenerateDegreesOfFreedom("df must be >= 1")
    t = coef / std_err
    half = student_t_quantile(1.0 - alpha / 2.0, df) * std_err
    return TTest(t, student_t_tail(t, df), coef - half, coef + half)


class KurtosisClass(str, Enum):
    PLATYKURTIC = "Platykurtic"
    MESOKURTIC = "Mesokurtic"
    LEPTOKURTIC = "Leptokurtic"


@dataclass(frozen=True)
class NormalityVerdict:
    skew: float
    kurtosis: float
    skew_ok: bool
    kurtosis_class: KurtosisClass
    passes: bool


def classify_normality(skew, kurtosis):
    """Skew must lie in [-0.5, 0.5]; the kurtosis class is reported but not gated."""
    skew_ok = -SKEW_BOUND <= skew <= SKEW_BOUND
    if kurtosis > NORMAL_KURTOSIS:
        kc = KurtosisClass.LEPTOKURTIC
    elif kurtosis < NORMAL_KURTOSIS:
        kc = KurtosisClass.PLATYKURTIC
    else:
        kc = KurtosisClass.MESOKURTIC
    return NormalityVerdict(skew, kurtosis, skew_ok, kc, skew_ok)


def normality_gate(values):
    m = moments(values)
    return classify_normality(m.skew, m.kurtosis)


@dataclass(frozen=True)
class CoefficientRow:
    name: str
    coef: float
    std_err: float
    t_stat: float
    p_value: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class FitReport:
    """Coefficient table plus summary statistics of one OLS fit.

    Statistics that are undefined for the fit (e.g. the omnibus test for
    n < 8, or moments of identically zero residuals) are ``None``.
    """

    rows: list
    r2: float
    adj_r2: float
    skew: Optional[float]
    kurtosis: Optional[float]
    omnibus: Optional[float]
    prob_omnibus: Optional[float]
    durbin_watson: Optional[float]
    jarque_bera: Optional[float]
    prob_jb: Optional[float]
    cond_number: float
    conditioning: str
    n: int
    k: int
    alpha: float = 0.05
    notes: list = field(default_factory=list)


def _coefficient_row(name, coef, se, df, alpha):
    if se > 0:
        tt = t_test(coef, se, df, alpha)
        return CoefficientRow(name, coef, se, tt.t_stat, tt.p_value, tt.ci_low, tt.ci_high)
    # exact fit: zero standard error
    t = math.nan if coef == 0 else math.copysign(math.inf, coef)
    p = math.nan if coef == 0 else 0.0
    return CoefficientRow(name, coef, se, t, p, coef, coef)


def summarize(fit, alpha=0.05):
    """Build the :class:`FitReport` for an :class:`~wdstab.ols.OlsFit`."""
    n, k = fit.n, fit.k
    notes = []
    rows = [
        _coefficient_row(name, float(b), float(se), fit.df_resid, alpha)
        for name, b, se in zip(fit.column_names, fit.beta, fit.std_errs)
    ]
    r2 = r_squared(fit.rss, fit.tss)
    adj = adjusted_r_squared(r2, n, k)

    skew = kurt = jb = pjb = om = pom = dw = None
    try:
        m = moments(fit.residuals)
        skew, kurt = m.skew, m.kurtosis
        jb, pjb = jarque_bera(skew, kurt, n)
    except DegenerateData as exc:
        notes.append(f"moments undefined: {exc}")
    if skew is not None:
        try:
            om, pom = omnibus(fit.residuals)
        except SampleTooSmall as exc:
            notes.append(str(exc))
    try:
        dw = durbin_watson(fit.residuals)
    except DegenerateResiduals as exc:
        notes.append(f"Durbin-Watson undefined: {exc}")

    return FitReport(
        rows=rows,
        r2=r2,
        adj_r2=adj,
        skew=skew,
        kurtosis=kurt,
        omnibus=om,
        prob_omnibus=pom,
        durbin_watson=dw,
        jarque_bera=jb,
        prob_jb=pjb,
        cond_number=fit.cond_number,
        conditioning=fit.conditioning.value,
        n=n,
        k=k,
        alpha=alpha,
        notes=notes,
    )


def _clean(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def report_to_dict(report):
    """JSON-ready dict; keys follow the usual regression-summary labels."""
    return {
        "n": report.n,
        "k": report.k,
        "alpha": report.alpha,
        "r2": _clean(report.r2),
        "adj_r2": _clean(report.adj_r2),
        "omnibus": _clean(report.omnibus),
        "prob_omnibus": _clean(report.prob_omnibus),
        "skew": _clean(report.skew),
        "kurtosis": _clean(report.kurtosis),
        "durbin_watson": _clean(report.durbin_watson),
        "jarque_bera": _clean(report.jarque_bera),
        "prob_jb": _clean(report.prob_jb),
        "cond_no": _clean(report.cond_number),
        "conditioning": report.conditioning,
        "coefficients": [
            {
                "name": r.name,
                "coef": _clean(r.coef),
                "std_err": _clean(r.std_err),
                "t": _clean(r.t_stat),
                "p": _clean(r.p_value),
                "ci_low": _clean(r.ci_low),
                "ci_high": _clean(r.ci_high),
            }
            for r in report.rows
        ],
        "notes": list(report.notes),
    }
