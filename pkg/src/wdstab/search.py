"""Stochastic indicator-subset search.

Indicators surviving a greedy VIF filter form the pool. Subsets of size
``min_size..max_size`` that contain every forced indicator are drawn
uniformly from the union of all such subsets (so larger sizes are drawn in
proportion to how many subsets they have), without repeating a subset.
Each subset is fitted by OLS and the list is ranked by score.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Optional

from . import diagnostics
from .errors import (
    DegenerateDegreesOfFreedom,
    InvalidConfig,
    NoCompleteRows,
    PoolTooSmall,
    SingularDesign,
    TooFewObservations,
    UnknownIndicator,
    ZeroTotalVariance,
)
from .ols import Conditioning, build_design, ols_fit
from .panel import complete_cases
from .rng import Xoshiro256


class Score(str, Enum):
    ADJUSTED_R2 = "AdjustedR2"
    R2 = "R2"


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    min_size: int = 4
    max_size: int = 7
    samples: int = 1000
    forced_indicators: tuple = ()
    vif_threshold: float = 5.0
    score: Score = Score.ADJUSTED_R2

    def __post_init__(self):
        if not 1 <= self.min_size <= self.max_size:
            raise InvalidConfig(f"need 1 <= min_size <= max_size, got {self.min_size}..{self.max_size}")
        if self.samples < 1:
            raise InvalidConfig("samples must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfig("seed must be in [0, 2**64)")
        if len(set(self.forced_indicators)) != len(self.forced_indicators):
            raise InvalidConfig("forced indicators repeat")
        if len(self.forced_indicators) > self.max_size:
            raise InvalidConfig("more forced indicators than max_size")
        object.__setattr__(self, "forced_indicators", tuple(self.forced_indicators))
        object.__setattr__(self, "score", Score(self.score))

    def to_dict(self):
        return {
            "seed": int(self.seed),
            "min_size": self.min_size,
            "max_size": self.max_size,
            "samples": self.samples,
            "forced_indicators": list(self.forced_indicators),
            "vif_threshold": self.vif_threshold,
            "score": self.score.value,
        }


def vif_filter(table, indicator_names, threshold=5.0, forced=()):
    """Greedy VIF elimination.

    While some non-forced indicator has ``VIF >= threshold``, drop the one
    with the largest VIF (ties go to the lexicographically later name) and
    recompute. Returns ``(kept, dropped)`` with ``dropped`` as
    ``(name, vif)`` pairs in drop order.
    """
    kept = list(indicator_names)
    if len(kept) < 2:
        raise ValueError("vif_filter needs at least two indicators")
    forced = set(forced)
    dropped = []
    while len(kept) >= 2:
        vifs = diagnostics.vif_table(table, kept)
        over = [n for n in kept if n not in forced and vifs[n] >= threshold]
        if not over:
            break
        worst = max(over, key=lambda n: (vifs[n], n))
        kept.remove(worst)
        dropped.append((worst, vifs[worst]))
    return kept, dropped


def count_subsets(pool_size, min_size, max_size):
    if pool_size < max_size:
        raise PoolTooSmall(f"pool of {pool_size} cannot form subsets of size {max_size}")
    return sum(math.comb(pool_size, s) for s in range(min_size, max_size + 1))


def _split_pool(pool, config):
    pool = list(pool)
    if len(set(pool)) != len(pool):
        raise InvalidConfig("pool has repeated names")
    for name in config.forced_indicators:
        if name not in pool:
            raise UnknownIndicator(f"forced indicator {name!r} is not in the pool")
    forced = tuple(sorted(config.forced_indicators))
    free = tuple(sorted(set(pool) - set(forced)))
    f = len(forced)
    weights = []
    for size in range(config.min_size, config.max_size + 1):
        r = size - f
        if 0 <= r <= len(free):
            weights.append((r, math.comb(len(free), r)))
    total = sum(c for _, c in weights)
    if total == 0:
        raise PoolTooSmall(
            f"{len(free)} free indicators plus {f} forced cannot form a subset of size "
            f"{config.min_size}..{config.max_size}"
        )
    return forced, free, weights, total


def _draw(rng, forced, free, weights, total):
    u = rng.below(total)
    for r, count in weights:
        if u < count:
            break
        u -= count
    picked = rng.combination(len(free), r)
    return tuple(sorted(forced + tuple(free[i] for i in picked)))


def draw_subsets(pool, config, draws, rng=None):
    """Independent uniform draws, repeats allowed. Used to audit the sampler."""
    forced, free, weights, total = _split_pool(pool, config)
    rng = rng or Xoshiro256(config.seed)
    return [_draw(rng, forced, free, weights, total) for _ in range(draws)]


def total_subsets(pool, config):
    return _split_pool(pool, config)[3]


def sample_subsets(pool, config, rng=None):
    """``config.samples`` distinct subsets, or every valid subset when there are no more.

    Full enumerations are ordered by size, then lexicographically; sampled
    lists are in draw order.
    """
    forced, free, weights, total = _split_pool(pool, config)
    if total <= config.samples:
        return [
            tuple(sorted(forced + combo))
            for r, _ in weights
            for combo in combinations(free, r)
        ]
    rng = rng or Xoshiro256(config.seed)
    seen, out = set(), []
    while len(out) < config.samples:
        subset = _draw(rng, forced, free, weights, total)
        if subset not in seen:
            seen.add(subset)
            out.append(subset)
    return out


@dataclass(frozen=True)
class SubsetResult:
    indicators: tuple
    score: float
    fit_summary: Optional[diagnostics.FitReport]
    cond_classification: Optional[str]
    error: Optional[str] = None
    n_dropped: int = 0

    @property
    def cond_number(self):
        return self.fit_summary.cond_number if self.fit_summary is not None else math.inf

    def sort_key(self):
        return (-self.score, self.cond_number, self.indicators)


_SKIPPED = (TooFewObservations, NoCompleteRows, ZeroTotalVariance, DegenerateDegreesOfFreedom)


def evaluate_subset(panel, response, subset, config, countries=None, alpha=0.05):
    try:
        table, dropped = complete_cases(panel, subset, response, countries)
        fit = ols_fit(build_design(table, subset, response))
        report = diagnostics.summarize(fit, alpha)
    except SingularDesign as exc:
        return SubsetResult(subset, -math.inf, None, Conditioning.SINGULAR.value, exc.code)
    except _SKIPPED as exc:
        return SubsetResult(subset, -math.inf, None, None, exc.code)
    score = report.adj_r2 if config.score is Score.ADJUSTED_R2 else report.r2
    return SubsetResult(subset, score, report, report.conditioning, None, dropped)


def run_search(panel, response, config, subsets=None, pool=None, countries=None, workers=1, alpha=0.05):
    """Fit every subset and rank by score.

    Ties break on smaller condition number, then indicator names, so the
    ranking does not depend on evaluation order. Subsets that cannot be
    fitted get score ``-inf`` and carry the error code.
    """
    if response not in panel.indicators:
        raise UnknownIndicator(f"unknown response {response!r}")
    if subsets is None:
        if pool is None:
            pool = [i for i in panel.indicators if i != response]
        subsets = sample_subsets(pool, config)
    subsets = [tuple(s) for s in subsets]

    def job(subset):
        return evaluate_subset(panel, response, subset, config, countries, alpha)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(job, subsets))
    else:
        results = [job(s) for s in subsets]
    return sorted(results, key=SubsetResult.sort_key)


@dataclass
class SearchRun:
    """Everything a search emits: config echo, pool, filter log, ranking."""

    config: SearchConfig
    response: str
    pool: list
    vif_dropped: list = field(default_factory=list)
    results: list = field(default_factory=list)
    total_subsets: int = 0

    def to_dict(self):
        clean = diagnostics._clean
        return {
            "config": self.config.to_dict(),
            "response": self.response,
            "pool": list(self.pool),
            "vif_dropped": [{"name": n, "vif": clean(v)} for n, v in self.vif_dropped],
            "total_subsets": self.total_subsets,
            "results": [
                {
                    "rank": i,
                    "indicators": list(r.indicators),
                    "score": clean(r.score),
                    "conditioning": r.cond_classification,
                    "error": r.error,
                    "rows_dropped": r.n_dropped,
                    "fit": None if r.fit_summary is None else diagnostics.report_to_dict(r.fit_summary),
                }
                for i, r in enumerate(self.results, start=1)
            ],
        }


def search_pipeline(panel, response, config, pool=None, countries=None, workers=1):
    """VIF filter on the pool's complete cases, then sample and rank."""
    if response not in panel.indicators:
        raise UnknownIndicator(f"unknown response {response!r}")
    if pool is None:
        pool = [i for i in panel.indicators if i != response]
    for name in list(pool) + list(config.forced_indicators):
        if name not in panel.indicators:
            raise UnknownIndicator(f"unknown indicator {name!r}")
    dropped = []
    if len(pool) >= 2:
        table, _ = complete_cases(panel, pool, None, countries)
        pool, dropped = vif_filter(table, pool, config.vif_threshold, config.forced_indicators)
    subsets = sample_subsets(pool, config)
    results = run_search(panel, response, config, subsets=subsets, countries=countries, workers=workers)
    return SearchRun(config, response, list(pool), dropped, results, total_subsets(pool, config))
