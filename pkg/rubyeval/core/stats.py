"""
Statistics for metric studies: rank correlation, paired t-tests, RANSAC
consensus subsets and survey sample sizes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special
from scipy import stats as sps

logger = logging.getLogger(__name__)


class StatisticsError(ValueError):
    pass


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of average ranks."""
    if len(x) != len(y):
        raise StatisticsError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise StatisticsError("need at least two points")
    rx, ry = sps.rankdata(x), sps.rankdata(y)
    dx, dy = rx - rx.mean(), ry - ry.mean()
    denom = math.sqrt(float((dx * dx).sum()) * float((dy * dy).sum()))
    if denom == 0:
        raise StatisticsError("constant input has no rank correlation")
    return float(np.clip((dx * dy).sum() / denom, -1.0, 1.0))


def _spearman_or_nan(x, y) -> float:
    try:
        return spearman(x, y)
    except StatisticsError:
        return float("nan")


# --- paired t-test ----------------------------------------------------------

@dataclass(frozen=True)
class PairedSample:
    ids: tuple[str, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.ids) == len(self.a) == len(self.b)):
            raise StatisticsError("paired sample columns differ in length")
        if len(self.ids) < 2:
            raise StatisticsError("paired sample needs at least two entries")


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p_two_sided: float
    mean_diff: float
    ci95_half_width: float
    n: int
    confidence: float = 0.95
    degenerate: bool = False
    mean_a: float = 0.0
    mean_b: float = 0.0


def t_critical(df: int, confidence: float = 0.95) -> float:
    """Two-sided Student-t critical value."""
    if df < 1:
        raise StatisticsError(f"df must be >= 1, got {df}")
    if not 0 < confidence < 1:
        raise StatisticsError(f"confidence must be in (0, 1), got {confidence}")
    return float(sps.t.ppf((1 + confidence) / 2, df))


def t_two_sided_p(t: float, df: int) -> float:
    """P(|T| >= |t|) via the regularized incomplete beta function."""
    if math.isinf(t):
        return 0.0
    return float(min(1.0, special.betainc(df / 2, 0.5, df / (df + t * t))))


def paired_t_test(sample: PairedSample, confidence: float = 0.95) -> TTestResult:
    """
    Paired t-test on a - b.

    Zero variance is reported rather than raised: identical samples give t = 0
    and p = 1, a constant non-zero difference gives t = +-inf, p = 0 and
    degenerate = True.
    """
    a, b = np.asarray(sample.a, dtype=float), np.asarray(sample.b, dtype=float)
    d = a - b
    n = len(d)
    df = n - 1
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    common = dict(df=df, n=n, confidence=confidence, mean_a=float(a.mean()), mean_b=float(b.mean()))

    if sd == 0:
        if mean == 0:
            return TTestResult(t=0.0, p_two_sided=1.0, mean_diff=0.0, ci95_half_width=0.0, **common)
        logger.warning(f"Constant non-zero difference {mean} over {n} pairs; t-test is degenerate")
        return TTestResult(t=math.copysign(math.inf, mean), p_two_sided=0.0, mean_diff=mean,
                           ci95_half_width=0.0, degenerate=True, **common)

    se = sd / math.sqrt(n)
    t = mean / se
    return TTestResult(t=t, p_two_sided=t_two_sided_p(t, df), mean_diff=mean,
                       ci95_half_width=t_critical(df, confidence) * se, **common)


# --- RANSAC -----------------------------------------------------------------

@dataclass(frozen=True)
class RansacRun:
    size: int
    correlation: float
    inlier_ids: frozenset
    line: tuple[float, float]


@dataclass(frozen=True)
class RansacResult:
    inlier_ids: frozenset
    subset_correlation: float
    line: tuple[float, float]
    runs: tuple[RansacRun, ...] = ()
    outlier_ids: frozenset = field(default_factory=frozenset)


def _rank_key(correlation: float) -> float:
    return -math.inf if math.isnan(correlation) else correlation


def _single_run(x: np.ndarray, y: np.ndarray, ids: list, iterations: int, epsilon: float,
                rng: np.random.Generator) -> RansacRun:
    best_mask: Optional[np.ndarray] = None
    best_corr = -math.inf
    best_line = (0.0, 0.0)
    n = len(x)
    for _ in range(iterations):
        i, j = rng.choice(n, size=2, replace=False)
        if x[i] == x[j]:
            continue
        slope = (y[j] - y[i]) / (x[j] - x[i])
        intercept = y[i] - slope * x[i]
        mask = np.abs(y - (slope * x + intercept)) <= epsilon
        # sampled points always fit, so mask has at least two entries
        mask[i] = mask[j] = True
        size = int(mask.sum())
        best_size = -1 if best_mask is None else int(best_mask.sum())
        if size < best_size:
            continue
        corr = _rank_key(_spearman_or_nan(x[mask], y[mask]))
        if size > best_size or corr > best_corr:
            best_mask, best_corr, best_line = mask, corr, (float(slope), float(intercept))

    if best_mask is None:
        raise StatisticsError("every sampled pair had equal x; no line can be fitted")

    xs, ys = x[best_mask], y[best_mask]
    if np.ptp(xs) > 0:
        slope, intercept = np.polyfit(xs, ys, 1)
        best_line = (float(slope), float(intercept))
    inliers = frozenset(ids[k] for k in np.flatnonzero(best_mask))
    return RansacRun(len(inliers), _spearman_or_nan(xs, ys), inliers, best_line)


def ransac_consensus(points: Sequence[tuple[float, float]], iterations: int = 500, epsilon: float = 0.1,
                     seed: int = 0, runs: int = 1, ids: Optional[Sequence] = None) -> RansacResult:
    """
    Finds the largest set of points within epsilon of a line through two sampled points.

    Args:
        points: (x, y) pairs, e.g. (ruby, semantic).
        iterations: samples per run.
        epsilon: vertical residual tolerance.
        seed: root seed; each run gets its own spawned stream.
        runs: independent runs; the reported one has the median subset correlation.
        ids: labels for the points, defaults to their positions.

    Returns:
        RansacResult of the median run, with every run attached.
    """
    if len(points) < 2:
        raise StatisticsError("RANSAC needs at least two points")
    if not epsilon > 0:
        raise StatisticsError(f"epsilon must be positive, got {epsilon}")
    if runs < 1 or iterations < 1:
        raise StatisticsError("runs and iterations must be >= 1")
    ids = list(range(len(points))) if ids is None else list(ids)
    if len(ids) != len(points):
        raise StatisticsError("ids and points differ in length")

    arr = np.asarray(points, dtype=float)
    x, y = arr[:, 0], arr[:, 1]
    streams = np.random.SeedSequence(seed).spawn(runs)
    results = [_single_run(x, y, ids, iterations, epsilon, np.random.default_rng(s)) for s in streams]

    order = sorted(range(runs), key=lambda k: (_rank_key(results[k].correlation), k))
    chosen = results[order[(runs - 1) // 2]]
    logger.info(f"RANSAC: {runs} run(s), median subset of {chosen.size}/{len(points)} points, "
                f"correlation {chosen.correlation:.4f}")
    return RansacResult(
        inlier_ids=chosen.inlier_ids,
        subset_correlation=chosen.correlation,
        line=chosen.line,
        runs=tuple(results),
        outlier_ids=frozenset(ids) - chosen.inlier_ids,
    )


# --- survey sizing ----------------------------------------------------------

def sample_size(population: int, confidence: float = 0.95, margin: float = 0.05) -> int:
    """Sample size for a proportion at p = 0.5 with finite-population correction."""
    if population < 1:
        raise StatisticsError(f"population must be >= 1, got {population}")
    if not 0 < margin < 1:
        raise StatisticsError(f"margin must be in (0, 1), got {margin}")
    if not 0 < confidence < 1:
        raise StatisticsError(f"confidence must be in (0, 1), got {confidence}")
    z = float(sps.norm.ppf((1 + confidence) / 2))
    n0 = z * z * 0.25 / (margin * margin)
    n = math.ceil(n0 / (1 + (n0 - 1) / population))
    return min(n, population)
