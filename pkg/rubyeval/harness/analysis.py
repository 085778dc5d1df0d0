import logging
from dataclasses import dataclass
from typing import Sequence

from rubyeval.core.metrics import ScoreRecord
from rubyeval.core.stats import (
    PairedSample,
    RansacResult,
    StatisticsError,
    TTestResult,
    paired_t_test,
    ransac_consensus,
)

logger = logging.getLogger(__name__)

COMPARABLE_METRICS = ("bleu", "sts", "trs", "grs", "ruby", "semantic")


class IdMismatchError(ValueError):
    def __init__(self, difference: set):
        self.difference = difference
        shown = ", ".join(sorted(difference)[:10])
        more = f" and {len(difference) - 10} more" if len(difference) > 10 else ""
        super().__init__(f"reports cover different ids: {shown}{more}")


def paired_values(records_a: Sequence[ScoreRecord], records_b: Sequence[ScoreRecord],
                  metric: str) -> PairedSample:
    """Aligns two reports by id; pairs missing the metric on either side are left out."""
    if metric not in COMPARABLE_METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    by_a = {r.pair_id: r for r in records_a}
    by_b = {r.pair_id: r for r in records_b}
    difference = set(by_a) ^ set(by_b)
    if difference:
        raise IdMismatchError(difference)

    ids, a, b = [], [], []
    for pid in sorted(by_a):
        va, vb = getattr(by_a[pid], metric), getattr(by_b[pid], metric)
        if va is None or vb is None:
            continue
        ids.append(pid)
        a.append(va)
        b.append(vb)
    skipped = len(by_a) - len(ids)
    if skipped:
        logger.warning(f"{skipped} pairs lack {metric} on one side and were left out")
    return PairedSample(tuple(ids), tuple(a), tuple(b))


def compare_models(records_a: Sequence[ScoreRecord], records_b: Sequence[ScoreRecord],
                   metric: str = "ruby", confidence: float = 0.95) -> TTestResult:
    """Paired t-test of model A against model B on one metric."""
    return paired_t_test(paired_values(records_a, records_b, metric), confidence)


@dataclass(frozen=True)
class DecisionAgreement:
    metric: str
    reference_metric: str
    metric_test: TTestResult
    reference_test: TTestResult
    metric_significant: bool
    reference_significant: bool

    @property
    def same_direction(self) -> bool:
        return (self.metric_test.mean_diff > 0) == (self.reference_test.mean_diff > 0)

    @property
    def agree(self) -> bool:
        if self.metric_significant != self.reference_significant:
            return False
        return not self.metric_significant or self.same_direction


def decision_agreement(records_a: Sequence[ScoreRecord], records_b: Sequence[ScoreRecord],
                       metric: str = "ruby", reference_metric: str = "semantic",
                       confidence: float = 0.95) -> DecisionAgreement:
    """Whether a metric ranks two models the way the human scores do."""
    alpha = 1 - confidence
    mt = compare_models(records_a, records_b, metric, confidence)
    rt = compare_models(records_a, records_b, reference_metric, confidence)
    return DecisionAgreement(metric, reference_metric, mt, rt, mt.p_two_sided < alpha, rt.p_two_sided < alpha)


def consensus_subsets(records: Sequence[ScoreRecord], iterations: int = 500, epsilon: float = 0.1,
                      seed: int = 0, runs: int = 10, metric: str = "ruby") -> RansacResult:
    """RANSAC over (metric, semantic) for the records that carry a human score."""
    scored = [r for r in records if r.semantic is not None and getattr(r, metric) is not None]
    if len(scored) < 2:
        raise StatisticsError(f"need at least two records with both {metric} and semantic scores")
    points = [(getattr(r, metric), r.semantic) for r in scored]
    return ransac_consensus(points, iterations, epsilon, seed, runs=runs, ids=[r.pair_id for r in scored])
