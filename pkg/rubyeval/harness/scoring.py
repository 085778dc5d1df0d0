import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from pydantic import BaseModel, Field

from rubyeval.core.metrics import MetricOptions, RubyLevel, ScoreRecord, ruby
from rubyeval.core.stats import StatisticsError, spearman
from rubyeval.harness.corpus import CorpusPair

logger = logging.getLogger(__name__)

METRICS = ("bleu", "sts", "trs", "grs", "ruby")


class CorpusFailure(BaseModel):
    pair_id: str
    error: str


class CorpusSummary(BaseModel):
    count: int
    failures: int
    means: dict[str, Optional[float]]
    ruby_levels: dict[str, int]
    applicability: dict[str, int]
    flags: dict[str, int]
    spearman_vs_semantic: dict[str, Optional[float]]


class CorpusReport(BaseModel):
    records: list[ScoreRecord]
    failures: list[CorpusFailure] = Field(default_factory=list)
    summary: CorpusSummary


def score_pair(pair: CorpusPair, options: Optional[MetricOptions] = None) -> ScoreRecord:
    return ruby(pair.reference, pair.candidate, options, pair_id=pair.id, semantic=pair.semantic)


def _score_or_fail(pair: CorpusPair, options: MetricOptions):
    try:
        return score_pair(pair, options)
    except Exception as e:
        logger.warning(f"Quarantined pair {pair.id}: {type(e).__name__}: {e}")
        return CorpusFailure(pair_id=pair.id, error=str(e))


def _mean(values: list[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if values else None


def _spearman_or_none(x: list[float], y: list[float]) -> Optional[float]:
    if len(x) < 2:
        return None
    try:
        return spearman(x, y)
    except StatisticsError:
        return None


def summarize(records: Sequence[ScoreRecord], failures: Sequence[CorpusFailure] = ()) -> CorpusSummary:
    """Aggregates records; sorted by id first so input order never shows in the result."""
    ordered = sorted(records, key=lambda r: r.pair_id)
    means = {m: _mean([getattr(r, m) for r in ordered if getattr(r, m) is not None]) for m in METRICS}
    means["semantic"] = _mean([r.semantic for r in ordered if r.semantic is not None])

    correlations = {}
    for m in METRICS:
        pts = [(getattr(r, m), r.semantic) for r in ordered
               if getattr(r, m) is not None and r.semantic is not None]
        correlations[m] = _spearman_or_none([p[0] for p in pts], [p[1] for p in pts])

    levels = Counter(r.ruby_level.value for r in ordered)
    flags = Counter(f for r in ordered for f in r.flags)
    return CorpusSummary(
        count=len(ordered),
        failures=len(failures),
        means=means,
        ruby_levels={lvl.value: levels.get(lvl.value, 0) for lvl in RubyLevel},
        applicability={
            "ast": sum(1 for r in ordered if r.trs is not None),
            "pdg": sum(1 for r in ordered if r.grs is not None),
        },
        flags=dict(sorted(flags.items())),
        spearman_vs_semantic=correlations,
    )


def score_corpus(pairs: Sequence[CorpusPair], options: Optional[MetricOptions] = None,
                 workers: int = 1) -> CorpusReport:
    """
    Scores every pair; a pair whose scoring fails is quarantined, never fatal.

    Args:
        pairs: corpus pairs, at least one.
        options: metric options, defaults when omitted.
        workers: thread pool size; records keep input order either way.

    Returns:
        CorpusReport with records in input order, failures and summary.
    """
    if not pairs:
        raise ValueError("cannot score an empty corpus")
    options = options or MetricOptions()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda p: _score_or_fail(p, options), pairs))
    else:
        outcomes = [_score_or_fail(p, options) for p in pairs]

    records = [o for o in outcomes if isinstance(o, ScoreRecord)]
    failures = [o for o in outcomes if isinstance(o, CorpusFailure)]
    logger.info(f"Scored {len(records)} pairs, {len(failures)} quarantined")
    return CorpusReport(records=records, failures=failures, summary=summarize(records, failures))
