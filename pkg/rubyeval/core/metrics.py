"""
The five similarity scores: BLEU, STS, TRS, GRS and the RUBY cascade over them.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import zss
from pydantic import BaseModel, Field
from rapidfuzz.distance import Levenshtein

from .exas import extract_features, vector_distance
from .minilang import SyntaxTree, TokenMode, TokenSequence, parse_source, tokenize
from .pdg import DependenceGraph, build_pdg, is_applicable

logger = logging.getLogger(__name__)


class MetricError(ValueError):
    pass


class RubyError(ValueError):
    """The reference of a pair cannot be parsed."""


class BpMode(str, Enum):
    RATIO = "ratio"
    EXPONENTIAL = "exponential"


class ZeroPolicy(str, Enum):
    SCORE_ZERO = "score-zero"
    ADD_ONE = "add-one-smoothing"


class StsNorm(str, Enum):
    MAX_LENGTH = "max-length"
    REFERENCE_LENGTH = "reference-length"


class RubyLevel(str, Enum):
    GRS = "GRS"
    TRS = "TRS"
    STS = "STS"


class BleuConfig(BaseModel):
    max_n: int = Field(4, ge=1)
    bp_mode: BpMode = BpMode.RATIO
    zero_ngram_policy: ZeroPolicy = ZeroPolicy.SCORE_ZERO


class MetricOptions(BaseModel):
    bleu: BleuConfig = Field(default_factory=BleuConfig)
    token_mode: TokenMode = TokenMode.LEXICAL
    sts_norm: StsNorm = StsNorm.MAX_LENGTH
    ted_exact_limit: int = Field(200, ge=1)
    grs_max_path_length: int = Field(1, ge=1)

    @classmethod
    def from_settings(cls, settings) -> "MetricOptions":
        return cls(
            bleu=BleuConfig(
                max_n=settings.BLEU_MAX_N,
                bp_mode=settings.BLEU_BP_MODE,
                zero_ngram_policy=settings.BLEU_ZERO_POLICY,
            ),
            token_mode=settings.TOKEN_MODE,
            sts_norm=settings.STS_NORM,
            ted_exact_limit=settings.TED_EXACT_LIMIT,
            grs_max_path_length=settings.GRS_MAX_PATH_LENGTH,
        )


class ScoreRecord(BaseModel):
    pair_id: str = ""
    bleu: float
    sts: float
    trs: Optional[float] = None
    grs: Optional[float] = None
    ruby: float
    ruby_level: RubyLevel
    semantic: Optional[float] = None
    flags: list[str] = Field(default_factory=list)


# --- BLEU -------------------------------------------------------------------

def _ngrams(lexemes: Sequence[str], n: int) -> Counter:
    return Counter(tuple(lexemes[i:i + n]) for i in range(len(lexemes) - n + 1))


@dataclass(frozen=True)
class BleuStats:
    """Clipped n-gram matches and totals for orders 1..max_n."""
    matches: tuple[int, ...]
    totals: tuple[int, ...]
    candidate_length: int
    reference_length: int

    def precisions(self, policy: ZeroPolicy = ZeroPolicy.SCORE_ZERO) -> list[Fraction]:
        out = []
        for i, (m, t) in enumerate(zip(self.matches, self.totals), start=1):
            if policy is ZeroPolicy.ADD_ONE and i >= 2:
                out.append(Fraction(m + 1, t + 1))
            else:
                out.append(Fraction(m, t) if t else Fraction(0))
        return out

    def brevity_penalty(self, mode: BpMode = BpMode.RATIO):
        c, r = self.candidate_length, self.reference_length
        if c > r:
            return Fraction(1)
        if c == 0:
            return Fraction(0)
        if BpMode(mode) is BpMode.RATIO:
            return Fraction(c, r)
        return math.exp(1 - r / c)


def bleu_stats(reference: TokenSequence, candidate: TokenSequence, max_n: int = 4) -> BleuStats:
    ref, cand = reference.lexemes, candidate.lexemes
    matches, totals = [], []
    for n in range(1, max_n + 1):
        ref_grams, cand_grams = _ngrams(ref, n), _ngrams(cand, n)
        matches.append(sum((ref_grams & cand_grams).values()))
        totals.append(sum(cand_grams.values()))
    return BleuStats(tuple(matches), tuple(totals), len(cand), len(ref))


def bleu_with_flags(reference: TokenSequence, candidate: TokenSequence,
                    cfg: Optional[BleuConfig] = None) -> tuple[float, list[str]]:
    cfg = cfg or BleuConfig()
    if len(reference) == 0:
        raise MetricError("BLEU reference is empty")
    if len(candidate) == 0:
        logger.warning("BLEU candidate is empty, scoring 0")
        return 0.0, ["bleu-empty-candidate"]

    stats = bleu_stats(reference, candidate, cfg.max_n)
    precisions = stats.precisions(cfg.zero_ngram_policy)
    if any(p == 0 for p in precisions):
        return 0.0, []
    log_mean = math.fsum(math.log(p) for p in precisions) / cfg.max_n
    score = float(stats.brevity_penalty(cfg.bp_mode)) * math.exp(log_mean)
    return min(max(score, 0.0), 1.0), []


def bleu(reference: TokenSequence, candidate: TokenSequence, cfg: Optional[BleuConfig] = None) -> float:
    """
    Sentence-level BLEU with clipped n-gram precisions.

    Args:
        reference: non-empty reference tokens.
        candidate: translated tokens.
        cfg: order, brevity penalty form and zero-precision policy.

    Returns:
        Score in [0, 1]. An empty candidate scores 0.
    """
    return bleu_with_flags(reference, candidate, cfg)[0]


# --- STS --------------------------------------------------------------------

def sed(reference: TokenSequence, candidate: TokenSequence) -> int:
    """Unit-cost token Levenshtein distance."""
    return Levenshtein.distance(list(reference.lexemes), list(candidate.lexemes))


def sts_with_flags(reference: TokenSequence, candidate: TokenSequence,
                   norm: StsNorm = StsNorm.MAX_LENGTH) -> tuple[float, list[str]]:
    if len(reference) == 0:
        raise MetricError("STS reference is empty")
    distance = sed(reference, candidate)
    if StsNorm(norm) is StsNorm.REFERENCE_LENGTH:
        denom = len(reference)
    else:
        denom = max(len(reference), len(candidate))
    score = 1 - distance / denom
    if score < 0:
        logger.warning(f"STS {score:.4f} below zero under {norm} normalisation, clamping")
        return 0.0, ["sts-clamped"]
    return score, []


def sts(reference: TokenSequence, candidate: TokenSequence, norm: StsNorm = StsNorm.MAX_LENGTH) -> float:
    return sts_with_flags(reference, candidate, norm)[0]


# --- TRS --------------------------------------------------------------------

def update_cost(a, b) -> int:
    """0 for equal nodes, 1 for a relabel within a kind, 2 (delete plus insert) across kinds."""
    if a.label != b.label:
        return 2
    return 0 if a.value == b.value else 1


def exact_ted(t1: SyntaxTree, t2: SyntaxTree) -> int:
    """Zhang-Shasha ordered tree edit distance over (tree, node id) handles."""
    def children(handle):
        tree, nid = handle
        return [(tree, c) for c in tree.node(nid).children]

    def cost(a, b):
        return update_cost(a[0].node(a[1]), b[0].node(b[1]))

    return int(zss.distance(
        (t1, t1.root), (t2, t2.root), children,
        insert_cost=lambda _: 1, remove_cost=lambda _: 1, update_cost=cost,
    ))


def top_down_ted(t1: SyntaxTree, t2: SyntaxTree) -> int:
    """
    Upper bound of the tree edit distance from a top-down restricted mapping:
    child lists are aligned by dynamic programming with subtree sizes as gap costs.
    """
    size1 = {n: t1.subtree_size(n) for n in range(t1.size)}
    size2 = {n: t2.subtree_size(n) for n in range(t2.size)}
    memo: dict[tuple[int, int], int] = {}

    def dist(a: int, b: int) -> int:
        key = (a, b)
        if key in memo:
            return memo[key]
        na, nb = t1.node(a), t2.node(b)
        if na.label != nb.label:
            result = size1[a] + size2[b]
        else:
            ka, kb = na.children, nb.children
            row = [0] * (len(kb) + 1)
            for j in range(1, len(kb) + 1):
                row[j] = row[j - 1] + size2[kb[j - 1]]
            for i in range(1, len(ka) + 1):
                prev = row
                row = [prev[0] + size1[ka[i - 1]]] + [0] * len(kb)
                for j in range(1, len(kb) + 1):
                    row[j] = min(
                        prev[j] + size1[ka[i - 1]],
                        row[j - 1] + size2[kb[j - 1]],
                        prev[j - 1] + dist(ka[i - 1], kb[j - 1]),
                    )
            result = (0 if na.value == nb.value else 1) + row[-1]
        memo[key] = result
        return result

    return dist(t1.root, t2.root)


def ted(t1: SyntaxTree, t2: SyntaxTree, exact_limit: int = 200) -> tuple[int, bool]:
    """Returns (distance, approximate)."""
    if max(t1.size, t2.size) <= exact_limit:
        return exact_ted(t1, t2), False
    logger.warning(f"Trees of {t1.size} and {t2.size} nodes exceed exact limit {exact_limit}, using top-down bound")
    return top_down_ted(t1, t2), True


def trs_with_flags(reference: SyntaxTree, candidate: SyntaxTree, exact_limit: int = 200) -> tuple[float, list[str]]:
    distance, approximate = ted(reference, candidate, exact_limit)
    score = 1 - distance / (reference.size + candidate.size)
    return score, (["trs-approximate"] if approximate else [])


def trs(reference: SyntaxTree, candidate: SyntaxTree, exact_limit: int = 200) -> float:
    return trs_with_flags(reference, candidate, exact_limit)[0]


# --- GRS --------------------------------------------------------------------

def grs(reference: DependenceGraph, candidate: DependenceGraph, max_path_length: int = 1) -> float:
    """Exas similarity of the two graphs' feature vectors."""
    d = vector_distance(extract_features(reference, max_path_length),
                        extract_features(candidate, max_path_length))
    return d.similarity


# --- RUBY -------------------------------------------------------------------

def ruby(reference_source: str, candidate_source: str, options: Optional[MetricOptions] = None,
         *, pair_id: str = "", semantic: Optional[float] = None) -> ScoreRecord:
    """
    Scores one pair and picks the most structural applicable level:
    GRS when both sides have a dependence graph, TRS when both parse, STS otherwise.

    Raises:
        RubyError: the reference does not parse.
    """
    options = options or MetricOptions()
    ref_parse = parse_source(reference_source)
    if not ref_parse.parsed:
        raise RubyError(f"reference does not parse: {ref_parse.diagnostics[0]}")
    cand_parse = parse_source(candidate_source)

    ref_tokens = tokenize(reference_source, options.token_mode)
    cand_tokens = tokenize(candidate_source, options.token_mode)
    flags: list[str] = []

    bleu_score, f = bleu_with_flags(ref_tokens, cand_tokens, options.bleu)
    flags += f
    sts_score, f = sts_with_flags(ref_tokens, cand_tokens, options.sts_norm)
    flags += f

    trs_score = grs_score = None
    if cand_parse.parsed:
        trs_score, f = trs_with_flags(ref_parse.tree, cand_parse.tree, options.ted_exact_limit)
        flags += f
        ref_pdg = build_pdg(ref_parse.tree)
        cand_pdg = build_pdg(cand_parse.tree)
        if not is_applicable(ref_pdg):
            flags.append("pdg-not-applicable:reference")
        if not is_applicable(cand_pdg):
            flags.append("pdg-not-applicable:candidate")
        if is_applicable(ref_pdg) and is_applicable(cand_pdg):
            grs_score = grs(ref_pdg, cand_pdg, options.grs_max_path_length)

    if grs_score is not None:
        level, score = RubyLevel.GRS, grs_score
    elif trs_score is not None:
        level, score = RubyLevel.TRS, trs_score
    else:
        level, score = RubyLevel.STS, sts_score
    logger.debug(f"Pair {pair_id or '<anon>'} scored at {level.value}: {score:.4f}")

    return ScoreRecord(
        pair_id=pair_id, bleu=bleu_score, sts=sts_score, trs=trs_score, grs=grs_score,
        ruby=score, ruby_level=level, semantic=semantic, flags=flags,
    )
