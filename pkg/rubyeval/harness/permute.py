"""
BLEU-preserving permutations of translation candidates.

A candidate is split into fixed and movable segments, the movable ones are
shuffled among their slots, and a shuffle is only accepted when its clipped
n-gram statistics against the reference are identical to the original's.
Segmentations come from three strategies tried in order: statements of the
method body, cuts that share the same (max_n - 1)-token context on both sides,
and maximal runs of the candidate that occur verbatim in the reference.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from rubyeval.core.metrics import BleuConfig, bleu_stats
from rubyeval.core.minilang import TokenMode, TokenSequence, parse, tokenize
from rubyeval.harness.corpus import CorpusPair

logger = logging.getLogger(__name__)

EXHAUSTIVE_BLOCK_LIMIT = 6


@dataclass(frozen=True)
class Segmentation:
    segments: tuple[tuple[str, ...], ...]
    movable: tuple[int, ...]

    def arrange(self, order: Sequence[int]) -> tuple[str, ...]:
        """Places movable segment order[k] into the k-th movable slot."""
        placed = list(self.segments)
        for slot, src in zip(self.movable, order):
            placed[slot] = self.segments[self.movable[src]]
        return tuple(lx for seg in placed for lx in seg)


@dataclass(frozen=True)
class PermutationResult:
    tokens: TokenSequence
    strategy: Optional[str]

    @property
    def identity(self) -> bool:
        return self.strategy is None


def statement_blocks(candidate: TokenSequence) -> Optional[Segmentation]:
    """Top-level statements of a parseable single method body."""
    if candidate.mode is not TokenMode.LEXICAL or not parse(candidate).parsed:
        return None
    lexemes = candidate.lexemes
    try:
        start = lexemes.index("{")
    except ValueError:
        return None
    if lexemes[-1] != "}":
        return None
    body = lexemes[start + 1:-1]

    statements: list[tuple[str, ...]] = []
    current: list[str] = []
    braces = parens = 0
    for k, lx in enumerate(body):
        current.append(lx)
        if lx == "(":
            parens += 1
        elif lx == ")":
            parens -= 1
        elif lx == "{":
            braces += 1
        elif lx == "}":
            braces -= 1
        if braces or parens:
            continue
        follows = body[k + 1] if k + 1 < len(body) else None
        if lx == ";" or (lx == "}" and follows not in ("else", "while")):
            statements.append(tuple(current))
            current = []
    if current or braces or parens:
        # unbalanced body or several methods
        return None

    segments = [lexemes[:start + 1], *statements, ("}",)]
    return Segmentation(tuple(tuple(s) for s in segments), tuple(range(1, len(statements) + 1)))


def context_cuts(candidate: TokenSequence, max_n: int) -> Optional[Segmentation]:
    """
    Cuts whose k = max_n - 1 tokens on the left and on the right are the same
    everywhere. Every n-gram spanning a junction then looks the same after
    reordering the segments between the first and the last cut.
    """
    lexemes = candidate.lexemes
    k = max_n - 1
    groups: dict[tuple, list[int]] = {}
    edge = max(k, 1)
    for pos in range(edge, len(lexemes) - edge + 1):
        key = (lexemes[pos - k:pos], lexemes[pos:pos + k])
        groups.setdefault(key, []).append(pos)
    candidates = [cuts for cuts in groups.values() if len(cuts) >= 3]
    if not candidates:
        return None
    cuts = max(candidates, key=lambda c: (len(c), -c[0]))
    bounds = [0, *cuts, len(lexemes)]
    segments = tuple(lexemes[a:b] for a, b in zip(bounds, bounds[1:]))
    return Segmentation(segments, tuple(range(1, len(segments) - 1)))


def matched_blocks(reference: TokenSequence, candidate: TokenSequence) -> Optional[Segmentation]:
    """Greedy maximal runs of the candidate that appear contiguously in the reference."""
    ref, cand = reference.lexemes, candidate.lexemes

    def occurs(run: tuple[str, ...]) -> bool:
        n = len(run)
        return any(ref[i:i + n] == run for i in range(len(ref) - n + 1))

    segments: list[tuple[str, ...]] = []
    movable: list[int] = []
    i = 0
    while i < len(cand):
        j = i
        while j < len(cand) and occurs(cand[i:j + 1]):
            j += 1
        if j == i:
            segments.append((cand[i],))
            i += 1
        else:
            movable.append(len(segments))
            segments.append(cand[i:j])
            i = j
    if len(movable) < 2:
        return None
    return Segmentation(tuple(segments), tuple(movable))


def _orders(n_blocks: int, rng: np.random.Generator, max_attempts: int) -> Iterator[tuple[int, ...]]:
    identity = tuple(range(n_blocks))
    if n_blocks <= EXHAUSTIVE_BLOCK_LIMIT:
        orders = [p for p in itertools.permutations(identity) if p != identity]
        for idx in rng.permutation(len(orders))[:max_attempts]:
            yield orders[idx]
    else:
        for _ in range(max_attempts):
            order = tuple(int(x) for x in rng.permutation(n_blocks))
            if order != identity:
                yield order


def find_permutation(reference: TokenSequence, candidate: TokenSequence, cfg: Optional[BleuConfig] = None,
                     seed: int = 0, max_attempts: int = 200) -> PermutationResult:
    """
    Searches for a reordering of the candidate with unchanged BLEU statistics.

    Returns the identity, with strategy None, when nothing verifies.
    """
    cfg = cfg or BleuConfig()
    target = bleu_stats(reference, candidate, cfg.max_n)
    rng = np.random.default_rng(seed)
    strategies = (
        ("statements", statement_blocks(candidate)),
        ("context-cuts", context_cuts(candidate, cfg.max_n)),
        ("matched-blocks", matched_blocks(reference, candidate)),
    )
    for name, seg in strategies:
        if seg is None or len(seg.movable) < 2:
            continue
        for order in _orders(len(seg.movable), rng, max_attempts):
            lexemes = seg.arrange(order)
            if lexemes == candidate.lexemes:
                continue
            permuted = TokenSequence.from_lexemes(lexemes, candidate.mode)
            if bleu_stats(reference, permuted, cfg.max_n) == target:
                logger.debug(f"Permutation found by {name} strategy")
                return PermutationResult(permuted, name)

    logger.warning("No BLEU-preserving permutation found, keeping the candidate unchanged")
    return PermutationResult(candidate, None)


def permute_preserving_bleu(reference: TokenSequence, candidate: TokenSequence,
                            cfg: Optional[BleuConfig] = None, seed: int = 0,
                            max_attempts: int = 200) -> TokenSequence:
    return find_permutation(reference, candidate, cfg, seed, max_attempts).tokens


def join_tokens(tokens: TokenSequence) -> str:
    if tokens.mode is TokenMode.CHARACTER:
        return "".join(tokens.lexemes)
    return " ".join(tokens.lexemes)


def permute_corpus(pairs: Sequence[CorpusPair], cfg: Optional[BleuConfig] = None,
                   mode: TokenMode = TokenMode.LEXICAL, seed: int = 0,
                   max_attempts: int = 200) -> list[CorpusPair]:
    """
    Permutes every candidate. Semantic scores are dropped because they judged
    the unpermuted text.
    """
    out = []
    identities = 0
    for offset, pair in enumerate(pairs):
        result = find_permutation(tokenize(pair.reference, mode), tokenize(pair.candidate, mode),
                                  cfg, seed + offset, max_attempts)
        identities += result.identity
        text = join_tokens(result.tokens) if not result.identity else pair.candidate
        out.append(pair.model_copy(update={"candidate": text, "semantic_raw": None}))
    logger.info(f"Permuted {len(pairs) - identities} of {len(pairs)} candidates")
    return out
