from .corpus import CorpusPair, load_corpus
from .scoring import CorpusReport, score_corpus

__all__ = ["CorpusPair", "CorpusReport", "load_corpus", "score_corpus"]
