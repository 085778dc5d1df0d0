"""
rubyeval core
-------------
Pure algorithms behind the scores.

Modules:
- minilang: tokenizer and recursive-descent parser for C-family methods.
- pdg: program dependence graphs (structural control dependence, reaching definitions).
- exas: n-path and (p,q)-node feature vectors of dependence graphs.
- metrics: BLEU, STS, TRS, GRS and the RUBY cascade.
- stats: Spearman, paired t-test, RANSAC consensus subsets, sample sizes.
"""
