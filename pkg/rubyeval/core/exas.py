"""
Exas-style structural features of dependence graphs: labelled n-paths and
(p,q)-nodes, counted into occurrence vectors and compared by their 1-norm.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Optional

import networkx as nx
import numpy as np

from .pdg import DependenceGraph, NodeKind

logger = logging.getLogger(__name__)

DEFAULT_MAX_PATH_LENGTH = 3


class ExasError(ValueError):
    pass


class FeatureVariant(str, Enum):
    NPATH = "npath"
    PQNODE = "pqnode"


@dataclass(frozen=True, order=True)
class Feature:
    variant: FeatureVariant
    labels: tuple[str, ...]
    p: int = 0
    q: int = 0

    @classmethod
    def npath(cls, *labels: str) -> "Feature":
        return cls(FeatureVariant.NPATH, tuple(labels))

    @classmethod
    def pqnode(cls, label: str, p: int, q: int) -> "Feature":
        return cls(FeatureVariant.PQNODE, (label,), p, q)

    def __str__(self) -> str:
        if self.variant is FeatureVariant.PQNODE:
            return f"{self.labels[0]}-{self.p}-{self.q}"
        return "-".join(self.labels)


class FeatureIndex:
    """Position assignment over the union of feature supports, in sorted order."""

    def __init__(self, *vectors: "FeatureVector"):
        features = set()
        for v in vectors:
            features.update(v.counts)
        self.features: tuple[Feature, ...] = tuple(sorted(features))
        self.positions = {f: i for i, f in enumerate(self.features)}

    def __len__(self) -> int:
        return len(self.features)


@dataclass(frozen=True)
class FeatureVector:
    counts: Mapping[Feature, int]

    def __post_init__(self):
        if any(c < 1 for c in self.counts.values()):
            raise ExasError("feature counts must be >= 1")

    @classmethod
    def from_counter(cls, counter: Counter) -> "FeatureVector":
        return cls({f: c for f, c in counter.items() if c > 0})

    @property
    def mass(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, feature: Feature) -> int:
        return self.counts.get(feature, 0)

    def dense(self, index: Optional[FeatureIndex] = None) -> np.ndarray:
        index = index or FeatureIndex(self)
        out = np.zeros(len(index), dtype=np.int64)
        for f, c in self.counts.items():
            out[index.positions[f]] = c
        return out


def _paths(walk: nx.DiGraph, start: int, max_len: int) -> Iterator[tuple[int, ...]]:
    stack = [(start,)]
    while stack:
        path = stack.pop()
        yield path
        if len(path) < max_len:
            stack.extend(path + (nxt,) for nxt in walk.successors(path[-1]) if nxt not in path)


def extract_features(g: DependenceGraph, max_path_length: int = DEFAULT_MAX_PATH_LENGTH) -> FeatureVector:
    """
    Counts every simple directed label path of 1..max_path_length nodes and
    every (label, in-degree, out-degree) triple.

    The entry node contributes nothing, but the edges it sends still count
    towards the degrees of the nodes it controls.
    """
    if max_path_length < 1:
        raise ExasError(f"max_path_length must be >= 1, got {max_path_length}")
    mg = g.to_networkx()
    program = mg.subgraph(n for n, kind in mg.nodes(data="kind") if kind != NodeKind.ENTRY.value)
    if program.number_of_nodes() == 0:
        raise ExasError("graph has no program nodes")
    # control and data edges between the same nodes walk as one step
    walk = nx.DiGraph(program)

    counts: Counter = Counter()
    for nid, label in program.nodes(data="label"):
        counts[Feature.pqnode(label, mg.in_degree(nid), mg.out_degree(nid))] += 1
        for path in _paths(walk, nid, max_path_length):
            counts[Feature.npath(*(mg.nodes[i]["label"] for i in path))] += 1
    return FeatureVector.from_counter(counts)


@dataclass(frozen=True)
class VectorDistance:
    distance: int
    mass: int

    @property
    def similarity(self) -> float:
        return 1.0 - self.distance / self.mass


def vector_distance(v1: FeatureVector, v2: FeatureVector) -> VectorDistance:
    """1-norm of the difference and total mass over the union index."""
    index = FeatureIndex(v1, v2)
    if len(index) == 0:
        raise ExasError("both feature vectors are empty")
    a, b = v1.dense(index), v2.dense(index)
    return VectorDistance(int(np.abs(a - b).sum()), int((a + b).sum()))
