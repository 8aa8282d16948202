"""Max-relevance / min-redundancy scoring with mutual information."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..data_model import Dataset
from ..errors import ArgumentError
from .mutual_info import (
    DEFAULT_BINS,
    DiscretizedFeature,
    discretize,
    labels_as_feature,
    mutual_information,
    pairwise_mi,
)
from .ranking import FeatureRanking, first_argmax

EPSILON = 1e-12


class MIView:
    """Discretized copy of a dataset with label relevance and pairwise MI cached."""

    def __init__(self, d: Dataset, bins: int = DEFAULT_BINS):
        self.names = list(d.feature_names)
        self.bins = bins
        self.label = labels_as_feature(d.labels)
        self.features: list[DiscretizedFeature] = [
            discretize(d.values[:, j], bins) for j in range(d.n_features)
        ]
        self.relevance = np.array([mutual_information(self.label, f) for f in self.features])
        self._pairs: np.ndarray | None = None

    @property
    def pairs(self) -> np.ndarray:
        if self._pairs is None:
            self._pairs = pairwise_mi(self.features)
        return self._pairs

    def index(self, names: Sequence[str]) -> list[int]:
        missing = [n for n in names if n not in self.names]
        if missing:
            raise ArgumentError("features not in dataset: " + ", ".join(missing))
        return [self.names.index(n) for n in names]

    def redundancy(self, subset: Sequence[int], i: int) -> float:
        """Sum of I(i, i') over i' in subset, i' != i, divided by |subset|^2."""
        others = [s for s in subset if s != i]
        return float(np.sum(self.pairs[i, others])) / len(subset) ** 2

    def quotients(self, subset: Sequence[int], eps: float = EPSILON) -> np.ndarray:
        """Per-feature I(l, i) / Q_{S,i} over ``subset`` with the eps guard."""
        idx = list(subset)
        block = self.pairs[np.ix_(idx, idx)]
        np.fill_diagonal(block, 0.0)
        red = block.sum(axis=1) / len(idx) ** 2
        return self.relevance[idx] / np.maximum(red, eps)


def relevance(d: Dataset, subset: Sequence[str], bins: int = DEFAULT_BINS) -> float:
    """Mean label mutual information over the subset."""
    if not subset:
        raise ArgumentError("relevance of an empty feature set is undefined")
    label = labels_as_feature(d.labels)
    total = sum(mutual_information(label, discretize(d.column(name), bins)) for name in subset)
    return total / len(subset)


def redundancy(d: Dataset, subset: Sequence[str], i: str, bins: int = DEFAULT_BINS) -> float:
    subset = list(subset)
    if i not in subset:
        raise ArgumentError(f"feature {i!r} is not in the subset")
    fi = discretize(d.column(i), bins)
    total = sum(
        mutual_information(fi, discretize(d.column(name), bins)) for name in subset if name != i
    )
    return total / len(subset) ** 2


def mrmr_quotient_rank(d: Dataset, m: int, bins: int = DEFAULT_BINS,
                       eps: float = EPSILON) -> FeatureRanking:
    """Greedy forward selection by subset relevance / candidate redundancy.

    Each candidate c is adjoined to the picks so far, S' = S + c, and scored
    as R_{S'} / Q_{S',c}: the mean label information over S' divided by c's
    redundancy within S'. A zero redundancy is replaced by ``eps``, so the
    first pick simply maximizes I(l, i). Near-ties go to the earlier feature.
    """
    n = d.n_features
    if not 1 <= m <= n:
        raise ArgumentError(f"m must lie in [1, {n}], got {m}")
    view = MIView(d, bins)
    chosen: list[int] = []
    scores: dict[str, float] = {}
    while len(chosen) < m:
        candidates = [c for c in range(n) if c not in chosen]
        size = len(chosen) + 1
        base = float(np.sum(view.relevance[chosen]))
        rel = (base + view.relevance[candidates]) / size
        if chosen:
            red = np.array([np.sum(view.pairs[c, chosen]) for c in candidates]) / size ** 2
        else:
            red = np.zeros(len(candidates))
        vals = rel / np.maximum(red, eps)
        pick = candidates[first_argmax(vals)]
        scores[view.names[pick]] = float(vals[candidates.index(pick)])
        chosen.append(pick)
    return FeatureRanking(
        order=tuple(view.names[c] for c in chosen),
        scores=scores,
        method="mrmr",
        params={"m": m, "bins": bins, "eps": eps},
    )
