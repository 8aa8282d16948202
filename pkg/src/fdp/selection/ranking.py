from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ArgumentError

TIE_RTOL = 1e-12
TIE_ATOL = 1e-15


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    feature: str
    score: float


@dataclass(frozen=True)
class FeatureRanking:
    """Features from most to least important.

    For recursive methods ``elimination_trace`` lists removals in order, so
    ``order`` is the trace reversed.
    """

    order: tuple[str, ...]
    scores: dict[str, float]
    elimination_trace: tuple[TraceEntry, ...] = ()
    beta: float | None = None
    method: str = ""
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.order)

    def rank_of(self, feature: str) -> int:
        """1-based rank."""
        return self.order.index(feature) + 1


def select_top_k(r: FeatureRanking, k: int) -> list[str]:
    if k < 1 or k > len(r.order):
        raise ArgumentError(f"k must lie in [1, {len(r.order)}], got {k}")
    return list(r.order[:k])


def first_argmax(values) -> int:
    """Index of the maximum; near-ties (1e-12 relative) go to the lowest index."""
    v = np.asarray(values, dtype=float)
    best = np.max(v)
    tied = v >= best - (TIE_RTOL * abs(best) + TIE_ATOL)
    return int(np.flatnonzero(tied)[0])


def first_argmin(values) -> int:
    """Index of the minimum; ties within 1e-12 of the value range go to the lowest index."""
    v = np.asarray(values, dtype=float)
    lo = np.min(v)
    span = np.max(v) - lo
    tied = v - lo <= TIE_RTOL * span
    return int(np.flatnonzero(tied)[0])


def minmax_scores(values) -> np.ndarray:
    """Rescale to [0, 1] over the current set; a constant vector maps to zeros."""
    v = np.asarray(values, dtype=float)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)
