"""Backward elimination driven by linear-SVM weights, optionally blended with MRMR."""

from __future__ import annotations

import numpy as np

from ..data_model import Dataset
from ..errors import ArgumentError
from .mrmr import EPSILON, MIView
from .mutual_info import DEFAULT_BINS
from .ranking import FeatureRanking, TraceEntry, first_argmin, minmax_scores
from .svm import DEFAULT_C, train_linear_svm

DEFAULT_BETAS = (0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0)


def _check_ready(d: Dataset):
    if d.missing.any():
        raise ArgumentError("feature selection needs a fully observed dataset")
    pos, neg = d.class_counts()
    if pos == 0 or neg == 0:
        raise ArgumentError("feature selection needs both classes")


def _svm_weights(d: Dataset, cols: list[int], C: float) -> np.ndarray:
    model = train_linear_svm(d.values[:, cols], d.labels, C)
    return np.abs(model.weights)


def _ranking_from_trace(trace, method, beta, params) -> FeatureRanking:
    return FeatureRanking(
        order=tuple(e.feature for e in reversed(trace)),
        scores={e.feature: e.score for e in trace},
        elimination_trace=tuple(trace),
        beta=beta,
        method=method,
        params=params,
    )


def svm_rfe(d: Dataset, C: float = DEFAULT_C) -> FeatureRanking:
    """Remove the feature with the smallest |w_i| until none remain."""
    _check_ready(d)
    alive = list(range(d.n_features))
    trace = []
    it = 0
    while alive:
        w_abs = _svm_weights(d, alive, C)
        k = first_argmin(w_abs)
        trace.append(TraceEntry(it, d.feature_names[alive[k]], float(w_abs[k])))
        del alive[k]
        it += 1
    return _ranking_from_trace(trace, "svm-rfe", 1.0, {"C": C})


def combined_score(beta: float, w_abs_norm, mrmr_quotient_norm):
    """beta * |w| term + (1 - beta) * MRMR quotient term, both already in [0, 1]."""
    if not 0.0 <= beta <= 1.0:
        raise ArgumentError(f"beta must lie in [0, 1], got {beta}")
    return beta * w_abs_norm + (1.0 - beta) * mrmr_quotient_norm


def mrmr_svm_rfe(d: Dataset, beta: float, C: float = DEFAULT_C, bins: int = DEFAULT_BINS,
                 eps: float = EPSILON) -> FeatureRanking:
    """Backward elimination on a convex blend of SVM weight and MRMR quotient.

    Each round trains a linear SVM on the surviving set S, rescales |w_i|
    and I(l, i) / Q_{S,i} to [0, 1] over S, and drops the feature with the
    lowest blended score. The returned order is the reverse of removal.
    """
    if not 0.0 <= beta <= 1.0:
        raise ArgumentError(f"beta must lie in [0, 1], got {beta}")
    _check_ready(d)
    view = MIView(d, bins)
    alive = list(range(d.n_features))
    trace = []
    it = 0
    while alive:
        if beta > 0.0:
            w_term = minmax_scores(_svm_weights(d, alive, C))
        else:
            w_term = np.zeros(len(alive))
        if beta < 1.0:
            q_term = minmax_scores(view.quotients(alive, eps))
        else:
            q_term = np.zeros(len(alive))
        r = combined_score(beta, w_term, q_term)
        k = first_argmin(r)
        trace.append(TraceEntry(it, d.feature_names[alive[k]], float(r[k])))
        del alive[k]
        it += 1
    return _ranking_from_trace(trace, "mrmr-svm-rfe", beta, {"C": C, "bins": bins, "eps": eps})
