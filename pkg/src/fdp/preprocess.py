"""Missing-value screening, min-max scaling and stratified holdout splits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data_model import Dataset
from .errors import ArgumentError, ImputationError, ParameterError, StratificationError

DEFAULT_MISSING_THRESHOLD = 0.30
DEFAULT_TRAIN_FRACTION = 0.70


def screen_missing(d: Dataset, threshold: float = DEFAULT_MISSING_THRESHOLD,
                   imputation: str = "mean") -> tuple[Dataset, list[str]]:
    """Drop features missing in more than ``threshold`` of samples, impute the rest.

    The comparison is strict: a feature missing in exactly ``threshold`` of
    the samples survives.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ArgumentError(f"threshold must lie in [0, 1], got {threshold}")
    if imputation not in ("mean", "median"):
        raise ArgumentError(f"unknown imputation mode {imputation!r}")
    miss = d.missing
    counts = miss.sum(axis=0)
    # compare counts rather than fractions to keep 30/100 vs 0.30 exact
    dropped_mask = counts > threshold * d.n_samples + 1e-9 * d.n_samples
    dropped = [n for n, drop in zip(d.feature_names, dropped_mask) if drop]
    keep = [j for j in range(d.n_features) if not dropped_mask[j]]
    values = d.values[:, keep].copy()
    for col, j in enumerate(keep):
        gaps = miss[:, j]
        if not gaps.any():
            continue
        present = values[~gaps, col]
        if present.size == 0:
            raise ImputationError(f"feature {d.feature_names[j]} has no observed values")
        fill = present.mean() if imputation == "mean" else np.median(present)
        values[gaps, col] = fill
    names = [d.feature_names[j] for j in keep]
    return d.replace(feature_names=names, values=values), dropped


@dataclass(frozen=True)
class NormalizationParams:
    feature_names: tuple[str, ...]
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        if np.any(self.mins > self.maxs):
            raise ParameterError("min exceeds max for some feature")

    def bounds(self, name: str) -> tuple[float, float]:
        j = self.feature_names.index(name)
        return float(self.mins[j]), float(self.maxs[j])


def fit_minmax(d: Dataset) -> NormalizationParams:
    if d.missing.any():
        raise ArgumentError("fit_minmax needs a fully observed dataset; run screen_missing first")
    return NormalizationParams(tuple(d.feature_names), d.values.min(axis=0), d.values.max(axis=0))


def minmax_array(X: np.ndarray, mins: np.ndarray, maxs: np.ndarray) -> np.ndarray:
    span = maxs - mins
    safe = np.where(span > 0, span, 1.0)
    out = (X - mins) / safe
    out = np.where(span > 0, out, 0.0)
    return np.clip(out, 0.0, 1.0)


def apply_minmax(d: Dataset, p: NormalizationParams) -> Dataset:
    absent = [n for n in d.feature_names if n not in p.feature_names]
    if absent:
        raise ParameterError("no normalization parameters for: " + ", ".join(absent))
    idx = [p.feature_names.index(n) for n in d.feature_names]
    return d.replace(values=minmax_array(d.values, p.mins[idx], p.maxs[idx]))


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5 + 1e-9))


def stratified_counts(class_sizes: dict[int, int], train_fraction: float) -> dict[int, int]:
    """Training-set size per class label."""
    return {label: round_half_up(size * train_fraction) for label, size in class_sizes.items()}


def split(d: Dataset, train_fraction: float = DEFAULT_TRAIN_FRACTION,
          seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seeded stratified holdout split; rows keep their original order in each part."""
    if not 0.0 < train_fraction < 1.0:
        raise ArgumentError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_rows: list[int] = []
    for label in (1, -1):
        members = np.flatnonzero(d.labels == label)
        if members.size == 0:
            raise StratificationError(f"no samples with label {label:+d}")
        n_train = stratified_counts({label: members.size}, train_fraction)[label]
        if n_train == 0 or n_train == members.size:
            raise StratificationError(
                f"class {label:+d} of size {members.size} leaves an empty "
                f"{'train' if n_train == 0 else 'test'} part at fraction {train_fraction}"
            )
        train_rows.extend(rng.permutation(members)[:n_train].tolist())
    train_rows.sort()
    chosen = set(train_rows)
    test_rows = [i for i in range(d.n_samples) if i not in chosen]
    return d.take(train_rows), d.take(test_rows)
