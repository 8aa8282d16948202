"""Equal-width discretization and plug-in mutual information (nats)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ArgumentError, DomainError, ShapeError

DEFAULT_BINS = 5


@dataclass(frozen=True, eq=False)
class DiscretizedFeature:
    bin_indices: np.ndarray
    bin_count: int

    def __post_init__(self):
        idx = np.asarray(self.bin_indices, dtype=np.int64)
        if self.bin_count < 1:
            raise ArgumentError("bin_count must be positive")
        if idx.size and (idx.min() < 0 or idx.max() >= self.bin_count):
            raise DomainError(f"bin index outside [0, {self.bin_count})")
        object.__setattr__(self, "bin_indices", idx)

    def __len__(self):
        return self.bin_indices.size


def discretize(values, bin_count: int = DEFAULT_BINS) -> DiscretizedFeature:
    """Equal-width bins over [min, max]; the maximum lands in the top bin."""
    if bin_count < 2:
        raise ArgumentError(f"bin_count must be at least 2, got {bin_count}")
    v = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(v)):
        raise DomainError("cannot discretize non-finite values")
    if v.size == 0:
        return DiscretizedFeature(np.zeros(0, dtype=np.int64), bin_count)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return DiscretizedFeature(np.zeros(v.size, dtype=np.int64), bin_count)
    idx = np.floor((v - lo) / (hi - lo) * bin_count).astype(np.int64)
    return DiscretizedFeature(np.clip(idx, 0, bin_count - 1), bin_count)


def labels_as_feature(labels) -> DiscretizedFeature:
    """Map {-1, +1} labels onto bins {0, 1}."""
    y = np.asarray(labels)
    return DiscretizedFeature((y > 0).astype(np.int64), 2)


def joint_counts(a: DiscretizedFeature, b: DiscretizedFeature) -> np.ndarray:
    if len(a) != len(b):
        raise ShapeError(f"sample counts differ: {len(a)} vs {len(b)}")
    flat = a.bin_indices * b.bin_count + b.bin_indices
    return np.bincount(flat, minlength=a.bin_count * b.bin_count).reshape(a.bin_count, b.bin_count)


def mutual_information_from_counts(counts: np.ndarray) -> float:
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    # integer-valued marginals are exact, whatever the reduction order
    ca = counts.sum(axis=1, keepdims=True)
    cb = counts.sum(axis=0, keepdims=True)
    nz = counts > 0
    c = counts[nz]
    terms = (c / total) * np.log(c * total / (ca * cb)[nz])
    # fsum is order independent, so I(a, b) == I(b, a) bit for bit
    return math.fsum(terms.tolist())


def mutual_information(a: DiscretizedFeature, b: DiscretizedFeature) -> float:
    return mutual_information_from_counts(joint_counts(a, b))


def entropy(a: DiscretizedFeature) -> float:
    counts = np.bincount(a.bin_indices, minlength=a.bin_count).astype(float)
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def pairwise_mi(features: list[DiscretizedFeature]) -> np.ndarray:
    """Symmetric matrix of I(f_i, f_j); the diagonal holds entropies."""
    n = len(features)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = mutual_information(features[i], features[j])
    return out
