"""Planted-ground-truth datasets for tests and end-to-end runs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import DEFAULT_CATALOG, Dataset, Horizon
from .errors import ArgumentError

# First 20 seeds for which the fixture design keeps every noise feature below
# |corr| 0.35 with the labels and every redundant feature above corr 0.9 with
# its parent (seed 18 fails the latter). The first one is the committed fixture.
FIXTURE_SEEDS: tuple[int, ...] = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 19, 20)
FIXTURE_SHIFT = 1.5


@dataclass(frozen=True)
class PlantSpec:
    n_samples: int = 75
    n_informative: int = 10
    n_redundant: int = 15
    n_noise: int = 18
    class_ratio: float = 1 / 3
    noise_scale: float = 0.3
    seed: int = 0
    shift: float = 1.0

    def __post_init__(self):
        if self.n_informative < 1:
            raise ArgumentError("need at least one informative feature")
        if min(self.n_redundant, self.n_noise) < 0 or self.n_samples < 2:
            raise ArgumentError("counts must be nonnegative")
        if not 0.0 < self.class_ratio < 1.0:
            raise ArgumentError("class_ratio must lie in (0, 1)")

    @property
    def n_features(self) -> int:
        return self.n_informative + self.n_redundant + self.n_noise


@dataclass(frozen=True)
class GroundTruth:
    informative: tuple[str, ...]
    redundant: tuple[str, ...]
    noise: tuple[str, ...]
    parents: dict[str, str]

    def role(self, name: str) -> str:
        for role in ("informative", "redundant", "noise"):
            if name in getattr(self, role):
                return role
        raise KeyError(name)


def fixture_spec(seed: int | None = None) -> PlantSpec:
    """The 43-feature, 75-sample, 25-positive design used by the acceptance runs."""
    return PlantSpec(seed=FIXTURE_SEEDS[0] if seed is None else seed, shift=FIXTURE_SHIFT)


def generate(spec: PlantSpec, horizon: Horizon = Horizon.T1) -> tuple[Dataset, GroundTruth]:
    """Draw a dataset whose feature roles are known.

    Informative columns are unit Gaussians shifted by ``shift`` for the
    positive class; each redundant column is a positive affine map of one
    informative parent jittered by ``noise_scale`` Gaussian noise (in
    parent units); noise columns ignore the labels. Roles are scattered
    over the columns at random, and the columns take catalog codes when the
    count matches the catalog.
    """
    rng = np.random.default_rng(spec.seed)
    k = spec.n_samples
    n_pos = int(np.floor(k * spec.class_ratio + 0.5))
    labels = np.full(k, -1)
    labels[rng.permutation(k)[:n_pos]] = 1

    informative = rng.normal(size=(k, spec.n_informative)) + spec.shift * (labels[:, None] > 0)
    parents_idx = np.arange(spec.n_redundant) % spec.n_informative
    scale = rng.uniform(0.5, 2.0, size=spec.n_redundant)
    offset = rng.uniform(-1.0, 1.0, size=spec.n_redundant)
    jitter = spec.noise_scale * rng.normal(size=(k, spec.n_redundant))
    redundant = (informative[:, parents_idx] + jitter) * scale + offset
    noise = (rng.normal(size=(k, spec.n_noise)) * rng.uniform(0.5, 2.0, size=spec.n_noise)
             + rng.uniform(-1.0, 1.0, size=spec.n_noise))

    n = spec.n_features
    if n == len(DEFAULT_CATALOG):
        names = DEFAULT_CATALOG.codes
    else:
        names = [f"x{j + 1}" for j in range(n)]
    slots = rng.permutation(n)
    blocks = [informative, redundant, noise]
    values = np.empty((k, n))
    roles: list[list[str]] = [[], [], []]
    col = 0
    for b, block in enumerate(blocks):
        for j in range(block.shape[1]):
            values[:, slots[col]] = block[:, j]
            roles[b].append(names[slots[col]])
            col += 1
    parents = {roles[1][r]: roles[0][parents_idx[r]] for r in range(spec.n_redundant)}
    ids = [f"S{i + 1:03d}" for i in range(k)]
    d = Dataset(names, values, labels, ids, horizon)
    return d, GroundTruth(tuple(roles[0]), tuple(roles[1]), tuple(roles[2]), parents)


def min_parent_correlation(d: Dataset, truth: GroundTruth) -> float:
    if not truth.parents:
        return 1.0
    return min(np.corrcoef(d.column(r), d.column(p))[0, 1] for r, p in truth.parents.items())


def max_noise_label_correlation(d: Dataset, truth: GroundTruth) -> float:
    if not truth.noise:
        return 0.0
    y = d.labels.astype(float)
    return max(abs(np.corrcoef(d.column(name), y)[0, 1]) for name in truth.noise)
