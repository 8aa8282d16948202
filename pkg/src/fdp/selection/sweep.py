from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from ..data_model import Dataset
from ..errors import ArgumentError
from ..evaluation import Cell, Protocol, run_experiment
from ..models import ClassifierSpec
from ..preprocess import apply_minmax, fit_minmax
from .mrmr import EPSILON
from .mutual_info import DEFAULT_BINS
from .ranking import FeatureRanking, select_top_k
from .rfe import DEFAULT_BETAS, mrmr_svm_rfe
from .svm import DEFAULT_C

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BetaOutcome:
    beta: float
    ranking: FeatureRanking
    selected: tuple[str, ...]
    cells: dict[str, Cell]


@dataclass(frozen=True)
class SweepResult:
    best_beta: float
    outcomes: dict[float, BetaOutcome]
    selector: str
    k: int


def sweep_beta(d: Dataset, betas: Sequence[float] = DEFAULT_BETAS, k: int = 20,
               specs: ClassifierSpec | Sequence[ClassifierSpec] = (),
               protocol: Protocol = Protocol(), C: float = DEFAULT_C,
               bins: int = DEFAULT_BINS, eps: float = EPSILON) -> SweepResult:
    """Rank, keep the top k and evaluate once per beta; pick beta by mean accuracy.

    ``d`` must be screened (fully observed) but not yet scaled: the ranking
    runs on a min-max scaled copy of the whole dataset, while each holdout
    repetition rescales from its own training part. With several specs the
    first one decides the best beta. Accuracy ties go to the smaller beta.
    """
    if isinstance(specs, ClassifierSpec):
        specs = [specs]
    specs = list(specs)
    if not specs:
        raise ArgumentError("sweep_beta needs at least one classifier spec")
    betas = list(betas)
    if not betas:
        raise ArgumentError("empty beta list")
    bad = [b for b in betas if not 0.0 <= b <= 1.0]
    if bad:
        raise ArgumentError(f"beta values outside [0, 1]: {bad}")
    if k > d.n_features:
        log.warning("k=%d exceeds the %d available features; clamped", k, d.n_features)
        k = d.n_features
    scaled = apply_minmax(d, fit_minmax(d))
    outcomes: dict[float, BetaOutcome] = {}
    for beta in sorted(set(betas)):
        ranking = mrmr_svm_rfe(scaled, beta, C=C, bins=bins, eps=eps)
        chosen = select_top_k(ranking, k)
        cells = {spec.kind.value: run_experiment(d, chosen, spec, protocol) for spec in specs}
        outcomes[beta] = BetaOutcome(beta, ranking, tuple(chosen), cells)
        log.info("beta=%.2f accuracy=%s", beta, cells[specs[0].kind.value].accuracy)
    selector = specs[0].kind.value
    best = None
    for beta in sorted(outcomes):
        acc = outcomes[beta].cells[selector].accuracy
        acc = -1.0 if acc is None else acc
        if best is None or acc > best[1]:
            best = (beta, acc)
    return SweepResult(best[0], outcomes, selector, k)
