"""Confusion matrices, precision/recall/F1/accuracy, and the repeated-holdout harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .data_model import Dataset
from .errors import ArgumentError, ShapeError
from .models import ClassifierSpec, predict, train
from .preprocess import DEFAULT_TRAIN_FRACTION, apply_minmax, fit_minmax, split

METRIC_NAMES = ("precision", "recall", "f1", "accuracy")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ArgumentError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def transposed(self) -> "ConfusionMatrix":
        """The same predictions scored with -1 as the positive class."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)


@dataclass(frozen=True)
class Metrics:
    """None marks a metric whose denominator is zero."""

    precision: float | None
    recall: float | None
    f1: float | None
    accuracy: float | None

    def as_dict(self) -> dict[str, float | None]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def confusion(pred: Sequence[int], actual: Sequence[int]) -> ConfusionMatrix:
    p = np.asarray(pred)
    a = np.asarray(actual)
    if p.shape != a.shape:
        raise ShapeError(f"{p.size} predictions for {a.size} labels")
    if not (np.all(np.isin(p, (-1, 1))) and np.all(np.isin(a, (-1, 1)))):
        raise ArgumentError("labels must be +1 or -1")
    return ConfusionMatrix(
        tp=int(np.sum((p == 1) & (a == 1))),
        fp=int(np.sum((p == 1) & (a == -1))),
        fn=int(np.sum((p == -1) & (a == 1))),
        tn=int(np.sum((p == -1) & (a == -1))),
    )


def _ratio(num, den):
    return num / den if den else None


def metrics(c: ConfusionMatrix) -> Metrics:
    if c.total == 0:
        raise ArgumentError("metrics of an empty confusion matrix")
    precision = _ratio(c.tp, c.tp + c.fp)
    recall = _ratio(c.tp, c.tp + c.fn)
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    accuracy = (c.tp + c.tn) / c.total
    return Metrics(precision, recall, f1, accuracy)


@dataclass(frozen=True)
class Protocol:
    repetitions: int = 10
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    base_seed: int = 0

    def __post_init__(self):
        if self.repetitions < 1:
            raise ArgumentError("repetitions must be at least 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ArgumentError("train_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class RunResult:
    repetition: int
    split_seed: int
    confusion: ConfusionMatrix
    metrics: Metrics


@dataclass(frozen=True)
class Cell:
    """Per-metric means over repetitions; ``undefined`` counts excluded runs."""

    means: dict[str, float | None]
    undefined: dict[str, int]
    repetitions: int
    runs: tuple[RunResult, ...] = field(default=(), repr=False)

    @property
    def accuracy(self) -> float | None:
        return self.means["accuracy"]


def aggregate(runs: Sequence[RunResult]) -> Cell:
    means, undefined = {}, {}
    for name in METRIC_NAMES:
        vals = [getattr(r.metrics, name) for r in runs]
        defined = [v for v in vals if v is not None]
        undefined[name] = len(vals) - len(defined)
        means[name] = math.fsum(defined) / len(defined) if defined else None
    return Cell(means, undefined, len(runs), tuple(runs))


def run_experiment(d: Dataset, features: Iterable[str] | None, spec: ClassifierSpec,
                   protocol: Protocol = Protocol()) -> Cell:
    """Repeated stratified holdout on ``features``.

    Repetition r (1-based) splits with seed base_seed + r, fits min-max
    scaling on the training part only, and trains with model seed
    spec seed + r.
    """
    sub = d if features is None else d.select_features(list(features))
    runs = []
    for r in range(1, protocol.repetitions + 1):
        seed = protocol.base_seed + r
        tr, te = split(sub, protocol.train_fraction, seed)
        params = fit_minmax(tr)
        tr, te = apply_minmax(tr, params), apply_minmax(te, params)
        model = train(spec.with_seed(spec.get("seed") + r), tr.values, tr.labels)
        cm = confusion(predict(model, te.values), te.labels)
        runs.append(RunResult(r, seed, cm, metrics(cm)))
    return aggregate(runs)


@dataclass
class EvaluationReport:
    """Cells keyed by (horizon, beta, model kind); beta is None for unselected feature sets."""

    cells: dict[tuple[str, float | None, str], Cell] = field(default_factory=dict)

    def add(self, horizon: str, beta: float | None, kind: str, cell: Cell) -> None:
        self.cells[(str(horizon), beta, str(kind))] = cell

    def long_rows(self) -> list[tuple]:
        rows = []
        for (h, beta, kind), cell in sorted(self.cells.items(), key=_cell_key):
            for name in METRIC_NAMES:
                rows.append((h, beta, kind, name, cell.means[name],
                             cell.repetitions - cell.undefined[name], cell.repetitions))
        return rows


def _cell_key(item):
    (h, beta, kind), _ = item
    return (h, -1.0 if beta is None else beta, kind)


SYSTEMS = ("traditional_financial", "raw_multi_source", "selected_multi_source")


@dataclass(frozen=True)
class Comparison:
    cells: dict[str, Cell]
    deltas: dict[tuple[str, str], dict[str, float | None]]


def compare_indicator_systems(d_full: Dataset, d_financial_only: Dataset, selected: Iterable[str],
                              spec: ClassifierSpec, protocol: Protocol = Protocol()) -> Comparison:
    """Evaluate the financial-only, full and selected systems on the same split seeds."""
    cells = {
        SYSTEMS[0]: run_experiment(d_financial_only, None, spec, protocol),
        SYSTEMS[1]: run_experiment(d_full, None, spec, protocol),
        SYSTEMS[2]: run_experiment(d_full, list(selected), spec, protocol),
    }
    deltas = {}
    for i, a in enumerate(SYSTEMS):
        for b in SYSTEMS[i + 1:]:
            deltas[(b, a)] = {
                name: (None if cells[a].means[name] is None or cells[b].means[name] is None
                       else cells[b].means[name] - cells[a].means[name])
                for name in METRIC_NAMES
            }
    return Comparison(cells, deltas)
