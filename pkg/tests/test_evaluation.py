import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdp.errors import ArgumentError, ShapeError
from fdp.evaluation import (
    SYSTEMS,
    ConfusionMatrix,
    EvaluationReport,
    Protocol,
    aggregate,
    compare_indicator_systems,
    confusion,
    metrics,
    run_experiment,
)
from fdp.models import ClassifierSpec, Kind, predict, train
from fdp.preprocess import apply_minmax, fit_minmax, split
from fdp.synthetic import PlantSpec, generate

labels = st.lists(st.sampled_from([1, -1]), min_size=1, max_size=50)


def hand_metrics(tp, fp, fn, tn):
    p = tp / (tp + fp) if tp + fp else None
    r = tp / (tp + fn) if tp + fn else None
    f = 2 * tp / (2 * tp + fp + fn) if p is not None and r is not None and tp > 0 else None
    return p, r, f, (tp + tn) / (tp + fp + fn + tn)


class TestConfusion:
    def test_examples(self):
        actual = [1] * 4 + [-1] * 6
        assert confusion(actual, actual) == ConfusionMatrix(4, 0, 0, 6)
        assert confusion([1] * 10, actual) == ConfusionMatrix(4, 6, 0, 0)
        pred = [1, 1, 1, -1, -1, -1, -1, -1, -1, -1]
        act = [1, 1, -1, 1, -1, -1, -1, -1, -1, -1]
        assert confusion(pred, act) == ConfusionMatrix(2, 1, 1, 6)

    def test_errors(self):
        with pytest.raises(ShapeError):
            confusion([1, -1], [1])
        with pytest.raises(ArgumentError):
            confusion([0, 1], [1, 1])

    @given(st.data())
    def test_total_and_permutation(self, data):
        a = data.draw(labels)
        p = data.draw(st.lists(st.sampled_from([1, -1]), min_size=len(a), max_size=len(a)))
        c = confusion(p, a)
        assert c.total == len(a)
        perm = data.draw(st.permutations(range(len(a))))
        assert metrics(confusion([p[i] for i in perm], [a[i] for i in perm])) == metrics(c)
        assert (metrics(c).accuracy == 1.0) == (p == a)


class TestMetrics:
    def test_examples(self):
        m = metrics(ConfusionMatrix(3, 1, 1, 5))
        assert (m.precision, m.recall, m.f1, m.accuracy) == (0.75, 0.75, 0.75, 0.8)
        assert metrics(ConfusionMatrix(4, 0, 0, 6)).as_dict() == dict.fromkeys(
            ("precision", "recall", "f1", "accuracy"), 1.0)
        m = metrics(ConfusionMatrix(0, 0, 2, 8))
        assert m.precision is None and m.recall == 0.0 and m.f1 is None and m.accuracy == 0.8

    def test_empty(self):
        with pytest.raises(ArgumentError):
            metrics(ConfusionMatrix(0, 0, 0, 0))

    def test_random_matrices_against_hand_formulas(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            c = ConfusionMatrix(*(int(v) for v in rng.integers(0, 20, size=4)))
            if c.total == 0:
                continue
            got = metrics(c)
            for g, w in zip((got.precision, got.recall, got.f1, got.accuracy), hand_metrics(c.tp, c.fp, c.fn, c.tn)):
                assert (g is None) == (w is None)
                if g is not None:
                    assert abs(g - w) < 1e-12

    @given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
    def test_f1_between_precision_and_recall(self, tp, fp, fn, tn):
        if tp + fp + fn + tn == 0:
            return
        m = metrics(ConfusionMatrix(tp, fp, fn, tn))
        for v in m.as_dict().values():
            assert v is None or 0.0 <= v <= 1.0
        if m.f1 is not None:
            assert min(m.precision, m.recall) - 1e-15 <= m.f1 <= max(m.precision, m.recall) + 1e-15

    def test_transposed_is_negative_class(self):
        c = ConfusionMatrix(3, 1, 2, 7)
        t = metrics(c.transposed())
        assert t.precision == 7 / (7 + 2)  # predicted -1 that are -1
        assert t.recall == 7 / (7 + 1)     # actual -1 predicted -1
        assert t.accuracy == metrics(c).accuracy


class TestExperiment:
    def setup_method(self):
        self.d, _ = generate(PlantSpec(n_samples=60, n_informative=3, n_redundant=2, n_noise=3,
                                       class_ratio=0.5, seed=2, shift=3.0))
        self.spec = ClassifierSpec(Kind.LR)

    def _rerun(self, protocol, features=None):
        """Recompute every repetition by hand from the documented seed rules."""
        sub = self.d if features is None else self.d.select_features(features)
        runs = []
        for r in range(1, protocol.repetitions + 1):
            tr, te = split(sub, protocol.train_fraction, protocol.base_seed + r)
            p = fit_minmax(tr)
            tr, te = apply_minmax(tr, p), apply_minmax(te, p)
            m = train(self.spec.with_seed(self.spec.get("seed") + r), tr.values, tr.labels)
            runs.append(metrics(confusion(predict(m, te.values), te.labels)))
        return runs

    def test_cell_means_equal_recomputation(self):
        protocol = Protocol(repetitions=10, base_seed=3)
        cell = run_experiment(self.d, None, self.spec, protocol)
        runs = self._rerun(protocol)
        for name in ("precision", "recall", "f1", "accuracy"):
            vals = [getattr(r, name) for r in runs if getattr(r, name) is not None]
            assert abs(cell.means[name] - sum(vals) / len(vals)) < 1e-12
            assert cell.undefined[name] == 10 - len(vals)

    def test_single_repetition(self):
        protocol = Protocol(repetitions=1)
        cell = run_experiment(self.d, None, self.spec, protocol)
        assert cell.means == self._rerun(protocol)[0].as_dict()

    def test_separable_lr_accuracy(self):
        cell = run_experiment(self.d, None, self.spec, Protocol(repetitions=10))
        assert cell.accuracy >= 0.95

    def test_deterministic(self):
        a = run_experiment(self.d, ["x1", "x2"], self.spec, Protocol(repetitions=3))
        b = run_experiment(self.d, ["x1", "x2"], self.spec, Protocol(repetitions=3))
        assert a.means == b.means

    def test_all_undefined_metric(self):
        from fdp.evaluation import Metrics, RunResult
        runs = [RunResult(r, r, ConfusionMatrix(0, 0, 2, 8), Metrics(None, 0.0, None, 0.8))
                for r in range(1, 4)]
        cell = aggregate(runs)
        assert cell.means["precision"] is None and cell.undefined["precision"] == 3
        assert cell.means["accuracy"] == pytest.approx(0.8)

    def test_identical_systems_have_zero_deltas(self):
        comp = compare_indicator_systems(self.d, self.d, self.d.feature_names, self.spec,
                                         Protocol(repetitions=2))
        assert set(comp.cells) == set(SYSTEMS)
        for delta in comp.deltas.values():
            assert all(v == 0.0 for v in delta.values())

    def test_report_rows(self):
        rep = EvaluationReport()
        cell = run_experiment(self.d, None, self.spec, Protocol(repetitions=1))
        rep.add("T-1", 0.2, "LR", cell)
        rep.add("T-1", 0.0, "LR", cell)
        rows = rep.long_rows()
        assert len(rows) == 8
        assert [r[1] for r in rows[:4]] == [0.0] * 4
