import math
import shutil

import numpy as np
import pytest

from fdp.cli import EXIT_INVALID, EXIT_OK, EXIT_RUNTIME, cmd_validate, main
from fdp.config import load_config
from fdp.data_model import Horizon, load_dataset
from fdp.errors import ConfigError
from fdp.indicators import JONES_COLUMNS
from fdp.models import Kind
from fdp.reports import REPORT_FILES
from fdp.selection import DEFAULT_BETAS


def write_cfg(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def workspace(tmp_path, data_dir):
    shutil.copy(data_dir / "fixture_T-1.csv", tmp_path / "fixture_T-1.csv")
    return tmp_path


def quick_cfg(ws, *extra):
    return write_cfg(ws / "run.cfg", [
        "horizons = T-1",
        "input.T-1 = fixture_T-1.csv",
        "models = LR, DT",
        "model.LR.epochs = 100",
        "repetitions = 2",
        "betas = 0, 0.5, 1",
        "output_dir = out",
        *extra,
    ])


class TestConfig:
    def test_defaults(self, workspace):
        cfg = load_config(write_cfg(workspace / "c.cfg", ["input.T-1 = fixture_T-1.csv"]))
        assert cfg.horizons == [Horizon.T1]
        assert cfg.inputs[Horizon.T1] == workspace / "fixture_T-1.csv"
        assert cfg.missing_threshold == 0.30 and cfg.train_fraction == 0.70
        assert cfg.betas == DEFAULT_BETAS and cfg.k == 20 and cfg.repetitions == 10
        assert [s.kind for s in cfg.models] == [Kind.LR, Kind.DT, Kind.BP, Kind.SVM]
        assert cfg.selector == "BP" and cfg.comparison_model == "BP"

    def test_overrides(self, workspace):
        cfg = load_config(write_cfg(workspace / "c.cfg", [
            "# comment",
            "horizons = T-3, T-1",
            "input.T-3 = a.csv",
            "input.T-1 = /abs/b.csv",
            "schema.delimiter = tab",
            'schema.missing_tokens = NA, "-"',
            "models = DT, SVM",
            "model.SVM.C = 10",
            "betas = 0.2, 1",
        ]))
        assert cfg.horizons == [Horizon.T3, Horizon.T1]
        assert str(cfg.inputs[Horizon.T1]) == "/abs/b.csv"
        assert cfg.delimiter == "\t"
        assert cfg.missing_tokens == ("", "NA", "-")
        assert cfg.spec("SVM").get("C") == 10
        assert cfg.selector == "DT"
        assert cfg.betas == (0.2, 1.0)

    @pytest.mark.parametrize("line", ["nonsense = 1", "model.LR.depth = 3", "k = many",
                                      "input.T-9 = x.csv", "no equals sign"])
    def test_rejects(self, workspace, line):
        with pytest.raises(ConfigError):
            load_config(write_cfg(workspace / "c.cfg", [line]))

    def test_effective_items_cover_defaults(self, workspace):
        cfg = load_config(write_cfg(workspace / "c.cfg", ["input.T-1 = fixture_T-1.csv"]))
        keys = [k for k, _ in cfg.effective_items()]
        for key in ("missing_threshold", "betas", "k", "epsilon", "bins", "C", "seed",
                    "model.BP.hidden", "model.LR.learning_rate", "model.DT.max_depth"):
            assert key in keys


class TestValidate:
    def test_fixture_config_is_clean(self, data_dir, capsys):
        assert main(["validate", "--config", str(data_dir / "fixture.cfg")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "error" not in out and "warning" not in out

    def test_missing_lexicon(self, workspace, capsys):
        (workspace / "posts.csv").write_text("id,sentiment,looks,comments\nS001,good,1,1\n")
        cfg = quick_cfg(workspace, "posts.T-1 = posts.csv", "sentiment_mode = lexicon",
                        "lexicon = nowhere.txt")
        assert main(["validate", "-c", str(cfg)]) == EXIT_INVALID
        assert "lexicon" in capsys.readouterr().out

    def test_k_above_surviving_is_warning(self, workspace, capsys):
        cfg = quick_cfg(workspace, "k = 60")
        assert main(["validate", "-c", str(cfg)]) == EXIT_OK
        assert "k=60 exceeds the 43" in capsys.readouterr().out

    def test_beta_out_of_range_stops_run(self, workspace, capsys):
        cfg = quick_cfg(workspace, "betas = 0, 1.5")
        assert main(["run", "-c", str(cfg)]) == EXIT_INVALID
        assert "beta 1.5" in capsys.readouterr().err
        assert not (workspace / "out").exists()

    def test_missing_input(self, workspace):
        cfg = write_cfg(workspace / "c.cfg", ["input.T-1 = absent.csv"])
        findings = cmd_validate(load_config(cfg))
        assert any(f.level == "error" and "absent.csv" in f.message for f in findings)

    def test_bad_config_file(self, tmp_path, capsys):
        assert main(["validate", "-c", str(tmp_path / "none.cfg")]) == EXIT_INVALID


def accounting_rows(ids, rng):
    lines = ["id," + ",".join(JONES_COLUMNS) + ",audit_opinion"]
    for i, sid in enumerate(ids):
        vals = [rng.uniform(50, 500), *rng.normal(0, 20, size=5)]
        opinion = "standard unqualified" if i % 4 else "qualified opinion"
        lines.append(sid + "," + ",".join(repr(float(v)) for v in vals) + "," + opinion)
    return lines


class TestIndicators:
    def _inputs(self, ws, drop_company=False, blank_jones_for=None):
        ids = [f"C{i:02d}" for i in range(16)]
        rows = ["id,label,F1,F2"]
        rng = np.random.default_rng(0)
        for i, sid in enumerate(ids):
            rows.append(f"{sid},{'ST' if i % 3 == 0 else 'non-ST'},{rng.random()!r},{rng.random()!r}")
        (ws / "table.csv").write_text("\n".join(rows) + "\n")
        acct = accounting_rows(ids[:-1] if drop_company else ids, rng)
        if blank_jones_for is not None:
            acct = [line if not line.startswith(blank_jones_for + ",") else
                    blank_jones_for + ",100,,1,1,1,1,standard unqualified" for line in acct]
        (ws / "acct.csv").write_text("\n".join(acct) + "\n")
        (ws / "posts.csv").write_text(
            "id,sentiment,looks,comments\nC00,0.5,16,4\nC00,-1,81,9\nC01,1,0,1\n")
        return write_cfg(ws / "ind.cfg", [
            "input.T-1 = table.csv",
            "accounting.T-1 = acct.csv",
            "posts.T-1 = posts.csv",
            "k = 3",
            "output_dir = out",
        ])

    def test_adds_three_columns(self, workspace):
        cfg = self._inputs(workspace, blank_jones_for="C05")
        assert main(["indicators", "-c", str(cfg)]) == EXIT_OK
        d = load_dataset(workspace / "out" / "augmented_T-1.csv")
        assert d.feature_names == ("F1", "F2", "Audittyp", "DAP", "emotion")
        assert d.column("emotion")[0] == 0.5 * 4 - 1 * 6
        assert d.column("emotion")[1] == 1.0
        assert d.column("emotion")[2] == 0.0  # no posts
        assert d.column("Audittyp")[0] == 1 and d.column("Audittyp")[1] == 0
        dap = d.column("DAP")
        assert math.isnan(dap[5])
        assert np.isfinite(np.delete(dap, 5)).all()

    def test_missing_join_key(self, workspace, capsys):
        cfg = self._inputs(workspace, drop_company=True)
        assert main(["indicators", "-c", str(cfg)]) == EXIT_RUNTIME
        err = capsys.readouterr().err
        assert "stage=indicators" in err and "C15" in err

    def test_run_reports_join_failure_stage(self, workspace, capsys):
        cfg = self._inputs(workspace, drop_company=True)
        assert main(["run", "-c", str(cfg)]) == EXIT_RUNTIME
        assert "stage=load" in capsys.readouterr().err


class TestRun:
    def test_smoke_all_reports(self, workspace):
        cfg = quick_cfg(workspace)
        assert main(["run", "-c", str(cfg)]) == EXIT_OK
        out = workspace / "out"
        for name in REPORT_FILES:
            text = (out / name).read_text()
            assert text.startswith("# effective configuration\n")
            assert "# model.LR.epochs = 100" in text
        table = (out / "metrics_tables.txt").read_text()
        assert "Precision" in table and "Accuracy" in table
        fs = (out / "feature_selection.txt").read_text()
        assert "Solvency" in fs and "Internet public opinion" in fs

    def test_overrides_and_rerun(self, workspace):
        cfg = quick_cfg(workspace)
        assert main(["run", "-c", str(cfg), "-o", str(workspace / "a"), "--seed", "5"]) == EXIT_OK
        first = {n: (workspace / "a" / n).read_bytes() for n in REPORT_FILES}
        assert b"# seed = 5" in first["metrics_long.csv"]
        assert main(["run", "-c", str(cfg), "-o", str(workspace / "a"), "--seed", "5"]) == EXIT_OK
        for n in REPORT_FILES:
            assert (workspace / "a" / n).read_bytes() == first[n]
