"""Text tables and long-format CSV files for a finished pipeline run.

Every file opens with the effective configuration as ``#`` lines. Numbers in
the CSV files use ``repr`` so they round-trip; the text tables round to four
decimals. Undefined metrics print as ``n/a`` (text) or an empty cell (CSV).
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .config import RunConfig
from .data_model import DEFAULT_CATALOG, Category
from .evaluation import METRIC_NAMES, SYSTEMS
from .pipeline import PipelineResult

CATEGORY_LABELS = [
    (Category.SOLVENCY, "Solvency"),
    (Category.DEVELOPMENT, "Business development capability"),
    (Category.STRUCTURAL_RATIO, "Structural ratio"),
    (Category.PROFITABILITY, "Profitability"),
    (Category.OPERATING, "Operating capability"),
    (Category.EXPANSION, "Expansion capability"),
    (Category.GOVERNANCE, "Corporate governance"),
    (Category.AUDIT, "Audit opinion"),
    (Category.EARNINGS_MGMT, "Earnings management"),
    (Category.MACROECONOMIC, "Macroeconomic"),
    (Category.PUBLIC_MARKET, "Public market information"),
    (Category.OPINION, "Internet public opinion"),
]
METRIC_LABELS = {"precision": "Precision", "recall": "Recall", "f1": "F1-score",
                 "accuracy": "Accuracy"}

REPORT_FILES = (
    "metrics_tables.txt",
    "metrics_long.csv",
    "feature_selection.txt",
    "rankings_long.csv",
    "comparison.txt",
    "comparison_long.csv",
    "summary.txt",
)


def config_header(cfg: RunConfig) -> list[str]:
    lines = ["# effective configuration"]
    lines += [f"# {key} = {value}".rstrip() for key, value in cfg.effective_items()]
    return lines


def _fmt(v) -> str:
    return "n/a" if v is None else f"{v:.4f}"


def _num(v) -> str:
    return "" if v is None else repr(float(v))


def _beta(b) -> str:
    return "" if b is None else repr(float(b))


def _csv_text(cfg: RunConfig, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write("\n".join(config_header(cfg)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _text(cfg: RunConfig, body: list[str]) -> str:
    return "\n".join(config_header(cfg) + [""] + body) + "\n"


def _grid(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]


def metrics_tables(res: PipelineResult) -> str:
    """One block per horizon: rows are beta by metric, columns are models."""
    kinds = [s.kind.value for s in res.config.models]
    body = []
    for hr in res.horizons:
        body.append(f"Horizon {hr.horizon.value}: prediction metrics by beta "
                    f"(top {hr.sweep.k} features, mean over {res.config.repetitions} repetitions)")
        rows = [["beta", "metric", *kinds]]
        for beta in sorted(hr.sweep.outcomes):
            cells = hr.sweep.outcomes[beta].cells
            for i, name in enumerate(METRIC_NAMES):
                rows.append([f"{beta:g}" if i == 0 else "", METRIC_LABELS[name],
                             *[_fmt(cells[k].means[name]) for k in kinds]])
        body += _grid(rows)
        body.append(f"best beta by {hr.sweep.selector} accuracy: {hr.sweep.best_beta:g}")
        body.append("")
    return _text(res.config, body)


def metrics_long(res: PipelineResult) -> str:
    rows = [[h, _beta(beta), kind, name, _num(value), n_def, reps]
            for h, beta, kind, name, value, n_def, reps in res.report.long_rows()]
    return _csv_text(res.config, ["horizon", "beta", "model", "metric", "mean", "n_defined",
                                  "repetitions"], rows)


def feature_selection(res: PipelineResult) -> str:
    """Selected features at each horizon's best beta, grouped by catalog category."""
    horizons = res.horizons
    header = ["category", *[f"{hr.horizon.value} (beta={hr.sweep.best_beta:g})" for hr in horizons]]
    chosen = [hr.sweep.outcomes[hr.sweep.best_beta].selected for hr in horizons]
    rows = [header]
    for cat, label in CATEGORY_LABELS:
        cells = []
        for sel in chosen:
            names = [n for n in sel if DEFAULT_CATALOG.category_of(n) is cat]
            cells.append(", ".join(names) if names else "-")
        rows.append([label, *cells])
    extra = [[n for n in sel if n not in DEFAULT_CATALOG] for sel in chosen]
    if any(extra):
        rows.append(["Uncataloged", *[", ".join(e) if e else "-" for e in extra]])
    body = ["Selected features by category (\"-\" means none selected)"]
    body += _grid(rows)
    return _text(res.config, body)


def rankings_long(res: PipelineResult) -> str:
    rows = []
    for hr in res.horizons:
        for beta in sorted(hr.sweep.outcomes):
            outcome = hr.sweep.outcomes[beta]
            removal = {t.feature: t for t in outcome.ranking.elimination_trace}
            for rank, name in enumerate(outcome.ranking.order, 1):
                t = removal.get(name)
                rows.append([hr.horizon.value, _beta(beta), rank, name,
                             int(name in outcome.selected),
                             "" if t is None else t.iteration,
                             "" if t is None else _num(t.score)])
    return _csv_text(res.config, ["horizon", "beta", "rank", "feature", "selected",
                                  "removed_at", "removal_score"], rows)


def comparison_text(res: PipelineResult) -> str:
    body = [f"Indicator system comparison with {res.config.comparison_model} "
            "at each horizon's best beta"]
    for hr in res.horizons:
        body.append("")
        body.append(f"Horizon {hr.horizon.value} (beta={hr.sweep.best_beta:g})")
        if hr.comparison is None:
            body.append(hr.comparison_note)
            continue
        rows = [["system", *[METRIC_LABELS[m] for m in METRIC_NAMES]]]
        for system in SYSTEMS:
            rows.append([system, *[_fmt(hr.comparison.cells[system].means[m])
                                   for m in METRIC_NAMES]])
        for (b, a), delta in hr.comparison.deltas.items():
            rows.append([f"{b} - {a}", *[_fmt(delta[m]) for m in METRIC_NAMES]])
        body += _grid(rows)
    return _text(res.config, body)


def comparison_long(res: PipelineResult) -> str:
    rows = []
    for hr in res.horizons:
        if hr.comparison is None:
            continue
        for system in SYSTEMS:
            cell = hr.comparison.cells[system]
            for m in METRIC_NAMES:
                rows.append([hr.horizon.value, _beta(hr.sweep.best_beta), system, m,
                             _num(cell.means[m]), cell.repetitions - cell.undefined[m]])
    return _csv_text(res.config, ["horizon", "beta", "system", "metric", "mean", "n_defined"],
                     rows)


def summary(res: PipelineResult) -> str:
    body = []
    for hr in res.horizons:
        body.append(f"Horizon {hr.horizon.value}")
        body.append(f"  input features: {hr.n_input_features}")
        body.append(f"  dropped by screening: {', '.join(hr.dropped) if hr.dropped else 'none'}")
        body.append(f"  features after screening: {hr.screened.n_features}")
        if hr.sweep.k != hr.k_requested:
            body.append(f"  k clamped from {hr.k_requested} to {hr.sweep.k}")
        else:
            body.append(f"  k: {hr.sweep.k}")
        body.append(f"  best beta: {hr.sweep.best_beta:g} (by {hr.sweep.selector} accuracy)")
        body.append(f"  selected: {', '.join(hr.sweep.outcomes[hr.sweep.best_beta].selected)}")
    return _text(res.config, body)


_WRITERS = {
    "metrics_tables.txt": metrics_tables,
    "metrics_long.csv": metrics_long,
    "feature_selection.txt": feature_selection,
    "rankings_long.csv": rankings_long,
    "comparison.txt": comparison_text,
    "comparison_long.csv": comparison_long,
    "summary.txt": summary,
}


def write_reports(res: PipelineResult, out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in REPORT_FILES:
        path = out_dir / name
        path.write_text(_WRITERS[name](res), encoding="utf-8")
        paths.append(path)
    return paths
