"""Command-line front end: ``fdp {validate,indicators,run} --config FILE``.

Exit status is 0 on success, 1 when the configuration or inputs fail
validation, and 2 when a pipeline stage fails at run time.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import Finding, RunConfig, check_ranges, load_config
from .data_model import DEFAULT_CATALOG, load_dataset, write_dataset
from .errors import ConfigError, FDPError
from .indicators import JONES_COLUMNS
from .pipeline import StageError, augment, run_pipeline
from .preprocess import screen_missing
from .reports import write_reports

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("fdp")


def _header(path: Path, delimiter: str) -> list[str]:
    with path.open(newline="", encoding="utf-8") as fh:
        row = next(csv.reader(fh, delimiter=delimiter), None)
    return [] if row is None else [h.strip() for h in row]


def _check_columns(path: Path, delimiter: str, required, what: str) -> list[Finding]:
    try:
        header = _header(path, delimiter)
    except (OSError, UnicodeDecodeError) as exc:
        return [Finding("error", f"cannot read {what} {path}: {exc}")]
    return [Finding("error", f"{what} {path} lacks column {col!r}")
            for col in required if col not in header]


def cmd_validate(cfg: RunConfig) -> list[Finding]:
    """Check ranges, paths and headers; load and screen each table without running anything else."""
    findings = check_ranges(cfg)
    lexicon_needed = cfg.sentiment_mode == "lexicon" and any(h in cfg.posts for h in cfg.horizons)
    if lexicon_needed:
        if cfg.lexicon is None:
            findings.append(Finding("error", "sentiment_mode = lexicon but no lexicon path is set"))
        elif not cfg.lexicon.is_file():
            findings.append(Finding("error", f"lexicon file {cfg.lexicon} not found"))
    elif cfg.lexicon is not None and not cfg.lexicon.is_file():
        findings.append(Finding("warning", f"lexicon file {cfg.lexicon} not found (unused)"))
    for h in cfg.horizons:
        acct = cfg.accounting.get(h)
        if acct is not None:
            if not acct.is_file():
                findings.append(Finding("error", f"accounting file {acct} not found"))
            else:
                required = [cfg.id_column, *JONES_COLUMNS]
                if cfg.jones_group_column:
                    required.append(cfg.jones_group_column)
                findings += _check_columns(acct, cfg.delimiter, required, "accounting file")
        posts = cfg.posts.get(h)
        if posts is not None:
            if not posts.is_file():
                findings.append(Finding("error", f"posts file {posts} not found"))
            else:
                required = [cfg.posts_id_column, cfg.posts_text_column, "looks", "comments"]
                findings += _check_columns(posts, cfg.delimiter, required, "posts file")
    if any(f.level == "error" for f in findings):
        return findings
    for h in cfg.horizons:
        path = cfg.inputs[h]
        if not path.is_file():
            findings.append(Finding("error", f"input table {path} for {h.value} not found"))
            continue
        try:
            d = load_dataset(path, cfg.schema(h))
        except FDPError as exc:
            findings.append(Finding("error", f"{h.value}: {path}: {exc}"))
            continue
        uncataloged = [n for n in d.feature_names if n not in DEFAULT_CATALOG]
        if uncataloged:
            findings.append(Finding("warning", f"{h.value}: uncataloged features "
                                    f"{', '.join(uncataloged)}"))
        pos, neg = d.class_counts()
        if min(pos, neg) < 2:
            findings.append(Finding("error", f"{h.value}: need at least 2 samples per class, "
                                    f"found {pos} positive and {neg} negative"))
            continue
        # indicator columns not yet joined will be added at run time
        extra = sum(1 for code, src in (("Audittyp", cfg.accounting), ("DAP", cfg.accounting),
                                        ("emotion", cfg.posts))
                    if h in src and code not in d.feature_names)
        try:
            screened, dropped = screen_missing(d, cfg.missing_threshold, cfg.imputation)
        except FDPError as exc:
            findings.append(Finding("error", f"{h.value}: screening failed: {exc}"))
            continue
        surviving = screened.n_features + extra
        if cfg.k > surviving:
            findings.append(Finding("warning", f"{h.value}: k={cfg.k} exceeds the {surviving} "
                                    f"features left after screening; k will be clamped"))
    return findings


def cmd_indicators(cfg: RunConfig) -> list[Path]:
    """Write ``augmented_<H>.csv`` per horizon into the output directory."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for h in cfg.horizons:
        try:
            d = load_dataset(cfg.inputs[h], cfg.schema(h))
            d = augment(d, cfg, h)
        except FDPError as exc:
            raise StageError("indicators", exc) from exc
        path = cfg.output_dir / f"augmented_{h.value}.csv"
        write_dataset(d, path, cfg.schema(h))
        paths.append(path)
    return paths


def cmd_run(cfg: RunConfig) -> list[Path]:
    result = run_pipeline(cfg)
    return write_reports(result, cfg.output_dir)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", required=True, type=Path,
                        help="key = value configuration file")
    common.add_argument("--output-dir", "-o", type=Path, default=None,
                        help="override output_dir from the configuration")
    common.add_argument("--seed", type=int, default=None, help="override the base seed")
    common.add_argument("--verbose", "-v", action="count", default=0,
                        help="log progress (-vv for debug output)")
    parser = argparse.ArgumentParser(
        prog="fdp", description="Financial distress prediction with MRMR-SVM-RFE feature selection.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check configuration and inputs")
    sub.add_parser("indicators", parents=[common],
                   help="join Audittyp, DAP and emotion onto the indicator tables")
    sub.add_parser("run", parents=[common], help="screen, select, evaluate and write reports")
    return parser


def _print_findings(findings: list[Finding], stream) -> None:
    for f in findings:
        print(f"{f.level}: {f.message}", file=stream)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else (logging.INFO if args.verbose == 1
                                                       else logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output_dir is not None:
        cfg = replace(cfg, output_dir=args.output_dir)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)

    findings = cmd_validate(cfg)
    errors = [f for f in findings if f.level == "error"]
    if args.command == "validate":
        _print_findings(findings, sys.stdout)
        print("validation failed" if errors else "validation ok")
        return EXIT_INVALID if errors else EXIT_OK
    if errors:
        _print_findings(findings, sys.stderr)
        print("error: stage=validate: configuration rejected", file=sys.stderr)
        return EXIT_INVALID
    for f in findings:
        log.warning(f.message)
    try:
        paths = cmd_indicators(cfg) if args.command == "indicators" else cmd_run(cfg)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (FDPError, OSError) as exc:
        print(f"error: stage={args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
