"""Orchestration behind the command line: augment, screen, sweep, evaluate, compare."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .data_model import DEFAULT_CATALOG, FINANCIAL_CATEGORIES, Dataset, Horizon, load_dataset
from .errors import FDPError, JoinError
from .evaluation import Comparison, EvaluationReport, compare_indicator_systems
from .indicators import (
    company_opinion_score,
    dap_by_company,
    encode_audit_opinion,
    load_accounting,
    load_lexicon,
    load_posts,
)
from .preprocess import screen_missing
from .selection.sweep import SweepResult, sweep_beta

log = logging.getLogger(__name__)

AUDIT_CODE, DAP_CODE, OPINION_CODE = "Audittyp", "DAP", "emotion"


class StageError(FDPError):
    """Wraps a module error with the pipeline stage it came from."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage={stage}: {type(cause).__name__}: {cause}")


def _with_column(d: Dataset, name: str, column: np.ndarray) -> Dataset:
    if name in d.feature_names:
        log.info("replacing existing column %s", name)
        values = d.values.copy()
        values[:, d.feature_names.index(name)] = column
        return d.replace(values=values)
    return d.replace(feature_names=[*d.feature_names, name],
                     values=np.column_stack([d.values, column]))


def augment(d: Dataset, cfg: RunConfig, horizon: Horizon) -> Dataset:
    """Join Audittyp and DAP (accounting file) and emotion (posts file) onto ``d``."""
    acct_path = cfg.accounting.get(horizon)
    if acct_path is not None:
        records = load_accounting(acct_path, cfg.id_column, cfg.audit_column,
                                  cfg.jones_group_column, cfg.delimiter)
        absent = [sid for sid in d.sample_ids if sid not in records]
        if absent:
            raise JoinError(absent)
        dap = dap_by_company(records, cfg.jones_min_rows, cfg.dap_absolute)
        audit = np.array([math.nan if records[s].audit_opinion is None
                          else float(encode_audit_opinion(records[s].audit_opinion))
                          for s in d.sample_ids])
        d = _with_column(d, AUDIT_CODE, audit)
        d = _with_column(d, DAP_CODE, np.array([dap.get(s, math.nan) for s in d.sample_ids]))
    posts_path = cfg.posts.get(horizon)
    if posts_path is not None:
        lexicon = None
        if cfg.sentiment_mode == "lexicon":
            lexicon = load_lexicon(cfg.lexicon)
        posts = load_posts(posts_path, lexicon, cfg.posts_id_column, cfg.posts_text_column,
                           cfg.delimiter)
        scores = [company_opinion_score(posts.get(s, []), cfg.opinion_normalize)
                  for s in d.sample_ids]
        d = _with_column(d, OPINION_CODE, np.array(scores, dtype=float))
    return d


def load_horizon(cfg: RunConfig, horizon: Horizon) -> Dataset:
    d = load_dataset(cfg.inputs[horizon], cfg.schema(horizon))
    if horizon in cfg.accounting or horizon in cfg.posts:
        d = augment(d, cfg, horizon)
    return d


def financial_features(names) -> list[str]:
    return [n for n in names if DEFAULT_CATALOG.category_of(n) in FINANCIAL_CATEGORIES]


@dataclass
class HorizonResult:
    horizon: Horizon
    n_input_features: int
    dropped: list[str]
    screened: Dataset
    k_requested: int
    sweep: SweepResult
    comparison: Comparison | None
    comparison_note: str = ""


@dataclass
class PipelineResult:
    config: RunConfig
    horizons: list[HorizonResult] = field(default_factory=list)
    report: EvaluationReport = field(default_factory=EvaluationReport)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except FDPError as exc:
        raise StageError(name, exc) from exc
    except (OSError, ValueError) as exc:
        raise StageError(name, exc) from exc


def run_pipeline(cfg: RunConfig) -> PipelineResult:
    """Screen each horizon, sweep beta, then compare indicator systems at the best beta."""
    result = PipelineResult(cfg)
    specs = cfg.ordered_specs()
    protocol = cfg.protocol()
    comp_spec = cfg.spec(cfg.comparison_model)
    for h in cfg.horizons:
        d = _stage("load", load_horizon, cfg, h)
        screened, dropped = _stage("screen", screen_missing, d, cfg.missing_threshold,
                                   cfg.imputation)
        log.info("%s: %d features, dropped %s", h.value, screened.n_features, dropped or "none")
        sweep = _stage("select", sweep_beta, screened, cfg.betas, cfg.k, specs, protocol,
                       cfg.C, cfg.bins, cfg.epsilon)
        for beta, outcome in sweep.outcomes.items():
            for kind, cell in outcome.cells.items():
                result.report.add(h.value, beta, kind, cell)
        selected = sweep.outcomes[sweep.best_beta].selected
        fin = financial_features(screened.feature_names)
        comparison, note = None, ""
        if fin:
            comparison = _stage("compare", compare_indicator_systems, screened,
                                screened.select_features(fin), selected, comp_spec, protocol)
        else:
            note = "no cataloged financial features survive screening; comparison skipped"
            log.warning("%s: %s", h.value, note)
        result.horizons.append(HorizonResult(h, d.n_features, dropped, screened, cfg.k, sweep,
                                             comparison, note))
    return result
