"""Derived indicator columns: audit opinion, accrual earnings management, opinion score."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    CollinearityError,
    DomainError,
    IndicatorError,
    ParseError,
    SampleSizeError,
)

CONDITION_LIMIT = 1e10


class AuditOpinion(str, Enum):
    STANDARD_UNQUALIFIED = "standard_unqualified"
    OTHER = "other"


_STANDARD_FORMS = {
    "standard_unqualified",
    "standard unqualified",
    "standard unqualified opinion",
    "unqualified",
    "clean",
    "标准无保留意见",
}
_OTHER_MARKERS = (
    "qualified",
    "adverse",
    "disclaim",
    "emphasis",
    "other",
    "保留",
    "否定",
    "无法表示",
    "强调",
)


def parse_audit_opinion(text: str) -> AuditOpinion:
    norm = " ".join(text.strip().lower().replace("-", " ").split())
    if norm in _STANDARD_FORMS:
        return AuditOpinion.STANDARD_UNQUALIFIED
    if any(m in norm for m in _OTHER_MARKERS):
        return AuditOpinion.OTHER
    raise IndicatorError(f"unrecognized audit opinion {text!r}")


def encode_audit_opinion(opinion: AuditOpinion | str) -> int:
    """0 for a standard unqualified opinion, 1 for anything else."""
    if not isinstance(opinion, AuditOpinion):
        opinion = parse_audit_opinion(opinion)
    return 0 if opinion is AuditOpinion.STANDARD_UNQUALIFIED else 1


@dataclass(frozen=True)
class JonesInputRow:
    total_assets_prev: float
    operating_profit: float
    operating_cash_flow: float
    delta_revenue: float
    delta_receivables: float
    fixed_assets_closing: float

    def __post_init__(self):
        if not self.total_assets_prev > 0:
            raise DomainError(f"total_assets_prev must be positive, got {self.total_assets_prev}")


@dataclass(frozen=True)
class JonesCoefficients:
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a1, self.a2, self.a3)):
            raise IndicatorError(f"non-finite Jones coefficients {self}")


def total_accruals(row: JonesInputRow) -> float:
    return row.operating_profit - row.operating_cash_flow


def jones_design(rows: Sequence[JonesInputRow]) -> tuple[np.ndarray, np.ndarray]:
    """Regressors [1/A, dREV/A, PPE/A] and response TA/A, one row per company."""
    a = np.array([r.total_assets_prev for r in rows], dtype=float)
    X = np.column_stack([
        1.0 / a,
        np.array([r.delta_revenue for r in rows], dtype=float) / a,
        np.array([r.fixed_assets_closing for r in rows], dtype=float) / a,
    ])
    y = np.array([total_accruals(r) for r in rows], dtype=float) / a
    return X, y


def fit_jones(rows: Sequence[JonesInputRow], min_rows: int = 10) -> JonesCoefficients:
    """No-intercept least squares of TA/A on the three scaled regressors (Householder QR)."""
    rows = list(rows)
    if len(rows) < min_rows:
        raise SampleSizeError(f"{len(rows)} rows, need at least {min_rows}")
    X, y = jones_design(rows)
    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > CONDITION_LIMIT:
        cond = math.inf if sv[-1] == 0.0 else sv[0] / sv[-1]
        raise CollinearityError(f"design matrix is rank deficient (condition {cond:.3g})")
    q, r = np.linalg.qr(X, mode="reduced")
    coef = solve_triangular(r, q.T @ y, lower=False)
    return JonesCoefficients(*(float(c) for c in coef))


def non_manipulable_accruals(coeffs: JonesCoefficients, row: JonesInputRow) -> float:
    a = row.total_assets_prev
    return (
        coeffs.a1 / a
        + coeffs.a2 * (row.delta_revenue - row.delta_receivables) / a
        + coeffs.a3 * row.fixed_assets_closing / a
    )


def accrual_earnings_management(row: JonesInputRow, coeffs: JonesCoefficients) -> float:
    """Discretionary accruals: scaled total accruals minus the non-manipulable part."""
    return total_accruals(row) / row.total_assets_prev - non_manipulable_accruals(coeffs, row)


def post_influence(looks: float, comments: float) -> float:
    if looks < 0 or comments < 0:
        raise DomainError(f"looks and comments must be nonnegative, got {looks}, {comments}")
    return looks ** 0.25 + math.sqrt(comments)


def lexicon_sentiment(tokens: Iterable[str], lexicon: Mapping[str, int]) -> float:
    """Mean polarity over tokens found in the lexicon; 0 when none match."""
    hits = [lexicon[t] for t in tokens if t in lexicon]
    if not hits:
        return 0.0
    return sum(hits) / len(hits)


@dataclass(frozen=True)
class OpinionPost:
    sentiment: float
    looks: int
    comments: int

    def __post_init__(self):
        for name in ("looks", "comments"):
            v = getattr(self, name)
            if v < 0 or v != int(v):
                raise DomainError(f"{name} must be a nonnegative integer, got {v}")

    @property
    def influence(self) -> float:
        return post_influence(self.looks, self.comments)


def company_opinion_score(posts: Iterable[OpinionPost], normalize: bool = False) -> float:
    """Influence-weighted sum of post sentiment; divided by total influence if normalize."""
    total = 0.0
    weight = 0.0
    for p in posts:
        infl = p.influence
        total += p.sentiment * infl
        weight += infl
    if normalize:
        return total / weight if weight > 0 else 0.0
    return total


def load_lexicon(path: str | Path) -> dict[str, int]:
    """One ``token polarity`` pair per line (whitespace or tab separated)."""
    lexicon: dict[str, int] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.rsplit(None, 1)
            if len(parts) != 2:
                raise ParseError("expected token and polarity", line=lineno)
            token, pol = parts
            try:
                value = int(float(pol))
            except ValueError:
                raise ParseError(f"bad polarity {pol!r}", line=lineno) from None
            if value not in (-1, 1):
                raise ParseError(f"polarity must be -1 or +1, got {pol}", line=lineno)
            lexicon[token] = value
    if not lexicon:
        raise ParseError(f"lexicon {path} is empty")
    return lexicon


def load_posts(
    path: str | Path,
    lexicon: Mapping[str, int] | None = None,
    id_column: str = "id",
    text_column: str = "sentiment",
    delimiter: str = ",",
) -> dict[str, list[OpinionPost]]:
    """Read posts grouped by company id.

    Without a lexicon the text column must hold a numeric sentiment score in
    [-1, 1]; with one it holds whitespace-separated tokens.
    """
    out: dict[str, list[OpinionPost]] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        for col in (id_column, text_column, "looks", "comments"):
            if reader.fieldnames is None or col not in reader.fieldnames:
                raise ParseError(f"posts file lacks column {col!r}", line=1)
        for row in reader:
            lineno = reader.line_num
            text = row[text_column] or ""
            try:
                if lexicon is None:
                    sentiment = float(text)
                    if not -1.0 <= sentiment <= 1.0:
                        raise ParseError(f"sentiment {sentiment} outside [-1, 1]", line=lineno)
                else:
                    sentiment = lexicon_sentiment(text.split(), lexicon)
                looks = float(row["looks"])
                comments = float(row["comments"])
                post = OpinionPost(sentiment, int(looks) if looks == int(looks) else looks,
                                   int(comments) if comments == int(comments) else comments)
            except (ValueError, DomainError) as exc:
                raise ParseError(str(exc), line=lineno) from None
            out.setdefault(row[id_column].strip(), []).append(post)
    return out


JONES_COLUMNS = (
    "total_assets_prev",
    "operating_profit",
    "operating_cash_flow",
    "delta_revenue",
    "delta_receivables",
    "fixed_assets_closing",
)


@dataclass(frozen=True)
class AccountingRecord:
    """One company's accounting inputs; ``jones`` is None when any input is blank."""

    company: str
    jones: JonesInputRow | None
    audit_opinion: str | None
    group: str | None = None


def load_accounting(
    path: str | Path,
    id_column: str = "id",
    audit_column: str = "audit_opinion",
    group_column: str | None = None,
    delimiter: str = ",",
) -> dict[str, AccountingRecord]:
    """Read per-company Jones inputs and audit opinion text.

    Blank Jones cells leave the company without a DAP value; a blank audit
    cell leaves Audittyp missing. The audit and group columns are optional.
    """
    out: dict[str, AccountingRecord] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        fields = reader.fieldnames or []
        for col in (id_column, *JONES_COLUMNS):
            if col not in fields:
                raise ParseError(f"accounting file lacks column {col!r}", line=1)
        if group_column is not None and group_column not in fields:
            raise ParseError(f"accounting file lacks group column {group_column!r}", line=1)
        for row in reader:
            lineno = reader.line_num
            company = (row[id_column] or "").strip()
            if company in out:
                raise ParseError(f"duplicate company {company!r}", line=lineno)
            cells = [(row[c] or "").strip() for c in JONES_COLUMNS]
            jones = None
            if all(cells):
                try:
                    jones = JonesInputRow(*(float(c) for c in cells))
                except (ValueError, DomainError) as exc:
                    raise ParseError(str(exc), line=lineno) from None
            audit = (row.get(audit_column) or "").strip() or None
            group = None if group_column is None else (row[group_column] or "").strip()
            out[company] = AccountingRecord(company, jones, audit, group)
    return out


def dap_by_company(records: Mapping[str, AccountingRecord], min_rows: int = 10,
                   absolute: bool = False) -> dict[str, float]:
    """Fit the Jones regression per group (one pooled group by default) and return DAP.

    Companies with incomplete inputs get no entry.
    """
    groups: dict[str | None, list[AccountingRecord]] = {}
    for rec in records.values():
        if rec.jones is not None:
            groups.setdefault(rec.group, []).append(rec)
    out = {}
    for recs in groups.values():
        coeffs = fit_jones([r.jones for r in recs], min_rows=min_rows)
        for r in recs:
            v = accrual_earnings_management(r.jones, coeffs)
            out[r.company] = abs(v) if absolute else v
    return out
