"""Multi-source indicator tables: catalog, dataset container, and file I/O."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, LabelError, ParseError, UniquenessError


class Category(str, Enum):
    SOLVENCY = "solvency"
    DEVELOPMENT = "development"
    STRUCTURAL_RATIO = "structural_ratio"
    PROFITABILITY = "profitability"
    OPERATING = "operating"
    EXPANSION = "expansion"
    GOVERNANCE = "governance"
    AUDIT = "audit"
    EARNINGS_MGMT = "earnings_mgmt"
    MACROECONOMIC = "macroeconomic"
    PUBLIC_MARKET = "public_market"
    OPINION = "opinion"


FINANCIAL_CATEGORIES = frozenset({
    Category.SOLVENCY,
    Category.DEVELOPMENT,
    Category.STRUCTURAL_RATIO,
    Category.PROFITABILITY,
    Category.OPERATING,
    Category.EXPANSION,
})


class Horizon(str, Enum):
    T1 = "T-1"
    T2 = "T-2"
    T3 = "T-3"


@dataclass(frozen=True)
class CatalogEntry:
    code: str
    category: Category
    description: str


@dataclass(frozen=True)
class FeatureCatalog:
    entries: tuple[CatalogEntry, ...]

    def __post_init__(self):
        counts = Counter(e.code for e in self.entries)
        dupes = sorted(c for c, k in counts.items() if k > 1)
        if dupes:
            raise UniquenessError("duplicate catalog codes: " + ", ".join(dupes))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, code):
        return any(e.code == code for e in self.entries)

    @property
    def codes(self) -> list[str]:
        return [e.code for e in self.entries]

    def get(self, code: str) -> CatalogEntry | None:
        for e in self.entries:
            if e.code == code:
                return e
        return None

    def category_of(self, code: str) -> Category | None:
        entry = self.get(code)
        return entry.category if entry else None


_C = Category
_DEFAULT_ENTRIES = [
    ("F1", _C.SOLVENCY, "Current ratio"),
    ("F2", _C.SOLVENCY, "Quick ratio"),
    ("F3", _C.SOLVENCY, "Cash ratio"),
    ("F4", _C.SOLVENCY, "Operating cash flow / current liabilities"),
    ("F5", _C.SOLVENCY, "Gearing ratio"),
    ("F6", _C.SOLVENCY, "Interest coverage multiple"),
    ("F7", _C.DEVELOPMENT, "Total assets growth rate"),
    ("F8", _C.DEVELOPMENT, "Net profit growth rate"),
    ("F9", _C.DEVELOPMENT, "Operating income growth rate"),
    ("F10", _C.STRUCTURAL_RATIO, "Current asset ratio"),
    ("F11", _C.STRUCTURAL_RATIO, "Fixed asset ratio"),
    ("F12", _C.STRUCTURAL_RATIO, "Shareholders' equity / fixed assets"),
    ("F13", _C.STRUCTURAL_RATIO, "Current liability ratio"),
    ("F14", _C.PROFITABILITY, "Net profit margin of total assets"),
    ("F15", _C.PROFITABILITY, "Net profit margin of current assets"),
    ("F16", _C.PROFITABILITY, "Net profit rate of fixed assets"),
    ("F17", _C.PROFITABILITY, "Operating cost ratio"),
    ("F18", _C.PROFITABILITY, "Operating profit margin"),
    ("F19", _C.PROFITABILITY, "Return on net assets"),
    ("F20", _C.OPERATING, "Turnover ratio of accounts payable"),
    ("F21", _C.OPERATING, "Turnover ratio of receivables"),
    ("F22", _C.OPERATING, "Turnover ratio of inventories"),
    ("F23", _C.OPERATING, "Turnover ratio of fixed assets"),
    ("F24", _C.OPERATING, "Turnover ratio of total assets"),
    ("F25", _C.EXPANSION, "Earnings per share"),
    ("F26", _C.EXPANSION, "Net assets per share"),
    ("F27", _C.EXPANSION, "Capital surplus per share"),
    ("F28", _C.EXPANSION, "Net cash flow per share"),
    ("GVN", _C.GOVERNANCE, "Independent directors / board size"),
    ("Audittyp", _C.AUDIT, "Audit opinion (0 standard unqualified, 1 otherwise)"),
    ("DAP", _C.EARNINGS_MGMT, "Accrual earnings management (modified Jones)"),
    ("E1", _C.MACROECONOMIC, "Growth rate of total retail sales of consumer goods"),
    ("E2", _C.MACROECONOMIC, "GDP growth rate"),
    ("E3", _C.MACROECONOMIC, "M1 money supply growth rate"),
    ("E4", _C.MACROECONOMIC, "M2 money supply growth rate"),
    ("E5", _C.MACROECONOMIC, "CPI growth rate"),
    ("E6", _C.MACROECONOMIC, "RPI growth rate"),
    ("E7", _C.MACROECONOMIC, "Unemployment rate"),
    ("E8", _C.MACROECONOMIC, "Growth rate of total import and export"),
    ("E9", _C.MACROECONOMIC, "Exchange rate"),
    ("M1", _C.PUBLIC_MARKET, "Total market capitalization"),
    ("M2", _C.PUBLIC_MARKET, "A-shares / total share capital"),
    ("emotion", _C.OPINION, "Influence-weighted shareholder opinion score"),
]

DEFAULT_CATALOG = FeatureCatalog(tuple(CatalogEntry(*e) for e in _DEFAULT_ENTRIES))


@dataclass(frozen=True, eq=False)
class Dataset:
    """K samples by n features; NaN marks a missing cell, labels are +1 (ST) / -1."""

    feature_names: tuple[str, ...]
    values: np.ndarray
    labels: np.ndarray
    sample_ids: tuple[str, ...]
    horizon: Horizon = Horizon.T1

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        labels = np.array(self.labels, dtype=int, copy=True)
        names = tuple(self.feature_names)
        ids = tuple(str(s) for s in self.sample_ids)
        if values.ndim != 2:
            values = values.reshape(len(ids), len(names))
        k, n = values.shape
        if len(names) != n:
            raise DataError(f"{len(names)} feature names for {n} columns")
        if len(labels) != k or len(ids) != k:
            raise DataError(f"{k} rows but {len(labels)} labels and {len(ids)} ids")
        bad = set(np.unique(labels).tolist()) - {1, -1}
        if bad:
            raise LabelError(f"labels must be +1 or -1, got {sorted(bad)}")
        dupes = sorted(s for s, c in Counter(ids).items() if c > 1)
        if dupes:
            raise UniquenessError("duplicate sample id: " + ", ".join(dupes))
        dup_names = sorted(s for s, c in Counter(names).items() if c > 1)
        if dup_names:
            raise UniquenessError("duplicate feature name: " + ", ".join(dup_names))
        values.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "sample_ids", ids)
        object.__setattr__(self, "horizon", Horizon(self.horizon))

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.feature_names.index(name)]

    def select_features(self, names: Iterable[str]) -> "Dataset":
        names = list(names)
        unknown = [n for n in names if n not in self.feature_names]
        if unknown:
            raise DataError("unknown features: " + ", ".join(unknown))
        idx = [self.feature_names.index(n) for n in names]
        return self.replace(feature_names=names, values=self.values[:, idx])

    def take(self, rows: Sequence[int]) -> "Dataset":
        rows = np.asarray(rows, dtype=int)
        return self.replace(
            values=self.values[rows],
            labels=self.labels[rows],
            sample_ids=[self.sample_ids[i] for i in rows],
        )

    def replace(self, **changes) -> "Dataset":
        kw = dict(
            feature_names=self.feature_names,
            values=self.values,
            labels=self.labels,
            sample_ids=self.sample_ids,
            horizon=self.horizon,
        )
        kw.update(changes)
        return Dataset(**kw)

    def class_counts(self) -> tuple[int, int]:
        """(positives, negatives)."""
        pos = int(np.sum(self.labels == 1))
        return pos, self.n_samples - pos


@dataclass(frozen=True)
class Schema:
    """How to read a delimited indicator table."""

    id_column: str = "id"
    label_column: str = "label"
    horizon: Horizon = Horizon.T1
    positive_labels: tuple[str, ...] = ("ST", "1", "+1")
    negative_labels: tuple[str, ...] = ("non-ST", "OK", "0", "-1")
    missing_tokens: tuple[str, ...] = ("",)
    delimiter: str = ","
    # written for +1 / -1 when serializing
    positive_token: str | None = None
    negative_token: str | None = None

    def label_value(self, token: str) -> int:
        token = token.strip()
        if token in self.positive_labels:
            return 1
        if token in self.negative_labels:
            return -1
        raise LabelError(f"unknown label token {token!r}")


def load_dataset(path: str | Path, schema: Schema = Schema()) -> Dataset:
    path = Path(path)
    missing = set(schema.missing_tokens)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file, expected a header row", line=1) from None
        header = [h.strip() for h in header]
        for col in (schema.id_column, schema.label_column):
            if col not in header:
                raise ParseError(f"header lacks column {col!r}", line=1)
        id_idx = header.index(schema.id_column)
        label_idx = header.index(schema.label_column)
        feat_idx = [i for i in range(len(header)) if i not in (id_idx, label_idx)]
        ids, labels, rows = [], [], []
        for row in reader:
            lineno = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, found {len(row)}", line=lineno)
            try:
                labels.append(schema.label_value(row[label_idx]))
            except LabelError as exc:
                raise LabelError(f"line {lineno}: {exc}") from None
            ids.append(row[id_idx].strip())
            cells = []
            for i in feat_idx:
                tok = row[i].strip()
                if tok in missing:
                    cells.append(math.nan)
                    continue
                try:
                    cells.append(float(tok))
                except ValueError:
                    raise ParseError(f"non-numeric value {tok!r} in column {header[i]!r}", line=lineno) from None
            rows.append(cells)
    values = np.array(rows, dtype=float).reshape(len(rows), len(feat_idx))
    return Dataset(
        feature_names=[header[i] for i in feat_idx],
        values=values,
        labels=labels,
        sample_ids=ids,
        horizon=schema.horizon,
    )


def write_dataset(d: Dataset, path: str | Path, schema: Schema = Schema()) -> None:
    """Inverse of load_dataset; floats use repr so present values round-trip exactly."""
    pos = schema.positive_token or schema.positive_labels[0]
    neg = schema.negative_token or schema.negative_labels[0]
    blank = schema.missing_tokens[0]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=schema.delimiter, lineterminator="\n")
        w.writerow([schema.id_column, schema.label_column, *d.feature_names])
        for sid, lab, row in zip(d.sample_ids, d.labels, d.values):
            cells = [blank if math.isnan(v) else repr(float(v)) for v in row]
            w.writerow([sid, pos if lab == 1 else neg, *cells])


@dataclass
class ValidationReport:
    uncataloged: list[str]
    missing_fraction: dict[str, float]
    class_counts: tuple[int, int]
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def validate_dataset(d: Dataset, catalog: FeatureCatalog = DEFAULT_CATALOG) -> ValidationReport:
    uncataloged = [name for name in d.feature_names if name not in catalog]
    if d.n_samples:
        frac = d.missing.mean(axis=0)
    else:
        frac = np.zeros(d.n_features)
    missing_fraction = {name: float(f) for name, f in zip(d.feature_names, frac)}
    counts = d.class_counts()
    problems = [f"uncataloged feature {name}" for name in uncataloged]
    if 0 in counts:
        problems.append(f"single-class labels: {counts[0]} positive, {counts[1]} negative")
    return ValidationReport(uncataloged, missing_fraction, counts, problems)
