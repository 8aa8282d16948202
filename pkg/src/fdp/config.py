"""Plain-text ``key = value`` run configuration.

Blank lines and lines starting with ``#`` are ignored. Per-horizon inputs use
dotted keys (``input.T-1``), model hyperparameters ``model.<KIND>.<name>``.
Relative paths resolve against the configuration file's directory.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from pathlib import Path

from .data_model import Horizon, Schema
from .errors import ConfigError
from .evaluation import Protocol
from .models import DEFAULTS, ClassifierSpec, Kind
from .preprocess import DEFAULT_MISSING_THRESHOLD, DEFAULT_TRAIN_FRACTION
from .selection.mrmr import EPSILON
from .selection.mutual_info import DEFAULT_BINS
from .selection.rfe import DEFAULT_BETAS
from .selection.svm import DEFAULT_C

_DELIMITERS = {"comma": ",", "tab": "\t", "semicolon": ";", "pipe": "|", "space": " "}

SCALAR_KEYS = {
    "horizons", "lexicon", "sentiment_mode", "opinion_normalize", "dap_absolute",
    "jones_min_rows", "jones_group_column", "audit_column",
    "schema.id_column", "schema.label_column", "schema.positive_labels",
    "schema.negative_labels", "schema.missing_tokens", "schema.delimiter",
    "posts.id_column", "posts.text_column",
    "missing_threshold", "imputation", "train_fraction", "bins", "C", "betas", "k",
    "epsilon", "models", "selector", "comparison_model", "repetitions", "seed",
    "output_dir",
}
HORIZON_PREFIXES = ("input", "accounting", "posts")


@dataclass
class RunConfig:
    horizons: list[Horizon] = field(default_factory=lambda: [Horizon.T1])
    inputs: dict[Horizon, Path] = field(default_factory=dict)
    accounting: dict[Horizon, Path] = field(default_factory=dict)
    posts: dict[Horizon, Path] = field(default_factory=dict)
    lexicon: Path | None = None
    sentiment_mode: str = "scored"
    opinion_normalize: bool = False
    dap_absolute: bool = False
    jones_min_rows: int = 10
    jones_group_column: str | None = None
    audit_column: str = "audit_opinion"
    id_column: str = "id"
    label_column: str = "label"
    positive_labels: tuple[str, ...] = ("ST", "1", "+1")
    negative_labels: tuple[str, ...] = ("non-ST", "OK", "0", "-1")
    missing_tokens: tuple[str, ...] = ("",)
    delimiter: str = ","
    posts_id_column: str = "id"
    posts_text_column: str = "sentiment"
    missing_threshold: float = DEFAULT_MISSING_THRESHOLD
    imputation: str = "mean"
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    bins: int = DEFAULT_BINS
    C: float = DEFAULT_C
    betas: tuple[float, ...] = DEFAULT_BETAS
    k: int = 20
    epsilon: float = EPSILON
    models: list[ClassifierSpec] = field(
        default_factory=lambda: [ClassifierSpec(k) for k in (Kind.LR, Kind.DT, Kind.BP, Kind.SVM)]
    )
    selector: str = "BP"
    comparison_model: str = "BP"
    repetitions: int = 10
    seed: int = 0
    output_dir: Path = Path("fdp-out")
    source: Path | None = None

    def schema(self, horizon: Horizon) -> Schema:
        return Schema(
            id_column=self.id_column,
            label_column=self.label_column,
            horizon=horizon,
            positive_labels=self.positive_labels,
            negative_labels=self.negative_labels,
            missing_tokens=self.missing_tokens,
            delimiter=self.delimiter,
        )

    def protocol(self) -> Protocol:
        return Protocol(self.repetitions, self.train_fraction, self.seed)

    def spec(self, kind: str) -> ClassifierSpec:
        for s in self.models:
            if s.kind.value == kind:
                return s
        raise ConfigError(f"model {kind} is not among the configured models")

    def ordered_specs(self) -> list[ClassifierSpec]:
        """Configured models with the beta selector first."""
        first = [s for s in self.models if s.kind.value == self.selector]
        return first + [s for s in self.models if s.kind.value != self.selector]

    def effective_items(self) -> list[tuple[str, str]]:
        """Every key with defaults expanded, in a stable order."""
        items = [
            ("horizons", ", ".join(h.value for h in self.horizons)),
        ]
        for prefix, table in (("input", self.inputs), ("accounting", self.accounting),
                              ("posts", self.posts)):
            for h in self.horizons:
                if h in table:
                    items.append((f"{prefix}.{h.value}", str(table[h])))
        items += [
            ("lexicon", "" if self.lexicon is None else str(self.lexicon)),
            ("sentiment_mode", self.sentiment_mode),
            ("opinion_normalize", str(self.opinion_normalize).lower()),
            ("dap_absolute", str(self.dap_absolute).lower()),
            ("jones_min_rows", str(self.jones_min_rows)),
            ("jones_group_column", self.jones_group_column or ""),
            ("audit_column", self.audit_column),
            ("schema.id_column", self.id_column),
            ("schema.label_column", self.label_column),
            ("schema.positive_labels", ", ".join(self.positive_labels)),
            ("schema.negative_labels", ", ".join(self.negative_labels)),
            ("schema.missing_tokens", ", ".join(repr(t) for t in self.missing_tokens)),
            ("schema.delimiter", repr(self.delimiter)),
            ("posts.id_column", self.posts_id_column),
            ("posts.text_column", self.posts_text_column),
            ("missing_threshold", repr(self.missing_threshold)),
            ("imputation", self.imputation),
            ("train_fraction", repr(self.train_fraction)),
            ("bins", str(self.bins)),
            ("C", repr(self.C)),
            ("betas", ", ".join(repr(b) for b in self.betas)),
            ("k", str(self.k)),
            ("epsilon", repr(self.epsilon)),
            ("models", ", ".join(s.kind.value for s in self.models)),
            ("selector", self.selector),
            ("comparison_model", self.comparison_model),
            ("repetitions", str(self.repetitions)),
            ("seed", str(self.seed)),
            ("output_dir", str(self.output_dir)),
        ]
        for s in self.models:
            for name, val in sorted(s.hyperparameters.items()):
                items.append((f"model.{s.kind.value}.{name}", repr(val)))
        return items


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _parse_tokens(text: str) -> list[str]:
    """Comma list where quoted items keep their exact text ("" is an empty token)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if len(part) >= 2 and part[0] == part[-1] and part[0] in "'\"":
            out.append(part[1:-1])
        elif part:
            out.append(part)
    return out


def _parse_value(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        low = text.strip().lower()
        if low in ("none", "null", ""):
            return None
        if low in ("true", "false"):
            return low == "true"
        return text.strip()


def read_pairs(path: Path) -> list[tuple[int, str, str]]:
    pairs = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        pairs.append((lineno, key.strip(), value.strip()))
    return pairs


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"configuration file {path} not found")
    base = path.resolve().parent
    cfg = RunConfig(source=path)
    model_overrides: dict[Kind, dict] = {}

    def resolve(p: str) -> Path:
        q = Path(p)
        return q if q.is_absolute() else base / q

    for lineno, key, value in read_pairs(path):
        where = f"{path}:{lineno}"
        try:
            prefix, _, rest = key.partition(".")
            if prefix in HORIZON_PREFIXES and rest:
                table = {"input": cfg.inputs, "accounting": cfg.accounting, "posts": cfg.posts}[prefix]
                if prefix == "posts" and rest in ("id_column", "text_column"):
                    setattr(cfg, f"posts_{rest}", value)
                    continue
                table[Horizon(rest)] = resolve(value)
            elif prefix == "model" and rest:
                kind_name, _, hp = rest.partition(".")
                kind = Kind(kind_name)
                if hp not in DEFAULTS[kind]:
                    raise ConfigError(f"unknown {kind.value} hyperparameter {hp!r}")
                model_overrides.setdefault(kind, {})[hp] = _parse_value(value)
            elif key not in SCALAR_KEYS:
                raise ConfigError(f"unknown key {key!r}")
            elif key == "horizons":
                cfg.horizons = [Horizon(h) for h in _parse_list(value)]
            elif key == "lexicon":
                cfg.lexicon = resolve(value) if value else None
            elif key in ("opinion_normalize", "dap_absolute"):
                setattr(cfg, key, _parse_bool(value))
            elif key in ("jones_min_rows", "bins", "k", "repetitions", "seed"):
                setattr(cfg, key, int(value))
            elif key in ("missing_threshold", "train_fraction", "C", "epsilon"):
                setattr(cfg, key, float(value))
            elif key == "betas":
                cfg.betas = tuple(float(b) for b in _parse_list(value))
            elif key == "models":
                cfg.models = [ClassifierSpec(Kind(k)) for k in _parse_list(value)]
            elif key == "output_dir":
                cfg.output_dir = resolve(value)
            elif key == "jones_group_column":
                cfg.jones_group_column = value or None
            elif key.startswith("schema."):
                name = key.split(".", 1)[1]
                if name in ("positive_labels", "negative_labels"):
                    setattr(cfg, name, tuple(_parse_list(value)))
                elif name == "missing_tokens":
                    cfg.missing_tokens = tuple(dict.fromkeys(["", *_parse_tokens(value)]))
                elif name == "delimiter":
                    tok = _parse_tokens(value) or [","]
                    delim = _DELIMITERS.get(tok[0].lower(), tok[0])
                    if len(delim) != 1:
                        raise ConfigError(f"delimiter must be one character, got {delim!r}")
                    cfg.delimiter = delim
                else:
                    setattr(cfg, name, value)
            else:
                setattr(cfg, key, value)
        except ConfigError as exc:
            raise ConfigError(f"{where}: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key}: {exc}") from None
    if "selector" not in {k for _, k, _ in read_pairs(path)} and cfg.models:
        kinds = [s.kind.value for s in cfg.models]
        cfg.selector = "BP" if "BP" in kinds else kinds[0]
    if "comparison_model" not in {k for _, k, _ in read_pairs(path)} and cfg.models:
        kinds = [s.kind.value for s in cfg.models]
        cfg.comparison_model = "BP" if "BP" in kinds else kinds[0]
    for kind, hp in model_overrides.items():
        cfg.models = [ClassifierSpec(s.kind, {**s.hyperparameters, **hp}) if s.kind is kind else s
                      for s in cfg.models]
    return cfg


@dataclass
class Finding:
    level: str  # "error" or "warning"
    message: str


def check_ranges(cfg: RunConfig) -> list[Finding]:
    out = []

    def err(msg):
        out.append(Finding("error", msg))

    if not cfg.horizons:
        err("no horizons configured")
    for h in cfg.horizons:
        if h not in cfg.inputs:
            err(f"no input table for horizon {h.value} (key input.{h.value})")
    if not 0.0 <= cfg.missing_threshold <= 1.0:
        err(f"missing_threshold {cfg.missing_threshold} outside [0, 1]")
    if cfg.imputation not in ("mean", "median"):
        err(f"imputation must be mean or median, got {cfg.imputation!r}")
    if not 0.0 < cfg.train_fraction < 1.0:
        err(f"train_fraction {cfg.train_fraction} outside (0, 1)")
    if cfg.bins < 2:
        err(f"bins must be at least 2, got {cfg.bins}")
    if not cfg.C > 0:
        err(f"C must be positive, got {cfg.C}")
    if not cfg.betas:
        err("betas is empty")
    for b in cfg.betas:
        if not 0.0 <= b <= 1.0:
            err(f"beta {b} outside [0, 1]")
    if cfg.k < 1:
        err(f"k must be at least 1, got {cfg.k}")
    if not cfg.epsilon > 0:
        err(f"epsilon must be positive, got {cfg.epsilon}")
    if cfg.repetitions < 1:
        err(f"repetitions must be at least 1, got {cfg.repetitions}")
    if cfg.jones_min_rows < 1:
        err("jones_min_rows must be positive")
    if cfg.sentiment_mode not in ("scored", "lexicon"):
        err(f"sentiment_mode must be scored or lexicon, got {cfg.sentiment_mode!r}")
    if not cfg.models:
        err("no models configured")
    kinds = [s.kind.value for s in cfg.models]
    for key in ("selector", "comparison_model"):
        if getattr(cfg, key) not in kinds:
            err(f"{key} {getattr(cfg, key)!r} is not among the configured models {kinds}")
    if len(set(kinds)) != len(kinds):
        err("models lists a kind twice")
    return out
