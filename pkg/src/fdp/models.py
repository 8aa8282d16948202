"""Binary classifiers used to score feature subsets: LR, linear SVM, BP network, CART tree."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy.special import expit

from .errors import ArgumentError, ClassError, DivergenceError, ShapeError
from .selection.svm import train_linear_svm

FORMAT_VERSION = 1


class Kind(str, Enum):
    LR = "LR"
    SVM = "SVM"
    BP = "BP"
    DT = "DT"


DEFAULTS: dict[Kind, dict[str, Any]] = {
    Kind.LR: {"learning_rate": 0.1, "l2": 1e-3, "epochs": 500, "tol": 1e-6, "seed": 0},
    Kind.SVM: {"C": 1.0, "seed": 0},
    Kind.BP: {
        "hidden": 16,
        "learning_rate": 0.05,
        "epochs": 2000,
        "batch_size": 16,
        "momentum": 0.9,
        "l2": 1e-4,
        "seed": 0,
    },
    Kind.DT: {"max_depth": 5, "min_leaf": 2, "seed": 0},
}


@dataclass(frozen=True)
class ClassifierSpec:
    kind: Kind
    hyperparameters: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        unknown = sorted(set(self.hyperparameters) - set(DEFAULTS[kind]))
        if unknown:
            raise ArgumentError(f"unknown {kind.value} hyperparameters: {', '.join(unknown)}")
        merged = dict(DEFAULTS[kind])
        merged.update(self.hyperparameters)
        object.__setattr__(self, "hyperparameters", merged)

    def get(self, key):
        return self.hyperparameters[key]

    def with_seed(self, seed: int) -> "ClassifierSpec":
        return ClassifierSpec(self.kind, {**self.hyperparameters, "seed": seed})


@dataclass(frozen=True)
class TreeNode:
    prediction: int
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"prediction": self.prediction}
        return {
            "prediction": self.prediction,
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TreeNode":
        if "left" not in d:
            return cls(int(d["prediction"]))
        return cls(int(d["prediction"]), int(d["feature"]), float(d["threshold"]),
                   cls.from_dict(d["left"]), cls.from_dict(d["right"]))

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass(frozen=True, eq=False)
class TrainedModel:
    kind: Kind
    n_features: int
    params: dict
    metadata: dict

    def to_text(self) -> str:
        payload = {}
        for key, val in self.params.items():
            if isinstance(val, TreeNode):
                payload[key] = val.to_dict()
            elif isinstance(val, np.ndarray):
                payload[key] = val.tolist()
            else:
                payload[key] = val
        lines = [
            f"fdp-model {FORMAT_VERSION}",
            f"kind {self.kind.value}",
            f"n_features {self.n_features}",
            "metadata " + json.dumps(self.metadata, sort_keys=True),
            "params " + json.dumps(payload, sort_keys=True),
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TrainedModel":
        fields = dict(line.split(" ", 1) for line in text.strip().splitlines())
        if int(fields["fdp-model"]) != FORMAT_VERSION:
            raise ArgumentError(f"unsupported model format {fields['fdp-model']}")
        kind = Kind(fields["kind"])
        raw = json.loads(fields["params"])
        params = {}
        for key, val in raw.items():
            if key == "tree":
                params[key] = TreeNode.from_dict(val)
            elif isinstance(val, list):
                params[key] = np.array(val, dtype=float)
            else:
                params[key] = val
        return cls(kind, int(fields["n_features"]), params, json.loads(fields["metadata"]))


_sigmoid = expit


def _softplus(z):
    return np.logaddexp(0.0, z)


def _check_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ShapeError(f"X has shape {X.shape} but y has {y.shape[0]} labels")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ArgumentError("labels must be +1 or -1")
    if np.all(y == 1) or np.all(y == -1):
        raise ClassError("training data holds a single class")
    if not np.all(np.isfinite(X)):
        raise ArgumentError("X must be fully observed")
    return X, y


# logistic regression ---------------------------------------------------------

def lr_loss_grad(params: dict, X, y, l2: float = 0.0):
    """Mean logistic loss plus l2/2 |w|^2 (bias unpenalized) and its gradient."""
    w, b = params["w"], params["b"]
    z = X @ w + b
    loss = float(np.mean(_softplus(-y * z)) + 0.5 * l2 * w @ w)
    dz = -y * _sigmoid(-y * z) / X.shape[0]
    return loss, {"w": X.T @ dz + l2 * w, "b": float(np.sum(dz))}


def _train_lr(spec: ClassifierSpec, X, y) -> TrainedModel:
    hp = spec.hyperparameters
    params = {"w": np.zeros(X.shape[1]), "b": 0.0}
    lr = hp["learning_rate"]
    epochs_run = 0
    loss = float("nan")
    for epoch in range(int(hp["epochs"])):
        loss, g = lr_loss_grad(params, X, y, hp["l2"])
        if not np.isfinite(loss):
            raise DivergenceError(f"LR loss became {loss} at epoch {epoch}")
        gnorm = np.sqrt(g["w"] @ g["w"] + g["b"] ** 2)
        if gnorm < hp["tol"]:
            break
        params["w"] = params["w"] - lr * g["w"]
        params["b"] = params["b"] - lr * g["b"]
        epochs_run = epoch + 1
    loss, _ = lr_loss_grad(params, X, y, hp["l2"])
    return TrainedModel(Kind.LR, X.shape[1], params,
                        {"epochs_run": epochs_run, "final_loss": loss, "seed": hp["seed"]})


# back-propagation network ----------------------------------------------------

def bp_init(n_in: int, hidden: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    lim1 = 1.0 / np.sqrt(n_in)
    lim2 = 1.0 / np.sqrt(hidden)
    return {
        "W1": rng.uniform(-lim1, lim1, size=(n_in, hidden)),
        "b1": np.zeros(hidden),
        "w2": rng.uniform(-lim2, lim2, size=hidden),
        "b2": 0.0,
    }


def bp_forward(params: dict, X):
    h = _sigmoid(X @ params["W1"] + params["b1"])
    z = h @ params["w2"] + params["b2"]
    return h, z


def bp_loss_grad(params: dict, X, y, l2: float = 0.0):
    """Cross-entropy of a one-hidden-layer sigmoid network, with its gradient."""
    t = (y > 0).astype(float)
    h, z = bp_forward(params, X)
    k = X.shape[0]
    # -[t log p + (1-t) log(1-p)] with p = sigmoid(z)
    loss = float(np.mean(_softplus(z) - t * z))
    loss += 0.5 * l2 * (np.sum(params["W1"] ** 2) + params["w2"] @ params["w2"])
    dz = (_sigmoid(z) - t) / k
    g_w2 = h.T @ dz + l2 * params["w2"]
    g_b2 = float(np.sum(dz))
    dh = np.outer(dz, params["w2"]) * h * (1.0 - h)
    g_W1 = X.T @ dh + l2 * params["W1"]
    g_b1 = dh.sum(axis=0)
    return loss, {"W1": g_W1, "b1": g_b1, "w2": g_w2, "b2": g_b2}


def _train_bp(spec: ClassifierSpec, X, y) -> TrainedModel:
    hp = spec.hyperparameters
    rng = np.random.default_rng(hp["seed"])
    params = bp_init(X.shape[1], int(hp["hidden"]), int(rng.integers(2**32)))
    velocity = {k: np.zeros_like(v) if isinstance(v, np.ndarray) else 0.0 for k, v in params.items()}
    lr, mu, l2 = hp["learning_rate"], hp["momentum"], hp["l2"]
    k = X.shape[0]
    batch = max(1, min(int(hp["batch_size"]), k))
    for epoch in range(int(hp["epochs"])):
        order = rng.permutation(k)
        for start in range(0, k, batch):
            rows = order[start:start + batch]
            _, g = bp_loss_grad(params, X[rows], y[rows], l2)
            for key in params:
                velocity[key] = mu * velocity[key] - lr * g[key]
                params[key] = params[key] + velocity[key]
        if epoch % 100 == 0 and not np.isfinite(params["b2"]):
            raise DivergenceError(f"BP parameters became non-finite at epoch {epoch}")
    loss, _ = bp_loss_grad(params, X, y, l2)
    if not np.isfinite(loss):
        raise DivergenceError(f"BP loss became {loss}")
    params["b2"] = float(params["b2"])
    return TrainedModel(Kind.BP, X.shape[1], params,
                        {"epochs_run": int(hp["epochs"]), "final_loss": loss, "seed": hp["seed"]})


# decision tree ---------------------------------------------------------------

def _majority(y) -> int:
    pos = int(np.sum(y > 0))
    return 1 if 2 * pos >= len(y) else -1


def _gini(pos, total):
    p = pos / total
    return 2.0 * p * (1.0 - p)


def _best_split(X, y, min_leaf):
    """(feature, threshold) minimizing weighted Gini; lowest feature, then threshold, on ties."""
    n = len(y)
    best = None
    best_imp = np.inf
    for j in range(X.shape[1]):
        vals, inverse = np.unique(X[:, j], return_inverse=True)
        if vals.size < 2:
            continue
        pos_per = np.bincount(inverse, weights=(y > 0).astype(float), minlength=vals.size)
        cnt_per = np.bincount(inverse, minlength=vals.size).astype(float)
        pos_left = np.cumsum(pos_per)[:-1]
        n_left = np.cumsum(cnt_per)[:-1]
        pos_right = pos_per.sum() - pos_left
        n_right = n - n_left
        ok = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not ok.any():
            continue
        imp = (n_left * _gini(pos_left, n_left) + n_right * _gini(pos_right, n_right)) / n
        imp = np.where(ok, imp, np.inf)
        t = int(np.argmin(imp))
        if imp[t] < best_imp - 1e-12:
            best_imp = imp[t]
            best = (j, (vals[t] + vals[t + 1]) / 2.0)
    return best


def _grow(X, y, depth, max_depth, min_leaf) -> TreeNode:
    pred = _majority(y)
    pure = np.all(y == y[0])
    if pure or (max_depth is not None and depth >= max_depth) or len(y) < 2 * min_leaf:
        return TreeNode(pred)
    split_at = _best_split(X, y, min_leaf)
    if split_at is None:
        return TreeNode(pred)
    j, thr = split_at
    mask = X[:, j] <= thr
    return TreeNode(pred, j, float(thr),
                    _grow(X[mask], y[mask], depth + 1, max_depth, min_leaf),
                    _grow(X[~mask], y[~mask], depth + 1, max_depth, min_leaf))


def _train_dt(spec: ClassifierSpec, X, y) -> TrainedModel:
    hp = spec.hyperparameters
    max_depth = hp["max_depth"]
    tree = _grow(X, y, 0, None if max_depth is None else int(max_depth), int(hp["min_leaf"]))
    return TrainedModel(Kind.DT, X.shape[1], {"tree": tree},
                        {"depth": tree.depth(), "seed": hp["seed"]})


def _train_svm(spec: ClassifierSpec, X, y) -> TrainedModel:
    m = train_linear_svm(X, y, spec.get("C"))
    return TrainedModel(Kind.SVM, X.shape[1], {"w": m.weights, "b": m.bias},
                        {"iterations": m.iterations, "seed": spec.get("seed")})


_TRAINERS = {Kind.LR: _train_lr, Kind.BP: _train_bp, Kind.DT: _train_dt, Kind.SVM: _train_svm}


def train(spec: ClassifierSpec, X, y) -> TrainedModel:
    X, y = _check_xy(X, y)
    return _TRAINERS[spec.kind](spec, X, y)


def decision_scores(m: TrainedModel, X) -> np.ndarray:
    """Margin or logit per sample; the class boundary sits at 0."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != m.n_features:
        raise ShapeError(f"model expects {m.n_features} columns, got shape {X.shape}")
    if m.kind in (Kind.LR, Kind.SVM):
        return X @ m.params["w"] + m.params["b"]
    if m.kind is Kind.BP:
        return bp_forward(m.params, X)[1]
    tree = m.params["tree"]
    out = np.empty(X.shape[0])
    for r, x in enumerate(X):
        node = tree
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        out[r] = node.prediction
    return out


def predict(m: TrainedModel, X) -> np.ndarray:
    """Labels in {+1, -1}; a score exactly on the boundary counts as +1."""
    return np.where(decision_scores(m, X) >= 0.0, 1, -1)


# gradient verification -------------------------------------------------------

def _flatten(params: dict) -> np.ndarray:
    return np.concatenate([np.ravel(np.asarray(params[k], dtype=float)) for k in sorted(params)])


def _unflatten(vec: np.ndarray, like: dict) -> dict:
    out, pos = {}, 0
    for k in sorted(like):
        ref = np.asarray(like[k], dtype=float)
        size = ref.size
        chunk = vec[pos:pos + size]
        out[k] = chunk.reshape(ref.shape) if ref.ndim else float(chunk[0])
        pos += size
    return out


def gradient_deviations(loss_grad, params: dict, X, y, l2: float, epsilon: float) -> np.ndarray:
    """Per-parameter |analytic - central difference| / max(|analytic|, |numeric|, 1e-8)."""
    _, g = loss_grad(params, X, y, l2)
    analytic = _flatten(g)
    theta = _flatten(params)
    numeric = np.empty_like(theta)
    for i in range(theta.size):
        up = theta.copy()
        dn = theta.copy()
        up[i] += epsilon
        dn[i] -= epsilon
        f_up, _ = loss_grad(_unflatten(up, params), X, y, l2)
        f_dn, _ = loss_grad(_unflatten(dn, params), X, y, l2)
        numeric[i] = (f_up - f_dn) / (2.0 * epsilon)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return np.abs(analytic - numeric) / scale


def gradient_check(spec: ClassifierSpec, X, y, epsilon: float = 1e-5,
                   params: dict | None = None) -> float:
    """Largest relative gap between analytic and finite-difference loss gradients.

    Without explicit ``params`` the check runs at a seeded random point
    (LR) or at the seeded initialization (BP).
    """
    if spec.kind not in (Kind.LR, Kind.BP):
        raise ArgumentError("gradient_check applies to LR and BP only")
    if not 1e-7 <= epsilon <= 1e-4:
        raise ArgumentError(f"epsilon must lie in [1e-7, 1e-4], got {epsilon}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    hp = spec.hyperparameters
    if spec.kind is Kind.LR:
        if params is None:
            rng = np.random.default_rng(hp["seed"])
            params = {"w": rng.normal(size=X.shape[1]), "b": float(rng.normal())}
        return float(np.max(gradient_deviations(lr_loss_grad, params, X, y, hp["l2"], epsilon)))
    if params is None:
        params = bp_init(X.shape[1], int(hp["hidden"]), hp["seed"])
        params["b2"] = float(np.random.default_rng(hp["seed"] + 1).normal())
    return float(np.max(gradient_deviations(bp_loss_grad, params, X, y, hp["l2"], epsilon)))
