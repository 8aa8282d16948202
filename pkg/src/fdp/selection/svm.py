"""Soft-margin linear SVM trained in the dual by sequential minimal optimization.

Working-set selection follows the second-order rule of Fan, Chen and Lin
(2005); the stopping rule is the maximal KKT violation ``m(a) - M(a) < tol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ArgumentError, ClassError, ConvergenceError, ShapeError

DEFAULT_C = 1.0
KKT_TOL = 1e-6
_TAU = 1e-12
_REFRESH = 2000


@dataclass(frozen=True, eq=False)
class SvmModel:
    weights: np.ndarray
    bias: float
    alphas: np.ndarray
    regularization: float
    iterations: int = 0

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.weights + self.bias

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1, -1)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.alphas > 0)


def dual_objective(alphas, X, y) -> float:
    """sum(a) - 1/2 |sum_k a_k y_k x_k|^2, the quantity the dual maximizes."""
    v = (np.asarray(alphas) * np.asarray(y)) @ np.asarray(X, dtype=float)
    return float(np.sum(alphas) - 0.5 * v @ v)


def train_linear_svm(X, y, C: float = DEFAULT_C, tol: float = KKT_TOL,
                     max_iter: int | None = None) -> SvmModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ShapeError(f"X has shape {X.shape} but y has {y.shape[0]} labels")
    if not C > 0:
        raise ArgumentError(f"C must be positive, got {C}")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ArgumentError("labels must be +1 or -1")
    if np.all(y == 1) or np.all(y == -1):
        raise ClassError("linear SVM needs samples from both classes")
    if not np.all(np.isfinite(X)):
        raise ArgumentError("X must be fully observed and finite")

    n = X.shape[0]
    if max_iter is None:
        max_iter = max(500_000, 1000 * n)
    K = X @ X.T
    Q = K * np.outer(y, y)
    diag = np.diag(K).copy()
    alpha = np.zeros(n)
    grad = -np.ones(n)  # Q @ alpha - 1

    it = 0
    while True:
        if it % _REFRESH == 0 and it:
            # incremental updates drift on long runs; recompute exactly
            grad = Q @ alpha - 1.0
        score = -y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        up_scores = np.where(up, score, -np.inf)
        i = int(np.argmax(up_scores))
        m = up_scores[i]
        M = np.min(np.where(low, score, np.inf))
        if m - M < tol:
            exact = Q @ alpha - 1.0
            if np.array_equal(exact, grad):
                break
            grad = exact
            continue
        if it >= max_iter:
            raise ConvergenceError(f"no convergence after {max_iter} SMO steps (gap {m - M:.3g})")
        it += 1

        b = m - score
        cand = low & (b > 0)
        a = diag[i] + diag - 2.0 * K[i]
        a = np.where(a > 0, a, _TAU)
        gain = np.where(cand, -(b * b) / a, np.inf)
        j = int(np.argmin(gain))

        # step along d_i = y_i, d_j = -y_j keeps sum(y * alpha) fixed
        lam = b[j] / a[j]
        lim_i = C - alpha[i] if y[i] > 0 else alpha[i]
        lim_j = alpha[j] if y[j] > 0 else C - alpha[j]
        if lam >= lim_i or lam >= lim_j:
            lam = min(lim_i, lim_j)
        old_i, old_j = alpha[i], alpha[j]
        alpha[i] = old_i + y[i] * lam
        alpha[j] = old_j - y[j] * lam
        if lam == lim_i:
            alpha[i] = C if y[i] > 0 else 0.0
        if lam == lim_j:
            alpha[j] = 0.0 if y[j] > 0 else C
        alpha[i] = min(max(alpha[i], 0.0), C)
        alpha[j] = min(max(alpha[j], 0.0), C)
        grad += Q[:, i] * (alpha[i] - old_i) + Q[:, j] * (alpha[j] - old_j)

    w = (alpha * y) @ X
    score = y - X @ w
    free = (alpha > 0) & (alpha < C)
    if free.any():
        bias = float(np.mean(score[free]))
    else:
        bias = float((m + M) / 2.0)
    return SvmModel(weights=w, bias=bias, alphas=alpha, regularization=float(C), iterations=it)
