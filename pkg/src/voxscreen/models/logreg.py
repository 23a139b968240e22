"""Full-batch logistic regression on encoded metadata."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeMismatch, SingleClass
from .core import bce_loss, sigmoid


@dataclass
class LogRegModel:
    weights: np.ndarray
    bias: float = 0.0
    l2: float = 0.0

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != len(self.weights):
            raise ShapeMismatch(f"expected {len(self.weights)} features, got {X.shape[1]}")
        return X @ self.weights + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision_function(X))


def logreg_loss_grad(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float = 0.0):
    """Mean BCE (+ 0.5 * l2 * |w|^2) and its gradient w.r.t. (w, b)."""
    z = X @ w + b
    p = sigmoid(z)
    loss, _ = bce_loss(p, y)
    # dL/dz simplifies to (p - y)/n; skips the clamp that bce_loss applies
    dz = (p - y) / len(y)
    gw = X.T @ dz + l2 * w
    gb = float(dz.sum())
    return loss + 0.5 * l2 * float(w @ w), gw, gb


def logreg_train(X, y, epochs: int = 2000, lr: float = 0.1, l2: float = 0.0,
                 history: list | None = None) -> LogRegModel:
    """Gradient descent from zero init; fully deterministic.

    If ``history`` is a list, (epoch, loss, accuracy) tuples are appended.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise ShapeMismatch(f"X {X.shape} vs y {y.shape}")
    if len(np.unique(y)) < 2:
        raise SingleClass("logistic regression needs both classes in training data")
    w = np.zeros(X.shape[1])
    b = 0.0
    for epoch in range(epochs):
        loss, gw, gb = logreg_loss_grad(w, b, X, y, l2)
        if history is not None:
            acc = float(np.mean(((X @ w + b) >= 0) == (y == 1)))
            history.append((epoch, loss, acc))
        w -= lr * gw
        b -= lr * gb
    return LogRegModel(w, b, l2)
