"""RBF-kernel SVM trained by SMO with second-order working-pair selection.

Solves the dual

    min_a  0.5 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,   Q_ij = y_i y_j K(x_i, x_j)

The pair-selection rule and the analytic two-variable update follow the
LIBSVM solver (Fan, Chen & Lin, JMLR 2005).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import NoConvergence, ShapeMismatch, SingleClass
from .core import sigmoid

TAU = 1e-12


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


def resolve_gamma(gamma, n_features: int) -> float:
    if gamma in (None, "auto"):
        return 1.0 / n_features
    return float(gamma)


@dataclass
class SvmModel:
    support_vectors: np.ndarray
    alpha: np.ndarray  # multipliers of the support vectors, in [0, C]
    sv_labels: np.ndarray  # +/-1
    bias: float
    gamma: float
    C: float = 1.0
    platt_a: float = -1.0
    platt_b: float = 0.0
    converged: bool = True
    iterations: int = 0

    @property
    def dual_coef(self) -> np.ndarray:
        return self.alpha * self.sv_labels

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if len(self.support_vectors) == 0:
            return np.full(len(X), self.bias)
        if X.shape[1] != self.support_vectors.shape[1]:
            raise ShapeMismatch(
                f"expected {self.support_vectors.shape[1]} features, got {X.shape[1]}"
            )
        return rbf_kernel(X, self.support_vectors, self.gamma) @ self.dual_coef + self.bias

    def predict_proba(self, X) -> np.ndarray:
        """Platt-calibrated P(y = +1)."""
        return sigmoid(-(self.platt_a * self.decision_function(X) + self.platt_b))


def dual_objective(alpha: np.ndarray, y: np.ndarray, K: np.ndarray) -> float:
    """sum(a) - 0.5 a'Qa; the quantity the SVM dual maximizes."""
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


def smo_solve(K: np.ndarray, y: np.ndarray, C: float = 1.0, tol: float = 1e-3,
              max_iter: int = 100_000):
    """Run SMO on a precomputed kernel matrix.

    Returns ``(alpha, bias, converged, iterations)``. Convergence means the
    maximal KKT violation m(a) - M(a) has dropped below ``tol``.
    """
    n = len(y)
    y = y.astype(np.float64)
    Q = (y[:, None] * y[None, :]) * K
    diagQ = np.diag(Q).copy()
    alpha = np.zeros(n)
    G = -np.ones(n)
    converged = False
    it = 0
    while it < max_iter:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        score = -y * G
        if not up.any() or not low.any():
            converged = True
            break
        s_up = np.where(up, score, -np.inf)
        i = int(np.argmax(s_up))
        m_val = s_up[i]
        M_val = np.min(np.where(low, score, np.inf))
        if m_val - M_val < tol:
            converged = True
            break

        # second-order choice of j among violating partners of i
        b = m_val - score
        cand = low & (b > 0)
        a = diagQ[i] + diagQ - 2.0 * y[i] * y * Q[i]
        a = np.where(a > 0, a, TAU)
        gain = np.where(cand, -(b * b) / a, np.inf)
        j = int(np.argmin(gain))

        ai_old, aj_old = alpha[i], alpha[j]
        if y[i] != y[j]:
            quad = max(diagQ[i] + diagQ[j] + 2.0 * Q[i, j], TAU)
            delta = (-G[i] - G[j]) / quad
            diff = ai_old - aj_old
            ai, aj = ai_old + delta, aj_old + delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            quad = max(diagQ[i] + diagQ[j] - 2.0 * Q[i, j], TAU)
            delta = (G[i] - G[j]) / quad
            total = ai_old + aj_old
            ai, aj = ai_old - delta, aj_old + delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            elif aj < 0:
                aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            elif ai < 0:
                ai, aj = 0.0, total
        alpha[i], alpha[j] = ai, aj
        G += Q[:, i] * (ai - ai_old) + Q[:, j] * (aj - aj_old)
        it += 1

    yG = y * G
    free = (alpha > 0) & (alpha < C)
    if free.any():
        rho = float(yG[free].mean())
    else:
        # bounded-only solution: midpoint of the feasible rho interval
        ub, lb = np.inf, -np.inf
        for t in range(n):
            at_upper = alpha[t] >= C
            at_lower = alpha[t] <= 0
            if (y[t] > 0 and at_upper) or (y[t] < 0 and at_lower):
                lb = max(lb, yG[t])
            elif (y[t] > 0 and at_lower) or (y[t] < 0 and at_upper):
                ub = min(ub, yG[t])
        rho = 0.5 * (ub + lb) if np.isfinite(ub) and np.isfinite(lb) else (
            ub if np.isfinite(ub) else lb)
    return alpha, -rho, converged, it


def fit_platt(f: np.ndarray, y01: np.ndarray, max_iter: int = 100):
    """Platt sigmoid P(y=1|f) = 1 / (1 + exp(A f + B)) by damped Newton.

    Uses Platt's smoothed targets so separable data still gives finite A.
    """
    n_pos = int(y01.sum())
    n_neg = len(y01) - n_pos
    hi = (n_pos + 1.0) / (n_pos + 2.0)
    lo = 1.0 / (n_neg + 2.0)
    t = np.where(y01 == 1, hi, lo)
    A, B = 0.0, float(np.log((n_neg + 1.0) / (n_pos + 1.0)))

    def objective(A, B):
        z = A * f + B
        # sum of t*z + log(1 + exp(-z)) written stably
        return float(np.sum(t * z + np.logaddexp(0.0, -z)))

    fval = objective(A, B)
    for _ in range(max_iter):
        z = A * f + B
        p = sigmoid(-z)  # model probability of the positive class
        d1 = t - p
        w = np.maximum(p * (1.0 - p), 1e-12)
        gA, gB = float(f @ d1), float(d1.sum())
        if abs(gA) < 1e-5 and abs(gB) < 1e-5:
            break
        hAA = float(f @ (w * f)) + 1e-12
        hAB = float(f @ w)
        hBB = float(w.sum()) + 1e-12
        det = hAA * hBB - hAB * hAB
        dA = -(hBB * gA - hAB * gB) / det
        dB = -(-hAB * gA + hAA * gB) / det
        gd = gA * dA + gB * dB
        step = 1.0
        while step >= 1e-10:
            nA, nB = A + step * dA, B + step * dB
            nf = objective(nA, nB)
            if nf < fval + 1e-4 * step * gd:
                A, B, fval = nA, nB, nf
                break
            step /= 2.0
        else:
            break
    return A, B


def svm_train_smo(X, y01, C: float = 1.0, gamma="auto", tol: float = 1e-3,
                  max_iter: int = 100_000) -> SvmModel:
    """Train an RBF SVM on 0/1 labels (mapped internally to -1/+1)."""
    X = np.asarray(X, dtype=np.float64)
    y01 = np.asarray(y01)
    if X.ndim != 2 or X.shape[0] != len(y01):
        raise ShapeMismatch(f"X {X.shape} vs y {y01.shape}")
    if len(X) < 2 or len(np.unique(y01)) < 2:
        raise SingleClass("SVM training needs at least two samples from both classes")
    y = np.where(y01 == 1, 1.0, -1.0)
    g = resolve_gamma(gamma, X.shape[1])
    K = rbf_kernel(X, X, g)
    alpha, bias, converged, iters = smo_solve(K, y, C=C, tol=tol, max_iter=max_iter)
    if not converged:
        warnings.warn(f"SMO stopped after {iters} iterations without meeting tol={tol}",
                      NoConvergence)
    sv = alpha > 0
    dec = K[:, sv] @ (alpha[sv] * y[sv]) + bias
    A, B = fit_platt(dec, (y01 == 1).astype(np.float64))
    return SvmModel(
        support_vectors=X[sv].copy(), alpha=alpha[sv].copy(), sv_labels=y[sv].copy(),
        bias=float(bias), gamma=g, C=C, platt_a=A, platt_b=B,
        converged=converged, iterations=iters,
    )
