"""Shared numeric kernels: activations, losses, Adam, gradient clipping.

Tensors are plain float64 numpy arrays; parameter sets are ordered
``dict[str, np.ndarray]`` so iteration order, and therefore every
reduction, is fixed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatch

PROB_CLAMP = 1e-12


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def bce_loss(probs, labels):
    """Mean binary cross-entropy and its gradient w.r.t. ``probs``.

    ``probs`` is either a vector of positive-class probabilities or an
    ``(n, 2)`` matrix of class probabilities; in the latter case the loss is
    the categorical cross-entropy of the true column, which for two classes
    that sum to one equals the binary form.
    """
    p = np.asarray(probs, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    n = len(y)
    if p.ndim == 1:
        if p.shape != y.shape:
            raise ShapeMismatch(f"probs {p.shape} vs labels {y.shape}")
        pc = np.clip(p, PROB_CLAMP, 1.0 - PROB_CLAMP)
        loss = -np.mean(y * np.log(pc) + (1.0 - y) * np.log(1.0 - pc))
        grad = (-(y / pc) + (1.0 - y) / (1.0 - pc)) / n
        grad = np.where((p > PROB_CLAMP) & (p < 1.0 - PROB_CLAMP), grad, 0.0)
        return float(loss), grad
    if p.ndim != 2 or p.shape != (n, 2):
        raise ShapeMismatch(f"probs {p.shape} vs labels {y.shape}")
    onehot = np.stack([1.0 - y, y], axis=1)
    pc = np.clip(p, PROB_CLAMP, 1.0)
    loss = -np.sum(onehot * np.log(pc)) / n
    grad = np.where(p > PROB_CLAMP, -onehot / pc, 0.0) / n
    return float(loss), grad


def softmax_cross_entropy(logits: np.ndarray, labels):
    """Fused 2-way softmax + cross-entropy: (loss, probs, dloss/dlogits)."""
    y = np.asarray(labels, dtype=np.int64)
    if logits.ndim != 2 or logits.shape[0] != len(y):
        raise ShapeMismatch(f"logits {logits.shape} vs labels {y.shape}")
    n = len(y)
    z = logits - logits.max(axis=1, keepdims=True)
    logsum = np.log(np.exp(z).sum(axis=1))
    logp = z - logsum[:, None]
    loss = -logp[np.arange(n), y].sum() / n
    probs = np.exp(logp)
    grad = probs.copy()
    grad[np.arange(n), y] -= 1.0
    return float(loss), probs, grad / n


@dataclass
class AdamState:
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)


def adam_step(state: AdamState, params: dict, grads: dict) -> dict:
    """Bias-corrected Adam update, applied in place; returns ``params``."""
    state.step += 1
    t = state.step
    c1 = 1.0 - state.beta1**t
    c2 = 1.0 - state.beta2**t
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeMismatch(f"grad {name} {g.shape} vs param {p.shape}")
        if name not in state.m:
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)
        m, v = state.m[name], state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    return params


def global_norm(grads: dict) -> float:
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))


def clip_by_global_norm(grads: dict, max_norm: float) -> float:
    """Scale all gradients in place so their joint L2 norm is <= max_norm."""
    norm = global_norm(grads)
    if norm > max_norm:
        scale = max_norm / norm
        for g in grads.values():
            g *= scale
    return norm


def param_count(params: dict) -> int:
    return int(sum(p.size for p in params.values()))
