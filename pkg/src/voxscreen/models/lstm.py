"""Single-layer LSTM classifier over fixed-length MFCC sequences.

Gate blocks inside ``W`` (input), ``U`` (recurrent) and ``b`` are stacked
column-wise in the order input, forget, output, candidate. Padded steps
past a sequence's length leave (h, c) untouched, so the classifier reads
the hidden state at each sequence's last real frame.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeMismatch
from .core import sigmoid, softmax, softmax_cross_entropy

GATES = ("i", "f", "o", "g")


@dataclass(frozen=True)
class LstmConfig:
    input_dim: int = 13
    hidden_dim: int = 128
    seq_len: int = 300
    n_classes: int = 2


def init_lstm(cfg: LstmConfig, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    H, D = cfg.hidden_dim, cfg.input_dim
    s = 1.0 / np.sqrt(H)
    b = np.zeros(4 * H)
    b[H : 2 * H] = 1.0  # forget-gate bias
    return {
        "W": rng.uniform(-s, s, (D, 4 * H)),
        "U": rng.uniform(-s, s, (H, 4 * H)),
        "b": b,
        "V": rng.uniform(-s, s, (H, cfg.n_classes)),
        "c": np.zeros(cfg.n_classes),
    }


def lstm_param_count(cfg: LstmConfig) -> int:
    H, D, K = cfg.hidden_dim, cfg.input_dim, cfg.n_classes
    return 4 * H * (D + H + 1) + H * K + K


def pad_sequence(seq: np.ndarray, seq_len: int):
    """Zero-pad or truncate (keeping the first ``seq_len`` frames).

    Returns (padded array, true length).
    """
    seq = np.asarray(seq, dtype=np.float64)
    n = min(len(seq), seq_len)
    out = np.zeros((seq_len, seq.shape[1]))
    out[:n] = seq[:n]
    return out, n


def lstm_forward(X: np.ndarray, lengths, params: dict, cache: bool = False):
    """Class probabilities for a batch ``X`` of shape (B, T, D).

    With ``cache=True`` also returns the per-step activations that
    ``lstm_backward`` needs.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2:
        X = X[None]
    B, T, D = X.shape
    if D != params["W"].shape[0]:
        raise ShapeMismatch(f"input dim {D}, model expects {params['W'].shape[0]}")
    lengths = np.broadcast_to(np.asarray(lengths, dtype=np.int64), (B,))
    H = params["U"].shape[0]
    W, U, b = params["W"], params["U"], params["b"]
    h = np.zeros((B, H))
    c = np.zeros((B, H))
    steps = int(min(T, lengths.max())) if B else 0
    tape = []
    for t in range(steps):
        z = X[:, t] @ W + h @ U + b
        i = sigmoid(z[:, :H])
        f = sigmoid(z[:, H : 2 * H])
        o = sigmoid(z[:, 2 * H : 3 * H])
        g = np.tanh(z[:, 3 * H :])
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        m = (t < lengths)[:, None]
        if cache:
            tape.append((h, c, i, f, o, g, tc, m))
        h = np.where(m, h_new, h)
        c = np.where(m, c_new, c)
    logits = h @ params["V"] + params["c"]
    if cache:
        return logits, (X, steps, tape, h)
    return softmax(logits)


def lstm_backward(dlogits: np.ndarray, params: dict, saved) -> dict:
    """Full backpropagation through time (no truncation)."""
    X, steps, tape, h_last = saved
    H = params["U"].shape[0]
    W, U = params["W"], params["U"]
    grads = {k: np.zeros_like(v) for k, v in params.items()}
    grads["V"] = h_last.T @ dlogits
    grads["c"] = dlogits.sum(axis=0)
    dh = dlogits @ params["V"].T
    dc = np.zeros_like(dh)
    dz = np.empty((dh.shape[0], 4 * H))
    for t in range(steps - 1, -1, -1):
        h_prev, c_prev, i, f, o, g, tc, m = tape[t]
        dh_new = np.where(m, dh, 0.0)
        dc_new = np.where(m, dc, 0.0) + dh_new * o * (1.0 - tc * tc)
        dz[:, :H] = dc_new * g * i * (1.0 - i)
        dz[:, H : 2 * H] = dc_new * c_prev * f * (1.0 - f)
        dz[:, 2 * H : 3 * H] = dh_new * tc * o * (1.0 - o)
        dz[:, 3 * H :] = dc_new * i * (1.0 - g * g)
        grads["W"] += X[:, t].T @ dz
        grads["U"] += h_prev.T @ dz
        grads["b"] += dz.sum(axis=0)
        dh = np.where(m, 0.0, dh) + dz @ U.T
        dc = np.where(m, 0.0, dc) + dc_new * f
    return grads


def lstm_loss_and_grads(X, lengths, labels, params: dict):
    logits, saved = lstm_forward(X, lengths, params, cache=True)
    loss, probs, dlogits = softmax_cross_entropy(logits, labels)
    return loss, probs, lstm_backward(dlogits, params, saved)
