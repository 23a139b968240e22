"""Mini-batch Adam training for the LSTM and CNN, plus input standardization."""
from __future__ import annotations

import logging

import numpy as np

from ..errors import NanLoss, ShapeMismatch, SingleClass
from .cnn import CnnConfig, cnn_forward, cnn_loss_and_grads, init_cnn, make_patch
from .core import AdamState, adam_step, clip_by_global_norm
from .lstm import LstmConfig, init_lstm, lstm_forward, lstm_loss_and_grads, pad_sequence

log = logging.getLogger(__name__)

CLIP_NORM = 5.0


def _check_labels(y):
    y = np.asarray(y, dtype=np.int64)
    if len(np.unique(y)) < 2:
        raise SingleClass("training data contains a single class")
    return y


def _run_epochs(n: int, params: dict, loss_grad, epochs: int, batch_size: int,
                adam: AdamState, seed: int, clip: float, history):
    """Shared loop. ``loss_grad(idx)`` returns (loss, probs, grads) for a batch."""
    rng = np.random.default_rng(seed)
    for epoch in range(epochs):
        order = rng.permutation(n)
        total, correct = 0.0, 0
        for bi, start in enumerate(range(0, n, batch_size)):
            idx = np.sort(order[start : start + batch_size])
            loss, probs, grads, y = loss_grad(idx)
            if not np.isfinite(loss):
                raise NanLoss(f"non-finite loss at epoch {epoch}, batch {bi}",
                              batch_id=(epoch, bi))
            clip_by_global_norm(grads, clip)
            adam_step(adam, params, grads)
            total += loss * len(idx)
            correct += int(np.sum(probs.argmax(axis=1) == y))
        if history is not None:
            history.append((epoch, total / n, correct / n))
        log.debug("epoch %d loss %.5f acc %.4f", epoch, total / n, correct / n)
    return params


# ---------------------------------------------------------------- LSTM


def sequence_stats(seqs) -> tuple:
    """Per-coefficient mean/std over every frame of the training sequences."""
    allf = np.concatenate([np.asarray(s, dtype=np.float64) for s in seqs], axis=0)
    mean = allf.mean(axis=0)
    std = allf.std(axis=0)
    return mean, np.where(std > 0, std, 1.0)


def prepare_sequences(seqs, seq_len: int, mean=None, std=None):
    """Standardize, then pad/truncate to (N, seq_len, D) with true lengths."""
    xs, lens = [], []
    for s in seqs:
        s = np.asarray(s, dtype=np.float64)
        if mean is not None:
            s = (s - mean) / std
        p, n = pad_sequence(s, seq_len)
        xs.append(p)
        lens.append(n)
    return np.stack(xs), np.array(lens, dtype=np.int64)


def lstm_train_bptt(X, lengths, y, params: dict, epochs: int = 50, batch_size: int = 32,
                    adam: AdamState | None = None, seed: int = 0, clip: float = CLIP_NORM,
                    history: list | None = None) -> dict:
    """Train ``params`` in place with full BPTT; returns them."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 3:
        raise ShapeMismatch(f"expected (N, T, D) sequences, got {X.shape}")
    y = _check_labels(y)
    lengths = np.asarray(lengths, dtype=np.int64)
    adam = adam or AdamState()

    def loss_grad(idx):
        loss, probs, grads = lstm_loss_and_grads(X[idx], lengths[idx], y[idx], params)
        return loss, probs, grads, y[idx]

    return _run_epochs(len(X), params, loss_grad, epochs, batch_size, adam, seed, clip, history)


def fit_lstm(seqs, y, cfg: LstmConfig, epochs: int = 50, batch_size: int = 32,
             lr: float = 1e-4, seed: int = 0, history: list | None = None):
    """Standardize + init + train. Returns (params, mean, std)."""
    mean, std = sequence_stats(seqs)
    X, lens = prepare_sequences(seqs, cfg.seq_len, mean, std)
    params = init_lstm(cfg, seed)
    lstm_train_bptt(X, lens, y, params, epochs, batch_size, AdamState(lr=lr), seed,
                    history=history)
    return params, mean, std


def lstm_predict_proba(seqs, params, seq_len, mean, std, batch_size: int = 64) -> np.ndarray:
    X, lens = prepare_sequences(seqs, seq_len, mean, std)
    out = [lstm_forward(X[i : i + batch_size], lens[i : i + batch_size], params)
           for i in range(0, len(X), batch_size)]
    return np.concatenate(out)[:, 1]


# ---------------------------------------------------------------- CNN


def prepare_patches(mats, cfg: CnnConfig, mean: float | None = None, std: float | None = None):
    patches = np.stack([make_patch(m, cfg.height, cfg.width) for m in mats])
    if mean is None:
        mean = float(patches.mean())
        std = float(patches.std()) or 1.0
    return (patches - mean) / std, mean, std


def cnn_train(P, y, params: dict, epochs: int = 50, batch_size: int = 32,
              adam: AdamState | None = None, seed: int = 0, clip: float = CLIP_NORM,
              history: list | None = None) -> dict:
    P = np.asarray(P, dtype=np.float64)
    y = _check_labels(y)
    adam = adam or AdamState()

    def loss_grad(idx):
        loss, probs, grads = cnn_loss_and_grads(P[idx], y[idx], params)
        return loss, probs, grads, y[idx]

    return _run_epochs(len(P), params, loss_grad, epochs, batch_size, adam, seed, clip, history)


def fit_cnn(mats, y, cfg: CnnConfig, epochs: int = 50, batch_size: int = 32,
            lr: float = 1e-4, seed: int = 0, history: list | None = None):
    """Patch + standardize (train statistics) + init + train. Returns (params, mean, std)."""
    P, mean, std = prepare_patches(mats, cfg)
    params = init_cnn(cfg, seed)
    cnn_train(P, y, params, epochs, batch_size, AdamState(lr=lr), seed, history=history)
    return params, mean, std


def cnn_predict_proba(mats, params, cfg: CnnConfig, mean, std, batch_size: int = 64):
    P, _, _ = prepare_patches(mats, cfg, mean, std)
    out = [cnn_forward(P[i : i + batch_size], params) for i in range(0, len(P), batch_size)]
    return np.concatenate(out)[:, 1]
