"""Compact two-block CNN on single-channel log-mel patches.

conv3x3(8) -> ReLU -> maxpool2 -> conv3x3(16) -> ReLU -> maxpool2 -> dense(2)

Convolutions are valid-padded, stride 1, computed as cross-correlation via
``sliding_window_view`` + matrix products. Pooling uses ceil mode so odd
sizes keep their last row/column.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ShapeMismatch
from .core import softmax, softmax_cross_entropy


@dataclass(frozen=True)
class CnnConfig:
    height: int = 64  # frames
    width: int = 64  # mel bins
    conv1: int = 8
    conv2: int = 16
    kernel: int = 3
    n_classes: int = 2

    @property
    def flat_dim(self) -> int:
        h, w = self.height, self.width
        for _ in range(2):
            h, w = -(-(h - self.kernel + 1) // 2), -(-(w - self.kernel + 1) // 2)
        return self.conv2 * h * w


def init_cnn(cfg: CnnConfig, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    k = cfg.kernel
    fan1 = k * k
    fan2 = cfg.conv1 * k * k
    return {
        "conv1_w": rng.normal(0.0, np.sqrt(2.0 / fan1), (cfg.conv1, 1, k, k)),
        "conv1_b": np.zeros(cfg.conv1),
        "conv2_w": rng.normal(0.0, np.sqrt(2.0 / fan2), (cfg.conv2, cfg.conv1, k, k)),
        "conv2_b": np.zeros(cfg.conv2),
        "dense_w": rng.normal(0.0, np.sqrt(1.0 / cfg.flat_dim), (cfg.flat_dim, cfg.n_classes)),
        "dense_b": np.zeros(cfg.n_classes),
    }


def conv2d(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Valid cross-correlation. x: (B, C, H, W), w: (F, C, k, k) -> (B, F, H-k+1, W-k+1)."""
    F, C, k, _ = w.shape
    if x.shape[1] != C:
        raise ShapeMismatch(f"conv expects {C} channels, got {x.shape[1]}")
    win = sliding_window_view(x, (k, k), axis=(2, 3))  # B, C, Ho, Wo, k, k
    B, _, Ho, Wo = win.shape[:4]
    cols = win.transpose(0, 2, 3, 1, 4, 5).reshape(B * Ho * Wo, C * k * k)
    out = cols @ w.reshape(F, -1).T + b
    return out.reshape(B, Ho, Wo, F).transpose(0, 3, 1, 2)


def conv2d_backward(dout: np.ndarray, x: np.ndarray, w: np.ndarray, need_dx: bool = True):
    F, C, k, _ = w.shape
    B, _, Ho, Wo = dout.shape
    win = sliding_window_view(x, (k, k), axis=(2, 3))
    cols = win.transpose(0, 2, 3, 1, 4, 5).reshape(B * Ho * Wo, C * k * k)
    d2 = dout.transpose(0, 2, 3, 1).reshape(B * Ho * Wo, F)
    dw = (d2.T @ cols).reshape(w.shape)
    db = d2.sum(axis=0)
    if not need_dx:
        return None, dw, db
    # dx is the full correlation of dout with the spatially flipped kernel
    padded = np.pad(dout, ((0, 0), (0, 0), (k - 1, k - 1), (k - 1, k - 1)))
    pw = sliding_window_view(padded, (k, k), axis=(2, 3))  # B, F, H, W, k, k
    H, Wd = pw.shape[2], pw.shape[3]
    pcols = pw.transpose(0, 2, 3, 1, 4, 5).reshape(B * H * Wd, F * k * k)
    wflip = w[:, :, ::-1, ::-1].transpose(0, 2, 3, 1).reshape(F * k * k, C)
    dx = (pcols @ wflip).reshape(B, H, Wd, C).transpose(0, 3, 1, 2)
    return dx, dw, db


def maxpool2(x: np.ndarray):
    """2x2 max-pool, stride 2, ceil mode: an odd trailing row/column pools alone."""
    B, C, H, W = x.shape
    H2, W2 = -(-H // 2), -(-W // 2)
    if (H % 2) or (W % 2):
        x = np.pad(x, ((0, 0), (0, 0), (0, H % 2), (0, W % 2)), constant_values=-np.inf)
    blocks = (
        x.reshape(B, C, H2, 2, W2, 2)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(B, C, H2, W2, 4)
    )
    arg = blocks.argmax(axis=-1)
    out = np.take_along_axis(blocks, arg[..., None], axis=-1)[..., 0]
    return out, (arg, (B, C, H, W))


def maxpool2_backward(dout: np.ndarray, saved) -> np.ndarray:
    arg, shape = saved
    B, C, H, W = shape
    H2, W2 = arg.shape[2], arg.shape[3]
    dblocks = np.zeros((B, C, H2, W2, 4))
    np.put_along_axis(dblocks, arg[..., None], dout[..., None], axis=-1)
    full = dblocks.reshape(B, C, H2, W2, 2, 2).transpose(0, 1, 2, 4, 3, 5)
    return full.reshape(B, C, 2 * H2, 2 * W2)[:, :, :H, :W]


def cnn_logits(x: np.ndarray, params: dict, cache: bool = False):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        x = x[None, None]
    elif x.ndim == 3:
        x = x[:, None]
    a1 = conv2d(x, params["conv1_w"], params["conv1_b"])
    r1 = np.maximum(a1, 0.0)
    p1, s1 = maxpool2(r1)
    a2 = conv2d(p1, params["conv2_w"], params["conv2_b"])
    r2 = np.maximum(a2, 0.0)
    p2, s2 = maxpool2(r2)
    flat = p2.reshape(len(x), -1)
    if flat.shape[1] != params["dense_w"].shape[0]:
        raise ShapeMismatch(
            f"flattened size {flat.shape[1]} does not match dense layer {params['dense_w'].shape[0]}"
        )
    logits = flat @ params["dense_w"] + params["dense_b"]
    if cache:
        return logits, (x, a1, s1, p1, a2, s2, p2.shape, flat)
    return logits


def cnn_forward(x: np.ndarray, params: dict) -> np.ndarray:
    """Class probabilities for a (B, H, W) or (B, 1, H, W) batch."""
    return softmax(cnn_logits(x, params))


def cnn_backward(dlogits: np.ndarray, params: dict, saved) -> dict:
    x, a1, s1, p1, a2, s2, p2_shape, flat = saved
    g = {}
    g["dense_w"] = flat.T @ dlogits
    g["dense_b"] = dlogits.sum(axis=0)
    dp2 = (dlogits @ params["dense_w"].T).reshape(p2_shape)
    da2 = maxpool2_backward(dp2, s2) * (a2 > 0)
    dp1, g["conv2_w"], g["conv2_b"] = conv2d_backward(da2, p1, params["conv2_w"])
    da1 = maxpool2_backward(dp1, s1) * (a1 > 0)
    _, g["conv1_w"], g["conv1_b"] = conv2d_backward(da1, x, params["conv1_w"], need_dx=False)
    return {k: g[k] for k in params}


def cnn_loss_and_grads(x, labels, params: dict):
    logits, saved = cnn_logits(x, params, cache=True)
    loss, probs, dlogits = softmax_cross_entropy(logits, labels)
    return loss, probs, cnn_backward(dlogits, params, saved)


def make_patch(log_mel: np.ndarray, height: int = 64, width: int = 64) -> np.ndarray:
    """Center-crop or zero-pad a (frames, mels) matrix to (height, width)."""
    out = np.zeros((height, width))
    src = np.asarray(log_mel, dtype=np.float64)
    ranges = []
    for n, target in zip(src.shape, (height, width)):
        if n >= target:
            start = (n - target) // 2
            ranges.append((slice(start, start + target), slice(0, target)))
        else:
            start = (target - n) // 2
            ranges.append((slice(0, n), slice(start, start + n)))
    (sr, dr), (sc, dc) = ranges
    out[dr, dc] = src[sr, sc]
    return out
