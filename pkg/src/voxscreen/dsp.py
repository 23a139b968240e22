"""Feature extraction: framing, STFT power spectrum, mel filterbank,
log-mel spectrograms, MFCCs and per-recording summary statistics.

All extraction hyperparameters live in ``DspConfig``; every FeatureMatrix
carries the SHA-256 of the config that produced it so feature files from
different configurations are never silently mixed.
"""
from __future__ import annotations

import csv
import enum
import hashlib
import json
import struct
import warnings
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.fft import dct

from .audio_io import CANONICAL_RATE, AudioBuffer
from .errors import DataError, DegenerateSignal, InvalidRange, TooShort


@dataclass(frozen=True)
class DspConfig:
    frame_len: int = 400
    hop_len: int = 160
    fft_size: int = 512
    n_mels: int = 40
    n_mfcc: int = 13
    fmin_hz: float = 0.0
    fmax_hz: float = 8000.0
    preemphasis: float = 0.97
    log_floor: float = 1e-10

    def validate(self, sample_rate_hz: int = CANONICAL_RATE) -> "DspConfig":
        if not (0 < self.hop_len <= self.frame_len <= self.fft_size):
            raise ValueError("need 0 < hop_len <= frame_len <= fft_size")
        if self.fft_size & (self.fft_size - 1):
            raise ValueError("fft_size must be a power of two")
        if not (0 <= self.fmin_hz < self.fmax_hz <= sample_rate_hz / 2):
            raise InvalidRange(
                f"mel range [{self.fmin_hz}, {self.fmax_hz}] invalid at {sample_rate_hz} Hz"
            )
        if not (1 <= self.n_mfcc <= self.n_mels):
            raise ValueError("need 1 <= n_mfcc <= n_mels")
        if not (0.0 <= self.preemphasis < 1.0):
            raise ValueError("preemphasis must lie in [0, 1)")
        if self.log_floor <= 0:
            raise ValueError("log_floor must be positive")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "DspConfig":
        return cls(**d)

    def digest(self) -> bytes:
        """32-byte SHA-256 over the canonical JSON form."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).digest()


class FeatureKind(enum.IntEnum):
    mfcc = 0
    log_mel = 1


@dataclass(frozen=True)
class FeatureMatrix:
    data: np.ndarray  # frames x dims
    kind: FeatureKind
    config_hash: bytes

    @property
    def shape(self):
        return self.data.shape


@dataclass(frozen=True)
class StatDescriptor:
    mean: float
    std: float
    max: float
    min: float
    median: float
    kurtosis: float
    q1: float
    q3: float
    iqr: float
    skewness: float
    mode: float

    def as_array(self) -> np.ndarray:
        return np.array(list(asdict(self).values()))


# ---------------------------------------------------------------- mel scale


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


# ---------------------------------------------------------------- framing


def hann_window(n: int) -> np.ndarray:
    """Periodic Hann window: w[k] = 0.5 (1 - cos(2 pi k / n))."""
    k = np.arange(n)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * k / n))


def preemphasize(x: np.ndarray, alpha: float) -> np.ndarray:
    y = np.empty_like(x)
    y[0] = x[0]
    y[1:] = x[1:] - alpha * x[:-1]
    return y


def num_frames(n_samples: int, cfg: DspConfig) -> int:
    if n_samples < cfg.frame_len:
        return 0
    return (n_samples - cfg.frame_len) // cfg.hop_len + 1


def frame_and_window(buf: AudioBuffer, cfg: DspConfig) -> np.ndarray:
    """Pre-emphasis, framing at hop stride (partial tail dropped), Hann taper.

    Returns an array of shape ``(n_frames, frame_len)``.
    """
    x = np.asarray(buf.samples, dtype=np.float64)
    if len(x) < cfg.frame_len:
        raise TooShort(f"{len(x)} samples is shorter than one frame ({cfg.frame_len})")
    y = preemphasize(x, cfg.preemphasis)
    n = num_frames(len(y), cfg)
    idx = np.arange(cfg.frame_len)[None, :] + cfg.hop_len * np.arange(n)[:, None]
    return y[idx] * hann_window(cfg.frame_len)


def power_spectrum(frames: np.ndarray, cfg: DspConfig) -> np.ndarray:
    """|DFT_k|^2 for k = 0..fft_size/2 of each zero-padded frame.

    Accepts a single frame or a stack of frames along axis 0.
    """
    spec = np.fft.rfft(frames, n=cfg.fft_size, axis=-1)
    return spec.real**2 + spec.imag**2


# ---------------------------------------------------------------- filterbank


def mel_filter_centers(cfg: DspConfig) -> np.ndarray:
    """The n_mels + 2 mel-spaced edge/center points, in mel units."""
    return np.linspace(hz_to_mel(cfg.fmin_hz), hz_to_mel(cfg.fmax_hz), cfg.n_mels + 2)


def triangle_weights(mel: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Height of each triangular filter at the given mel coordinates.

    ``points`` are the n_mels + 2 grid points; filter m peaks at
    ``points[m + 1]``. Returns shape ``(n_mels, len(mel))``.
    """
    mel = np.atleast_1d(np.asarray(mel, dtype=np.float64))
    lo, mid, hi = points[:-2, None], points[1:-1, None], points[2:, None]
    rise = (mel[None, :] - lo) / (mid - lo)
    fall = (hi - mel[None, :]) / (hi - mid)
    return np.maximum(0.0, np.minimum(rise, fall))


@lru_cache(maxsize=32)
def _filterbank_cached(cfg: DspConfig, sample_rate_hz: int) -> np.ndarray:
    cfg.validate(sample_rate_hz)
    points = mel_filter_centers(cfg)
    if np.any(np.diff(points) <= 0):
        raise InvalidRange("mel grid collapsed")
    bin_hz = np.arange(cfg.fft_size // 2 + 1) * sample_rate_hz / cfg.fft_size
    fb = triangle_weights(hz_to_mel(bin_hz), points)
    empty = np.flatnonzero(fb.sum(axis=1) <= 0)
    if empty.size:
        raise InvalidRange(
            f"{empty.size} mel filters cover no FFT bin; widen [fmin, fmax] or lower n_mels"
        )
    fb.setflags(write=False)
    return fb


def mel_filterbank(cfg: DspConfig, sample_rate_hz: int = CANONICAL_RATE) -> np.ndarray:
    """n_mels x (fft_size/2 + 1) triangular weights, peak height 1."""
    return _filterbank_cached(cfg, int(sample_rate_hz))


# ---------------------------------------------------------------- features


def _log_mel_array(buf: AudioBuffer, cfg: DspConfig) -> np.ndarray:
    fb = mel_filterbank(cfg, buf.sample_rate_hz)
    pspec = power_spectrum(frame_and_window(buf, cfg), cfg)
    return np.log(pspec @ fb.T + cfg.log_floor)


def log_mel_spectrogram(buf: AudioBuffer, cfg: DspConfig = DspConfig()) -> FeatureMatrix:
    return FeatureMatrix(_log_mel_array(buf, cfg), FeatureKind.log_mel, cfg.digest())


def dct_ortho(x: np.ndarray) -> np.ndarray:
    """Orthonormal DCT-II along the last axis."""
    return dct(x, type=2, axis=-1, norm="ortho")


def mfcc(buf: AudioBuffer, cfg: DspConfig = DspConfig()) -> FeatureMatrix:
    coeffs = dct_ortho(_log_mel_array(buf, cfg))[:, : cfg.n_mfcc]
    return FeatureMatrix(np.ascontiguousarray(coeffs), FeatureKind.mfcc, cfg.digest())


def extract(buf: AudioBuffer, kind, cfg: DspConfig = DspConfig()) -> FeatureMatrix:
    kind = FeatureKind[kind] if isinstance(kind, str) else FeatureKind(kind)
    return mfcc(buf, cfg) if kind is FeatureKind.mfcc else log_mel_spectrogram(buf, cfg)


def stat_features(buf: AudioBuffer, n_bins: int = 256) -> StatDescriptor:
    """Eleven summary statistics of the raw waveform.

    Moments use population (1/n) normalization; kurtosis is excess
    kurtosis. Quartiles interpolate linearly between order statistics.
    ``mode`` is the center of the fullest of ``n_bins`` equal-width bins.
    A constant signal yields skewness = kurtosis = 0 with a warning.
    """
    x = np.asarray(buf.samples, dtype=np.float64)
    if len(x) < 2:
        raise TooShort("stat_features needs at least two samples")
    mean = x.mean()
    d = x - mean
    m2 = np.mean(d**2)
    lo, hi = x.min(), x.max()
    q1, median, q3 = np.percentile(x, [25, 50, 75])
    if lo == hi:
        warnings.warn("constant signal: skewness and kurtosis undefined", DegenerateSignal)
        skew = kurt = 0.0
        mode = lo
    else:
        skew = np.mean(d**3) / m2**1.5
        kurt = np.mean(d**4) / m2**2 - 3.0
        counts, edges = np.histogram(x, bins=n_bins, range=(lo, hi))
        k = int(np.argmax(counts))
        mode = 0.5 * (edges[k] + edges[k + 1])
    return StatDescriptor(
        mean=float(mean), std=float(np.sqrt(m2)), max=float(hi), min=float(lo),
        median=float(median), kurtosis=float(kurt), q1=float(q1), q3=float(q3),
        iqr=float(q3 - q1), skewness=float(skew), mode=float(mode),
    )


# ---------------------------------------------------------------- file format

MAGIC = b"VXF1"
_HEADER = struct.Struct("<4sIII32s")


def feature_to_bytes(fm: FeatureMatrix) -> bytes:
    data = np.ascontiguousarray(fm.data, dtype="<f8")
    rows, cols = data.shape
    return _HEADER.pack(MAGIC, int(fm.kind), rows, cols, fm.config_hash) + data.tobytes()


def feature_from_bytes(blob: bytes) -> FeatureMatrix:
    if len(blob) < _HEADER.size:
        raise DataError("feature file truncated")
    magic, kind, rows, cols, digest = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise DataError(f"bad feature magic {magic!r}")
    expected = _HEADER.size + 8 * rows * cols
    if len(blob) != expected:
        raise DataError(f"feature file is {len(blob)} bytes, header implies {expected}")
    data = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size).reshape(rows, cols)
    return FeatureMatrix(data.astype(np.float64), FeatureKind(kind), digest)


def save_feature(path, fm: FeatureMatrix) -> None:
    Path(path).write_bytes(feature_to_bytes(fm))


def load_feature(path) -> FeatureMatrix:
    return feature_from_bytes(Path(path).read_bytes())


def feature_to_csv(path, fm: FeatureMatrix) -> None:
    prefix = "c" if fm.kind is FeatureKind.mfcc else "mel"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frame"] + [f"{prefix}{j}" for j in range(fm.data.shape[1])])
        for i, row in enumerate(fm.data):
            w.writerow([i] + [repr(float(v)) for v in row])
