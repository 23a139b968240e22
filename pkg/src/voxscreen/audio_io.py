"""WAV decoding, resampling and peak normalization.

Everything downstream assumes a mono float64 buffer at ``CANONICAL_RATE``.
Only uncompressed RIFF/WAVE is handled: PCM 16-bit and IEEE float 32-bit,
one or two channels, little-endian.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyAudio, MalformedHeader, UnsupportedEncoding

CANONICAL_RATE = 16000

_FMT_PCM = 1
_FMT_FLOAT = 3
_FMT_EXTENSIBLE = 0xFFFE


@dataclass(frozen=True)
class AudioBuffer:
    samples: np.ndarray
    sample_rate_hz: int
    source_id: str = ""

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))

    def __len__(self):
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz


def _iter_chunks(data: bytes):
    pos = 12
    while pos + 8 <= len(data):
        cid, size = struct.unpack_from("<4sI", data, pos)
        body = data[pos + 8 : pos + 8 + size]
        yield cid, body
        pos += 8 + size + (size & 1)


def decode_wav(data: bytes, source_id: str = "") -> AudioBuffer:
    """Decode a RIFF/WAVE byte string into a mono buffer.

    Stereo is averaged per sample; 16-bit integers are scaled by 1/32768.
    """
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedHeader("not a RIFF/WAVE container")

    fmt = None
    payload = None
    for cid, body in _iter_chunks(data):
        if cid == b"fmt ":
            if len(body) < 16:
                raise MalformedHeader("fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
            if fmt[0] == _FMT_EXTENSIBLE:
                if len(body) < 26:
                    raise MalformedHeader("extensible fmt chunk truncated")
                # first two bytes of the subformat GUID carry the real tag
                sub = struct.unpack_from("<H", body, 24)[0]
                fmt = (sub,) + fmt[1:]
        elif cid == b"data":
            payload = body
    if fmt is None:
        raise MalformedHeader("missing fmt chunk")
    if payload is None:
        raise MalformedHeader("missing data chunk")

    tag, channels, rate, _, block_align, bits = fmt
    if channels not in (1, 2):
        raise UnsupportedEncoding(f"{channels} channels")
    if rate <= 0:
        raise MalformedHeader("sample rate is zero")
    if tag == _FMT_PCM and bits == 16:
        dtype, scale = np.dtype("<i2"), 1.0 / 32768.0
    elif tag == _FMT_FLOAT and bits == 32:
        dtype, scale = np.dtype("<f4"), 1.0
    else:
        raise UnsupportedEncoding(f"format tag {tag} with {bits} bits per sample")

    frame_bytes = dtype.itemsize * channels
    n_frames = len(payload) // frame_bytes
    if n_frames == 0:
        raise EmptyAudio("data chunk holds zero frames")
    raw = np.frombuffer(payload[: n_frames * frame_bytes], dtype=dtype)
    x = raw.astype(np.float64).reshape(n_frames, channels) * scale
    mono = x.mean(axis=1) if channels == 2 else x[:, 0]
    return AudioBuffer(np.ascontiguousarray(mono), int(rate), source_id)


def read_wav(path) -> AudioBuffer:
    path = Path(path)
    return decode_wav(path.read_bytes(), source_id=str(path))


def encode_wav(samples, sample_rate_hz: int, encoding: str = "pcm16") -> bytes:
    """Serialize samples to WAV bytes.

    ``samples`` is 1-D (mono) or ``(frames, 2)`` (stereo). ``encoding`` is
    ``"pcm16"`` or ``"float32"``.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    channels = x.shape[1]
    if encoding == "pcm16":
        body = np.clip(np.round(x * 32768.0), -32768, 32767).astype("<i2").tobytes()
        tag, bits = _FMT_PCM, 16
    elif encoding == "float32":
        body = x.astype("<f4").tobytes()
        tag, bits = _FMT_FLOAT, 32
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    block = channels * bits // 8
    fmt = struct.pack("<HHIIHH", tag, channels, sample_rate_hz, sample_rate_hz * block, block, bits)
    chunks = b"fmt " + struct.pack("<I", len(fmt)) + fmt
    chunks += b"data" + struct.pack("<I", len(body)) + body
    if len(body) & 1:
        chunks += b"\x00"
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks


def write_wav(path, samples, sample_rate_hz: int, encoding: str = "pcm16") -> None:
    Path(path).write_bytes(encode_wav(samples, sample_rate_hz, encoding))


def resample(buf: AudioBuffer, target_hz: int = CANONICAL_RATE) -> AudioBuffer:
    """Linear-interpolation resampling.

    No anti-aliasing filter is applied, so content above the new Nyquist
    folds back and interpolation images appear near multiples of the old
    rate. Acceptable for the classification features built on top.
    """
    if target_hz <= 0:
        raise ValueError("target rate must be positive")
    if len(buf) == 0:
        raise EmptyAudio("cannot resample an empty buffer")
    if target_hz == buf.sample_rate_hz:
        return buf
    n_out = int(round(len(buf) * target_hz / buf.sample_rate_hz))
    n_out = max(n_out, 1)
    t = np.arange(n_out) * (buf.sample_rate_hz / target_hz)
    src = np.arange(len(buf), dtype=np.float64)
    out = np.interp(t, src, buf.samples)
    return AudioBuffer(out, target_hz, buf.source_id)


def peak_normalize(buf: AudioBuffer) -> AudioBuffer:
    if len(buf) == 0:
        raise EmptyAudio("cannot normalize an empty buffer")
    peak = np.max(np.abs(buf.samples))
    if peak == 0.0:
        return buf
    # x / |x| is exact in IEEE arithmetic, so the peak lands on 1.0 exactly
    return AudioBuffer(buf.samples / peak, buf.sample_rate_hz, buf.source_id)


def load_canonical(path) -> AudioBuffer:
    """decode -> resample to 16 kHz -> peak normalize."""
    return peak_normalize(resample(read_wav(path), CANONICAL_RATE))
