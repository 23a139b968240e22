"""Self-describing model files and the uniform ``predict`` surface.

File layout::

    b"VXM1" | u32 header_len | header JSON (UTF-8, sorted keys) | float64 LE blob

The header carries the model kind, its config, schema version, DSP config
hash, seed and a tensor manifest of (name, shape, offset) where offset is
in bytes from the start of the blob.
"""
from __future__ import annotations

import json
import struct
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..dsp import DspConfig, FeatureKind, FeatureMatrix
from ..errors import DataError, FeatureKindMismatch
from ..metadata import SCHEMA_VERSION, EncodedRecord
from .cnn import CnnConfig
from .logreg import LogRegModel
from .lstm import LstmConfig
from .svm import SvmModel
from .training import cnn_predict_proba, lstm_predict_proba

MAGIC = b"VXM1"

INPUT_KIND = {"logreg": "encoded", "svm": "encoded", "lstm": "mfcc", "cnn": "log_mel"}


@dataclass
class ModelArtifact:
    kind: str
    config: dict
    tensors: dict = field(default_factory=dict)
    seed: int = 0
    schema_version: int = SCHEMA_VERSION
    dsp_hash: str = ""

    @property
    def input_kind(self) -> str:
        return INPUT_KIND[self.kind]

    def header(self) -> dict:
        manifest, offset = [], 0
        for name, arr in self.tensors.items():
            manifest.append({"name": name, "shape": list(arr.shape), "offset": offset})
            offset += 8 * arr.size
        return {
            "kind": self.kind,
            "input_kind": self.input_kind,
            "config": self.config,
            "seed": self.seed,
            "schema_version": self.schema_version,
            "dsp_hash": self.dsp_hash,
            "tensors": manifest,
        }

    def to_bytes(self) -> bytes:
        head = json.dumps(self.header(), sort_keys=True, separators=(",", ":")).encode()
        blob = b"".join(
            np.ascontiguousarray(a, dtype="<f8").tobytes() for a in self.tensors.values()
        )
        return MAGIC + struct.pack("<I", len(head)) + head + blob

    @classmethod
    def from_bytes(cls, data: bytes) -> "ModelArtifact":
        if data[:4] != MAGIC:
            raise DataError("not a model artifact (bad magic)")
        (hlen,) = struct.unpack_from("<I", data, 4)
        head = json.loads(data[8 : 8 + hlen].decode())
        blob = data[8 + hlen :]
        tensors = {}
        for t in head["tensors"]:
            n = int(np.prod(t["shape"])) if t["shape"] else 1
            arr = np.frombuffer(blob, dtype="<f8", count=n, offset=t["offset"])
            tensors[t["name"]] = arr.astype(np.float64).reshape(t["shape"])
        if head["kind"] not in INPUT_KIND:
            raise DataError(f"unknown model kind {head['kind']!r}")
        return cls(
            kind=head["kind"], config=head["config"], tensors=tensors, seed=head["seed"],
            schema_version=head["schema_version"], dsp_hash=head["dsp_hash"],
        )

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> "ModelArtifact":
        return cls.from_bytes(Path(path).read_bytes())

    @property
    def dsp_config(self) -> DspConfig | None:
        d = self.config.get("dsp")
        return DspConfig.from_dict(d) if d else None


# ---------------------------------------------------------------- packing


def pack_logreg(model: LogRegModel, config: dict, seed: int = 0) -> ModelArtifact:
    return ModelArtifact("logreg", dict(config, l2=model.l2), {
        "weights": model.weights, "bias": np.array([model.bias]),
    }, seed=seed)


def unpack_logreg(art: ModelArtifact) -> LogRegModel:
    return LogRegModel(art.tensors["weights"], float(art.tensors["bias"][0]),
                       art.config.get("l2", 0.0))


def pack_svm(model: SvmModel, config: dict, seed: int = 0) -> ModelArtifact:
    cfg = dict(config, gamma=model.gamma, C=model.C, converged=model.converged,
               iterations=model.iterations)
    return ModelArtifact("svm", cfg, {
        "support_vectors": model.support_vectors,
        "alpha": model.alpha,
        "sv_labels": model.sv_labels,
        "bias": np.array([model.bias]),
        "platt": np.array([model.platt_a, model.platt_b]),
    }, seed=seed)


def unpack_svm(art: ModelArtifact) -> SvmModel:
    t = art.tensors
    return SvmModel(
        support_vectors=t["support_vectors"], alpha=t["alpha"], sv_labels=t["sv_labels"],
        bias=float(t["bias"][0]), gamma=art.config["gamma"], C=art.config["C"],
        platt_a=float(t["platt"][0]), platt_b=float(t["platt"][1]),
        converged=art.config.get("converged", True), iterations=art.config.get("iterations", 0),
    )


def pack_lstm(params: dict, mean, std, cfg: LstmConfig, config: dict, dsp: DspConfig,
              seed: int = 0) -> ModelArtifact:
    tensors = dict(params)
    tensors["input_mean"] = np.asarray(mean, dtype=np.float64)
    tensors["input_std"] = np.asarray(std, dtype=np.float64)
    cfg_d = dict(config, lstm=asdict(cfg), dsp=dsp.to_dict())
    return ModelArtifact("lstm", cfg_d, tensors, seed=seed, dsp_hash=dsp.digest().hex())


def pack_cnn(params: dict, mean: float, std: float, cfg: CnnConfig, config: dict,
             dsp: DspConfig, seed: int = 0) -> ModelArtifact:
    tensors = dict(params)
    tensors["input_stats"] = np.array([mean, std])
    cfg_d = dict(config, cnn=asdict(cfg), dsp=dsp.to_dict())
    return ModelArtifact("cnn", cfg_d, tensors, seed=seed, dsp_hash=dsp.digest().hex())


_LSTM_KEYS = ("W", "U", "b", "V", "c")
_CNN_KEYS = ("conv1_w", "conv1_b", "conv2_w", "conv2_b", "dense_w", "dense_b")


# ---------------------------------------------------------------- inference


def _feature_kind(x) -> str | None:
    if isinstance(x, FeatureMatrix):
        return FeatureKind(x.kind).name
    if isinstance(x, EncodedRecord):
        return "encoded"
    return None


def _as_batch(art: ModelArtifact, features, kind: str | None):
    """Normalize input to a list (sequence models) or 2-D array (metadata)."""
    single = isinstance(features, (FeatureMatrix, EncodedRecord)) or (
        isinstance(features, np.ndarray) and art.input_kind == "encoded" and features.ndim == 1
    ) or (isinstance(features, np.ndarray) and art.input_kind != "encoded" and features.ndim == 2)
    items = [features] if single else list(features)
    kinds = {_feature_kind(x) for x in items} - {None}
    if kind is not None:
        kinds.add(kind)
    if kinds and kinds != {art.input_kind}:
        raise FeatureKindMismatch(
            f"{art.kind} model consumes {art.input_kind!r} features, got {sorted(kinds)}"
        )
    for x in items:
        if isinstance(x, FeatureMatrix) and art.dsp_hash and x.config_hash.hex() != art.dsp_hash:
            raise FeatureKindMismatch("feature matrix was produced with a different DspConfig")
    raw = [x.data if isinstance(x, FeatureMatrix) else
           x.features if isinstance(x, EncodedRecord) else np.asarray(x, dtype=np.float64)
           for x in items]
    if art.input_kind == "encoded":
        raw = np.atleast_2d(np.stack(raw))
    return raw, single


def decision_scores(art: ModelArtifact, features, kind: str | None = None) -> np.ndarray:
    """Ranking scores for ROC: SVM decision values, otherwise P(positive)."""
    raw, _ = _as_batch(art, features, kind)
    if art.kind == "svm":
        return unpack_svm(art).decision_function(raw)
    return _proba(art, raw)


def _proba(art: ModelArtifact, raw) -> np.ndarray:
    t = art.tensors
    if art.kind == "logreg":
        return unpack_logreg(art).predict_proba(raw)
    if art.kind == "svm":
        return unpack_svm(art).predict_proba(raw)
    if art.kind == "lstm":
        params = {k: t[k] for k in _LSTM_KEYS}
        return lstm_predict_proba(raw, params, art.config["lstm"]["seq_len"],
                                  t["input_mean"], t["input_std"])
    params = {k: t[k] for k in _CNN_KEYS}
    cfg = CnnConfig(**art.config["cnn"])
    return cnn_predict_proba(raw, params, cfg, t["input_stats"][0], t["input_stats"][1])


def predict(art: ModelArtifact, features, kind: str | None = None):
    """(probability of the positive class, hard label).

    The label thresholds the probability at 0.5, except for the SVM where it
    is the sign of the decision value (Platt scaling only calibrates).
    A single input gives scalars; a batch gives arrays.
    """
    raw, single = _as_batch(art, features, kind)
    p = _proba(art, raw)
    if art.kind == "svm":
        labels = (unpack_svm(art).decision_function(raw) >= 0).astype(np.int64)
    else:
        labels = (p >= 0.5).astype(np.int64)
    if single:
        return float(p[0]), int(labels[0])
    return p, labels
