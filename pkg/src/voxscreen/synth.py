"""Synthetic two-class tone corpus with a matching questionnaire manifest.

Class 0 recordings carry a 220 Hz harmonic tone, class 1 a 440 Hz one,
both buried in white noise at a fixed SNR. Metadata is drawn so that
symptoms correlate with the label, giving the metadata models something
to learn.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .audio_io import CANONICAL_RATE, write_wav
from .metadata import ParticipantRecord, write_manifest

_SYMPTOMS_POS = ("drycough", "smelltasteloss", "shortbreath", "headache")
_SYMPTOMS_ANY = ("sorethroat", "wetcough", "muscleache")
_MEDICAL = ("hbp", "asthma", "diabetes", "heart", "copd", "cancer", "angina", "longterm")
_SMOKING = ("never", "ex", "ltOnce", "1to10", "11to20", "21+", "pnts")
_AGES = ("16-19", "20-29", "30-39", "40-49", "50-59", "60-69", "70-79", "80-89")


def tone(f0: float, duration_s: float, rate: int, rng, snr_db: float = 10.0,
         n_harmonics: int = 3) -> np.ndarray:
    n = int(round(duration_s * rate))
    t = np.arange(n) / rate
    sig = np.zeros(n)
    for k in range(1, n_harmonics + 1):
        sig += (0.6 ** (k - 1)) * np.sin(2 * np.pi * k * f0 * t + rng.uniform(0, 2 * np.pi))
    sig *= rng.uniform(0.1, 0.5) / np.max(np.abs(sig))
    p_sig = np.mean(sig**2)
    noise = rng.normal(0.0, np.sqrt(p_sig / 10 ** (snr_db / 10.0)), n)
    return np.clip(sig + noise, -1.0, 1.0)


def _metadata(rng, label: int, pid: str, sid: str, audio: str) -> ParticipantRecord:
    symptoms = []
    if label == 1:
        symptoms += [s for s in _SYMPTOMS_POS if rng.random() < 0.45]
    elif rng.random() < 0.15:
        symptoms.append(_SYMPTOMS_POS[int(rng.integers(len(_SYMPTOMS_POS)))])
    symptoms += [s for s in _SYMPTOMS_ANY if rng.random() < 0.1]
    medical = [m for m in _MEDICAL if rng.random() < 0.08]
    age = _AGES[int(rng.integers(len(_AGES)))]
    if rng.random() < 0.03:
        age = "pnts"
    return ParticipantRecord(
        participant_id=pid,
        gender=("female", "male", "other")[int(rng.choice(3, p=[0.43, 0.56, 0.01]))],
        age_field=age,
        medical_history=medical,
        smoking=_SMOKING[int(rng.integers(len(_SMOKING)))],
        symptoms=symptoms,
        hospitalized="yes" if (label == 1 and rng.random() < 0.1) else "no",
        covid_test="positive" if label else "negative",
        sample_id=sid,
        audio_path=audio,
    )


def make_corpus(out_dir, n: int = 200, seed: int = 0, snr_db: float = 10.0,
                duration_s: float = 1.0, rate: int = CANONICAL_RATE,
                freqs=(220.0, 440.0)) -> Path:
    """Write ``n`` WAVs (balanced classes) plus ``manifest.csv``; returns the manifest path."""
    out = Path(out_dir)
    (out / "audio").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    labels = np.array([i % 2 for i in range(n)])
    records = []
    for i, label in enumerate(labels):
        sid = f"s{i:04d}"
        path = out / "audio" / f"{sid}.wav"
        write_wav(path, tone(freqs[label], duration_s, rate, rng, snr_db), rate)
        records.append(_metadata(rng, int(label), f"p{i:04d}", sid, f"audio/{sid}.wav"))
    manifest = out / "manifest.csv"
    write_manifest(manifest, records)
    return manifest


AUDIO_FEATURE = {"lstm": "mfcc", "cnn": "log_mel"}


def run_pipeline(work_dir, seed: int = 0, models=("lstm", "cnn"), n: int = 200,
                 epochs: int = 50, batch_size: int = 32, lr: float = 1e-3,
                 split=(0.7, 0.0, 0.3), snr_db: float = 10.0) -> dict:
    """Corpus -> extract -> split -> (encode) -> train -> evaluate -> report, via the CLI.

    Returns a mapping of model kind to its output directory, plus
    ``"report"`` for the comparison directory. Raises RuntimeError on any
    nonzero exit.
    """
    from .cli import main

    work = Path(work_dir)

    def run(*argv):
        code = main([str(a) for a in argv])
        if code != 0:
            raise RuntimeError(f"voxscreen {argv[0]} exited with {code}")

    manifest = make_corpus(work / "corpus", n=n, seed=seed, snr_db=snr_db)
    kinds = sorted({AUDIO_FEATURE[m] for m in models if m in AUDIO_FEATURE})
    if kinds:
        run("extract", "--manifest", manifest, "--out", work / "features",
            "--kinds", ",".join(kinds))
    run("split", "--manifest", manifest, "--out", work / "split", "--seed", seed,
        "--train", split[0], "--val", split[1], "--test", split[2])
    splits = work / "split" / "splits.csv"
    if any(m not in AUDIO_FEATURE for m in models):
        run("encode", "--manifest", manifest, "--splits", splits, "--out", work / "encoded")
    out = {}
    for m in models:
        if m in AUDIO_FEATURE:
            src = ("--features", work / "features")
            extra = ("--epochs", epochs, "--batch-size", batch_size, "--lr", lr)
        else:
            src = ("--encoded", work / "encoded" / "encoded.csv")
            extra = ()
        run("train", "--kind", m, "--seed", seed, "--manifest", manifest, "--splits", splits,
            "--out", work / f"model_{m}", *src, *extra)
        run("evaluate", "--model", work / f"model_{m}" / "model.vxm", "--split", "test",
            "--manifest", manifest, "--splits", splits, "--out", work / f"eval_{m}", *src)
        out[m] = work / f"eval_{m}"
    run("report", *[out[m] / "report.json" for m in models], "--out", work / "report")
    out["report"] = work / "report"
    return out
