"""Command-line pipeline: extract, split, encode, train, evaluate, predict, report.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import platform
import shutil
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .audio_io import load_canonical
from .dataset import (
    Item, LabeledSet, SplitSpec, apply_manifest, read_split_manifest, rebalance, split,
    write_split_manifest,
)
from .dsp import DspConfig, FeatureKind, extract, load_feature, save_feature, stat_features
from .errors import DataError, MissingFeatures, NumericError, VoxError
from .eval import EvalReport, comparison_table, evaluate, roc_svg
from .metadata import (
    EncodingSchema, encode_record, fit_schema, parse_label, read_encoded_csv, read_manifest,
    record_from_row, write_encoded_csv,
)
from .models.artifact import (
    ModelArtifact, decision_scores, pack_cnn, pack_logreg, pack_lstm, pack_svm, predict,
)
from .models.cnn import CnnConfig
from .models.logreg import logreg_train
from .models.lstm import LstmConfig
from .models.svm import svm_train_smo
from .models.training import fit_cnn, fit_lstm

log = logging.getLogger("voxscreen")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

MODEL_KINDS = ("logreg", "svm", "lstm", "cnn")
FEATURE_KINDS = ("mfcc", "log_mel", "stats")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    kind: str
    seed: int
    out_dir: str
    manifest: str = ""
    splits: str = ""
    features_dir: str = ""
    encoded: str = ""
    epochs: int | None = None
    batch_size: int = 32
    lr: float | None = None
    hidden_dim: int = 128
    seq_len: int = 300
    C: float = 1.0
    gamma: str = "auto"
    tol: float = 1e-3
    max_iter: int = 100_000
    l2: float = 0.0
    dsp: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.kind not in MODEL_KINDS:
            raise UsageError(f"unknown model kind {self.kind!r}")
        if self.kind in ("lstm", "cnn") and not (self.features_dir and self.manifest
                                                 and self.splits):
            raise UsageError(f"{self.kind} needs --features, --manifest and --splits")
        if self.kind in ("logreg", "svm") and not self.encoded:
            raise UsageError(f"{self.kind} needs --encoded")
        if self.batch_size <= 0 or self.hidden_dim <= 0 or self.seq_len <= 0:
            raise UsageError("batch size, hidden size and sequence length must be positive")
        return self

    @property
    def resolved_epochs(self) -> int:
        if self.epochs is not None:
            return self.epochs
        return 2000 if self.kind == "logreg" else 50

    @property
    def resolved_lr(self) -> float:
        if self.lr is not None:
            return self.lr
        return 0.1 if self.kind == "logreg" else 1e-4

    @classmethod
    def load(cls, path) -> "RunConfig":
        d = json.loads(Path(path).read_text())
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _versions() -> dict:
    import scipy

    return {"voxscreen": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def _resolve_audio(manifest: Path, audio_path: str) -> Path:
    p = Path(audio_path)
    return p if p.is_absolute() else manifest.parent / p


def _dsp_from_args(args) -> DspConfig:
    return DspConfig(
        frame_len=args.frame_len, hop_len=args.hop_len, fft_size=args.fft_size,
        n_mels=args.n_mels, n_mfcc=args.n_mfcc, fmin_hz=args.fmin, fmax_hz=args.fmax,
        preemphasis=args.preemphasis, log_floor=args.log_floor,
    ).validate()


# ---------------------------------------------------------------- extract


def _read_manifest_rows(path):
    """Soft manifest reader for extraction: bad rows are reported, not fatal."""
    out = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.DictReader(fh)):
            try:
                out.append((record_from_row(row, i), None))
            except VoxError as exc:
                out.append((None, f"row {i}: {exc}"))
    return out


def cmd_extract(args) -> int:
    manifest = Path(args.manifest)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    bad = [k for k in kinds if k not in FEATURE_KINDS]
    if bad or not kinds:
        raise UsageError(f"unknown feature kinds {bad}; choose from {FEATURE_KINDS}")
    base = _dsp_from_args(args)
    cfgs = {k: base for k in kinds}
    if "log_mel" in kinds:
        cfgs["log_mel"] = replace(base, n_mels=args.log_mel_bands).validate()
    rows = _read_manifest_rows(manifest)
    if not rows:
        print("no input rows", file=sys.stderr)
        return EXIT_DATA

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for k in kinds:
        if k != "stats":
            (out / k).mkdir(exist_ok=True)
            _write_json(out / k / "dsp_config.json",
                        dict(cfgs[k].to_dict(), digest=cfgs[k].digest().hex()))

    def work(entry):
        rec, err = entry
        if rec is None:
            return None, [("", "*", "failed", err)], None
        try:
            buf = load_canonical(_resolve_audio(manifest, rec.audio_path))
            stats = None
            results = []
            for k in kinds:
                if k == "stats":
                    stats = stat_features(buf)
                else:
                    fm = extract(buf, k, cfgs[k])
                    save_feature(out / k / f"{rec.sample_id}.vxf", fm)
                results.append((rec.sample_id, k, "ok", ""))
            return rec, results, stats
        except (VoxError, OSError, ValueError) as exc:
            return rec, [(rec.sample_id, "*", "failed", f"{type(exc).__name__}: {exc}")], None

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(work, rows))

    n_fail = 0
    with open(out / "extract_log.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample_id", "kind", "status", "detail"])
        for _, entries, _ in results:
            for e in entries:
                w.writerow(e)
                if e[2] == "failed":
                    n_fail += 1
                    log.warning("extraction failed for %s: %s", e[0] or "?", e[3])
    if "stats" in kinds:
        with open(out / "stats.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            header = None
            for rec, _, st in results:
                if st is None:
                    continue
                d = asdict(st)
                if header is None:
                    header = list(d)
                    w.writerow(["sample_id"] + header)
                w.writerow([rec.sample_id] + [repr(d[h]) for h in header])
    n_ok = sum(1 for rec, entries, _ in results
               if rec is not None and all(e[2] == "ok" for e in entries))
    print(f"extracted {n_ok}/{len(rows)} recordings, {n_fail} failures")
    return EXIT_OK if n_ok > 0 else EXIT_DATA


# ---------------------------------------------------------------- split / encode


def _labeled_set(records) -> LabeledSet:
    return LabeledSet(
        Item(r.sample_id, parse_label(r.covid_test), r.audio_path, r.participant_id)
        for r in records
    )


def cmd_split(args) -> int:
    records = read_manifest(args.manifest)
    if not records:
        raise DataError("no input rows")
    try:
        spec = SplitSpec(args.train, args.val, args.test, args.seed, not args.no_stratify)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    train, val, test = split(_labeled_set(records), spec)
    if args.rebalance_target is not None:
        train, val = rebalance(train, val, args.rebalance_target, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_split_manifest(out / "splits.csv", train, val, test)
    counts = {name: {"negative": s.n_negative, "positive": s.n_positive}
              for name, s in zip(("train", "val", "test"), (train, val, test))}
    _write_json(out / "split_spec.json", dict(asdict(spec), rebalance_target=args.rebalance_target,
                                             counts=counts))
    for name, c in counts.items():
        print(f"{name}: {c['negative']} negative, {c['positive']} positive")
    return EXIT_OK


def cmd_encode(args) -> int:
    records = read_manifest(args.manifest)
    mapping = read_split_manifest(args.splits)
    train_recs = [r for r in records if mapping.get(r.sample_id) == "train"]
    if not train_recs:
        raise DataError("split manifest has no training rows")
    schema = fit_schema(train_recs)
    rows, rejected = [], []
    for r in records:
        s = mapping.get(r.sample_id)
        if s is None:
            continue
        enc = encode_record(r, schema)
        if enc is None:
            rejected.append(r.sample_id)
            continue
        rows.append((r.sample_id, s, enc))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_encoded_csv(out / "encoded.csv", schema, rows)
    _write_json(out / "schema.json", dict(schema.to_dict(), rejected=rejected))
    print(f"encoded {len(rows)} rows ({schema.width} columns), rejected {len(rejected)}")
    return EXIT_OK


# ---------------------------------------------------------------- train


def _load_feature_set(features_dir: Path, kind: str, ids):
    kind_dir = features_dir / kind
    dsp_path = kind_dir / "dsp_config.json"
    if not kind_dir.is_dir() or not dsp_path.exists():
        raise MissingFeatures(f"no '{kind}' features under {features_dir}; run extract with "
                              f"--kinds {kind}")
    d = json.loads(dsp_path.read_text())
    d.pop("digest", None)
    dsp = DspConfig.from_dict(d)
    mats = []
    missing = []
    for sid in ids:
        p = kind_dir / f"{sid}.vxf"
        if not p.exists():
            missing.append(sid)
            continue
        fm = load_feature(p)
        if fm.kind is not FeatureKind[kind] or fm.config_hash != dsp.digest():
            raise DataError(f"feature file {p} does not match {dsp_path}")
        mats.append(fm.data)
    if missing:
        raise MissingFeatures(f"'{kind}' features missing for {len(missing)} samples, "
                              f"e.g. {missing[:3]}")
    return mats, dsp


def _split_items(run: RunConfig, which: str):
    records = read_manifest(run.manifest)
    mapping = read_split_manifest(run.splits)
    parts = dict(zip(("train", "val", "test"), apply_manifest(_labeled_set(records), mapping)))
    return parts[which]


def _encoded_split(path, which: str, mapping: dict | None = None):
    cols, ids, splits, X, y = read_encoded_csv(path)
    if mapping is not None:
        splits = [mapping.get(i, "") for i in ids]
    sel = np.array([s == which for s in splits], dtype=bool)
    return [i for i, k in zip(ids, sel) if k], X[sel], y[sel]


def train_from_config(run: RunConfig):
    """Train one model. Returns (artifact, history rows, header)."""
    run.validate()
    history = []
    base = {"epochs": run.resolved_epochs, "lr": run.resolved_lr, "batch_size": run.batch_size}
    if run.kind in ("logreg", "svm"):
        mapping = read_split_manifest(run.splits) if run.splits else None
        _, X, y = _encoded_split(run.encoded, "train", mapping)
        if len(y) == 0:
            raise DataError("no training rows in encoded data")
        schema_path = Path(run.encoded).parent / "schema.json"
        schema = None
        if schema_path.exists():
            sd = json.loads(schema_path.read_text())
            schema = EncodingSchema.from_dict(sd).to_dict()
        if run.kind == "logreg":
            model = logreg_train(X, y, epochs=run.resolved_epochs, lr=run.resolved_lr, l2=run.l2,
                                 history=history)
            art = pack_logreg(model, {"epochs": run.resolved_epochs, "lr": run.resolved_lr,
                                      "schema": schema}, seed=run.seed)
            return art, history, ("epoch", "loss", "accuracy")
        gamma = run.gamma if run.gamma == "auto" else float(run.gamma)
        model = svm_train_smo(X, y, C=run.C, gamma=gamma, tol=run.tol, max_iter=run.max_iter)
        acc = float(np.mean((model.decision_function(X) >= 0) == (y == 1)))
        history.append((model.iterations, int(model.converged), acc, len(model.alpha)))
        art = pack_svm(model, {"tol": run.tol, "schema": schema}, seed=run.seed)
        return art, history, ("iterations", "converged", "accuracy", "n_support")

    feat_kind = "mfcc" if run.kind == "lstm" else "log_mel"
    items = _split_items(run, "train")
    if len(items) == 0:
        raise DataError("no training rows in split manifest")
    mats, dsp = _load_feature_set(Path(run.features_dir), feat_kind, items.ids)
    run.dsp = dsp.to_dict()
    y = items.labels
    if run.kind == "lstm":
        cfg = LstmConfig(input_dim=mats[0].shape[1], hidden_dim=run.hidden_dim,
                         seq_len=run.seq_len)
        params, mean, std = fit_lstm(mats, y, cfg, run.resolved_epochs, run.batch_size,
                                     run.resolved_lr, run.seed, history)
        art = pack_lstm(params, mean, std, cfg, base, dsp, seed=run.seed)
    else:
        cfg = CnnConfig()
        params, mean, std = fit_cnn(mats, y, cfg, run.resolved_epochs, run.batch_size,
                                    run.resolved_lr, run.seed, history)
        art = pack_cnn(params, mean, std, cfg, base, dsp, seed=run.seed)
    return art, history, ("epoch", "loss", "accuracy")


def cmd_train(args) -> int:
    if args.config:
        run = RunConfig.load(args.config)
        if args.out:
            run.out_dir = args.out
    else:
        if args.kind is None or args.seed is None or args.out is None:
            raise UsageError("train needs --kind, --seed and --out (or --config)")
        run = RunConfig(
            kind=args.kind, seed=args.seed, out_dir=args.out, manifest=args.manifest or "",
            splits=args.splits or "", features_dir=args.features or "",
            encoded=args.encoded or "", epochs=args.epochs, batch_size=args.batch_size,
            lr=args.lr, hidden_dim=args.hidden_dim, seq_len=args.seq_len, C=args.C,
            gamma=args.gamma, tol=args.tol, max_iter=args.max_iter, l2=args.l2,
        )
    art, history, header = train_from_config(run)
    out = Path(run.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    art.save(out / "model.vxm")
    with open(out / "train_log.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in history:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _write_json(out / "run_config.json", asdict(run))
    _write_json(out / "versions.json", _versions())
    if run.splits and Path(run.splits).exists():
        shutil.copyfile(run.splits, out / "splits.csv")
        spec = Path(run.splits).parent / "split_spec.json"
        if spec.exists():
            shutil.copyfile(spec, out / "split_spec.json")
    if run.encoded:
        schema = Path(run.encoded).parent / "schema.json"
        if schema.exists():
            shutil.copyfile(schema, out / "schema.json")
    last = history[-1] if history else ()
    print(f"trained {run.kind}: {dict(zip(header, last))}")
    return EXIT_OK


# ---------------------------------------------------------------- evaluate / predict / report


def _read_predictions(path):
    labels, scores, preds = [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            labels.append(int(row["label"]))
            if row.get("score") not in (None, ""):
                scores.append(float(row["score"]))
            if row.get("pred") not in (None, ""):
                preds.append(int(row["pred"]))
    if not labels:
        raise DataError(f"{path} holds no predictions")
    return (np.array(labels), np.array(scores) if scores else None,
            np.array(preds) if preds else None)


def cmd_evaluate(args) -> int:
    if args.predictions:
        y, scores, preds = _read_predictions(args.predictions)
        if scores is None and preds is None:
            raise DataError("predictions file needs a 'score' or 'pred' column")
        report = evaluate(args.name or Path(args.predictions).stem, scores, y, preds=preds)
    else:
        if not args.model:
            raise UsageError("evaluate needs --model or --predictions")
        art = ModelArtifact.load(args.model)
        if art.input_kind == "encoded":
            if not args.encoded:
                raise UsageError(f"{art.kind} evaluation needs --encoded")
            mapping = read_split_manifest(args.splits) if args.splits else None
            _, X, y = _encoded_split(args.encoded, args.split, mapping)
            feats = X
        else:
            if not (args.manifest and args.splits and args.features):
                raise UsageError(f"{art.kind} evaluation needs --manifest, --splits, --features")
            run = RunConfig(kind=art.kind, seed=0, out_dir="", manifest=args.manifest,
                            splits=args.splits, features_dir=args.features)
            items = _split_items(run, args.split)
            mats, dsp = _load_feature_set(Path(args.features), art.input_kind, items.ids)
            if dsp.digest().hex() != art.dsp_hash:
                raise DataError("features were extracted with a different DspConfig than the model")
            feats, y = mats, items.labels
        if len(y) == 0:
            raise DataError(f"split {args.split!r} is empty")
        probs, preds = predict(art, feats, kind=art.input_kind)
        scores = decision_scores(art, feats, kind=art.input_kind) if art.kind == "svm" else probs
        report = evaluate(args.name or art.kind, scores, y, preds=preds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report.save(out / "report.json")
    report.save_roc_csv(out / "roc.csv")
    print(comparison_table([report]), end="")
    return EXIT_OK


def cmd_predict(args) -> int:
    art = ModelArtifact.load(args.model)
    results = []
    if args.audio:
        if art.input_kind == "encoded":
            raise UsageError(f"{art.kind} models take --metadata, not --audio")
        for path in args.audio:
            fm = extract(load_canonical(path), art.input_kind, art.dsp_config)
            p, lab = predict(art, fm)
            results.append({"input": str(path), "probability": p, "label": lab})
    elif args.metadata:
        if art.input_kind != "encoded":
            raise UsageError(f"{art.kind} models take --audio, not --metadata")
        schema_d = art.config.get("schema")
        if not schema_d:
            raise DataError("model artifact carries no encoding schema")
        schema = EncodingSchema.from_dict(schema_d)
        with open(args.metadata, newline="") as fh:
            for i, row in enumerate(csv.DictReader(fh)):
                row.setdefault("audio_path", "")
                if not row.get("covid_test"):
                    # label only matters for the age rule; unknown means impute
                    row["covid_test"] = "positive"
                enc = encode_record(record_from_row(row, i), schema)
                if enc is None:
                    results.append({"input": f"row {i}", "probability": None, "label": None})
                    continue
                p, lab = predict(art, enc)
                results.append({"input": f"row {i}", "probability": p, "label": lab})
    else:
        raise UsageError("predict needs --audio or --metadata")
    for r in results:
        print(json.dumps(r, sort_keys=True))
    return EXIT_OK


def cmd_report(args) -> int:
    reports = [EvalReport.load(p) for p in args.reports]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = comparison_table(reports)
    (out / "comparison.txt").write_text(table)
    (out / "roc.svg").write_text(roc_svg(reports))
    print(table, end="")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="voxscreen", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("extract", help="compute feature files for every manifest row")
    e.add_argument("--manifest", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--kinds", default="mfcc,log_mel", help="comma list of mfcc, log_mel, stats")
    e.add_argument("--jobs", type=int, default=1)
    d = DspConfig()
    e.add_argument("--frame-len", type=int, default=d.frame_len)
    e.add_argument("--hop-len", type=int, default=d.hop_len)
    e.add_argument("--fft-size", type=int, default=d.fft_size)
    e.add_argument("--n-mels", type=int, default=d.n_mels)
    e.add_argument("--n-mfcc", type=int, default=d.n_mfcc)
    e.add_argument("--log-mel-bands", type=int, default=64,
                   help="mel bands for log_mel features (the CNN input width)")
    e.add_argument("--fmin", type=float, default=d.fmin_hz)
    e.add_argument("--fmax", type=float, default=d.fmax_hz)
    e.add_argument("--preemphasis", type=float, default=d.preemphasis)
    e.add_argument("--log-floor", type=float, default=d.log_floor)
    e.set_defaults(func=cmd_extract)

    s = sub.add_parser("split", help="write a seeded train/val/test split manifest")
    s.add_argument("--manifest", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--train", type=float, default=0.7)
    s.add_argument("--val", type=float, default=0.15)
    s.add_argument("--test", type=float, default=0.15)
    s.add_argument("--no-stratify", action="store_true")
    s.add_argument("--rebalance-target", type=int, default=None,
                   help="move validation positives into train until it holds this many")
    s.set_defaults(func=cmd_split)

    c = sub.add_parser("encode", help="fit the metadata schema on train rows and encode all rows")
    c.add_argument("--manifest", required=True)
    c.add_argument("--splits", required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_encode)

    t = sub.add_parser("train", help="train one model")
    t.add_argument("--config", help="rerun from a saved run_config.json")
    t.add_argument("--kind", choices=MODEL_KINDS)
    t.add_argument("--seed", type=int)
    t.add_argument("--out")
    t.add_argument("--manifest")
    t.add_argument("--splits")
    t.add_argument("--features", help="extract output directory (lstm/cnn)")
    t.add_argument("--encoded", help="encoded.csv from encode (logreg/svm)")
    t.add_argument("--epochs", type=int)
    t.add_argument("--batch-size", type=int, default=32)
    t.add_argument("--lr", type=float)
    t.add_argument("--hidden-dim", type=int, default=128)
    t.add_argument("--seq-len", type=int, default=300)
    t.add_argument("--C", type=float, default=1.0)
    t.add_argument("--gamma", default="auto")
    t.add_argument("--tol", type=float, default=1e-3)
    t.add_argument("--max-iter", type=int, default=100_000)
    t.add_argument("--l2", type=float, default=0.0)
    t.set_defaults(func=cmd_train)

    v = sub.add_parser("evaluate", help="score a model on the validation or test split")
    v.add_argument("--model")
    v.add_argument("--predictions", help="CSV with label and score and/or pred columns")
    v.add_argument("--split", choices=("val", "test"), default="test")
    v.add_argument("--manifest")
    v.add_argument("--splits")
    v.add_argument("--features")
    v.add_argument("--encoded")
    v.add_argument("--name")
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("predict", help="probability and label for new inputs")
    r.add_argument("--model", required=True)
    r.add_argument("--audio", nargs="+")
    r.add_argument("--metadata", help="CSV of questionnaire rows")
    r.set_defaults(func=cmd_predict)

    o = sub.add_parser("report", help="comparison table and ROC plot over several reports")
    o.add_argument("reports", nargs="+")
    o.add_argument("--out", required=True)
    o.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"voxscreen: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"voxscreen: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError, KeyError, ValueError) as exc:
        print(f"voxscreen: data error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
