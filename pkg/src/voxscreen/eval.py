"""Confusion matrices, rate metrics, ROC curves and report rendering."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, LengthMismatch, SingleClass


@dataclass(frozen=True)
class ConfusionMatrix:
    tn: int
    fp: int
    fn: int
    tp: int

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.fn + self.tp

    def as_rows(self) -> list:
        """Rows are true labels (negative, positive), columns predictions."""
        return [[self.tn, self.fp], [self.fn, self.tp]]


@dataclass(frozen=True)
class Metrics:
    """Rates; ``None`` marks a rate whose denominator is zero."""

    accuracy: float | None
    sensitivity: float | None
    specificity: float | None


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray
    auc: float

    @property
    def points(self) -> list:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def _binary(a, name):
    a = np.asarray(a)
    if a.ndim != 1:
        raise DataError(f"{name} must be one-dimensional")
    if not np.isin(a, (0, 1)).all():
        raise DataError(f"{name} must contain only 0/1")
    return a.astype(np.int64)


def confusion(preds, labels) -> ConfusionMatrix:
    p = _binary(preds, "preds")
    y = _binary(labels, "labels")
    if len(p) != len(y):
        raise LengthMismatch(f"{len(p)} predictions vs {len(y)} labels")
    if len(p) == 0:
        raise DataError("confusion matrix of zero samples")
    return ConfusionMatrix(
        tn=int(np.sum((p == 0) & (y == 0))),
        fp=int(np.sum((p == 1) & (y == 0))),
        fn=int(np.sum((p == 0) & (y == 1))),
        tp=int(np.sum((p == 1) & (y == 1))),
    )


def _ratio(num: int, den: int):
    return num / den if den > 0 else None


def metrics(cm: ConfusionMatrix) -> Metrics:
    return Metrics(
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn),
        specificity=_ratio(cm.tn, cm.tn + cm.fp),
    )


def roc(scores, labels) -> RocCurve:
    """ROC by sweeping thresholds over distinct scores, high to low.

    Tied scores move together as one step, so a tie block contributes a
    diagonal segment; AUC is the trapezoid area, which equals the
    Mann-Whitney statistic with ties counted one half.
    """
    s = np.asarray(scores, dtype=np.float64)
    y = _binary(labels, "labels")
    if len(s) != len(y):
        raise LengthMismatch(f"{len(s)} scores vs {len(y)} labels")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs both classes")
    order = np.argsort(-s, kind="stable")
    s_sorted, y_sorted = s[order], y[order]
    # last index of each run of equal scores
    ends = np.flatnonzero(np.r_[s_sorted[1:] != s_sorted[:-1], True])
    tp = np.cumsum(y_sorted)[ends]
    fp = (ends + 1) - tp
    tps = np.r_[0, tp].astype(np.int64)
    fps = np.r_[0, fp].astype(np.int64)
    # integer area: sum of (dfp * (tp_prev + tp_cur)) / 2, exact before the division
    twice_area = int(np.sum(np.diff(fps) * (tps[1:] + tps[:-1])))
    auc = twice_area / (2.0 * n_pos * n_neg)
    return RocCurve(
        fpr=fps / n_neg,
        tpr=tps / n_pos,
        thresholds=np.r_[np.inf, s_sorted[ends]],
        auc=auc,
    )


# ---------------------------------------------------------------- reports


@dataclass
class EvalReport:
    model: str
    confusion: ConfusionMatrix
    metrics: Metrics
    roc: RocCurve | None = None
    n_samples: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "model": self.model,
            "n_samples": self.n_samples,
            "confusion": {"tn": self.confusion.tn, "fp": self.confusion.fp,
                          "fn": self.confusion.fn, "tp": self.confusion.tp},
            "metrics": {"accuracy": self.metrics.accuracy,
                        "sensitivity": self.metrics.sensitivity,
                        "specificity": self.metrics.specificity},
            "roc": None,
            "auc": None,
        }
        if self.roc is not None:
            d["roc"] = [[f, t] for f, t in self.roc.points]
            d["auc"] = self.roc.auc
        if self.extra:
            d["extra"] = self.extra
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    def save_roc_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["fpr", "tpr", "threshold"])
            if self.roc is not None:
                for f, t, th in zip(self.roc.fpr, self.roc.tpr, self.roc.thresholds):
                    w.writerow([repr(float(f)), repr(float(t)), repr(float(th))])

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        c = d["confusion"]
        m = d["metrics"]
        curve = None
        if d.get("roc"):
            pts = np.array(d["roc"], dtype=np.float64)
            curve = RocCurve(pts[:, 0], pts[:, 1], np.full(len(pts), np.nan), d["auc"])
        return cls(d["model"], ConfusionMatrix(c["tn"], c["fp"], c["fn"], c["tp"]),
                   Metrics(m["accuracy"], m["sensitivity"], m["specificity"]), curve,
                   d.get("n_samples", 0), d.get("extra", {}))

    @classmethod
    def load(cls, path) -> "EvalReport":
        return cls.from_dict(json.loads(Path(path).read_text()))


def evaluate(model: str, scores, labels, threshold: float = 0.5,
             preds=None) -> EvalReport:
    """Build a report from scores. Hard predictions default to score >= threshold."""
    labels = _binary(labels, "labels")
    if preds is None:
        preds = (np.asarray(scores, dtype=np.float64) >= threshold).astype(np.int64)
    cm = confusion(preds, labels)
    curve = None
    if scores is not None and 0 < labels.sum() < len(labels):
        curve = roc(scores, labels)
    return EvalReport(model, cm, metrics(cm), curve, n_samples=len(labels))


def _pct(x) -> str:
    return "n/a" if x is None else f"{100.0 * x:.0f}%"


def comparison_table(reports) -> str:
    """Plain-text comparison table, one row per report."""
    head = ("Model", "N", "Accuracy", "Sensitivity", "Specificity", "AUC")
    rows = [head]
    for r in reports:
        auc = "n/a" if r.roc is None else f"{r.roc.auc:.3f}"
        rows.append((r.model, str(r.n_samples or r.confusion.total), _pct(r.metrics.accuracy),
                     _pct(r.metrics.sensitivity), _pct(r.metrics.specificity), auc))
    widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
    sep = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    lines = [sep]
    for k, row in enumerate(rows):
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
        if k == 0:
            lines.append(sep)
    lines.append(sep)
    return "\n".join(lines) + "\n"


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def roc_svg(reports, size: int = 420) -> str:
    """Standalone SVG with one ROC polyline per report plus the chance diagonal."""
    pad = 50
    span = size - 2 * pad

    def xy(f, t):
        return f"{pad + f * span:.2f},{size - pad - t * span:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<rect x="{pad}" y="{pad}" width="{span}" height="{span}" fill="none" stroke="black"/>',
        f'<line x1="{pad}" y1="{size - pad}" x2="{size - pad}" y2="{pad}" '
        'stroke="#999" stroke-dasharray="4 4"/>',
        f'<text x="{size / 2}" y="{size - 15}" text-anchor="middle" font-size="13">'
        "False positive rate</text>",
        f'<text x="15" y="{size / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 15 {size / 2})">True positive rate</text>',
    ]
    for k in range(6):
        v = k / 5
        parts.append(f'<text x="{pad + v * span:.1f}" y="{size - pad + 15}" font-size="10" '
                     f'text-anchor="middle">{v:.1f}</text>')
        parts.append(f'<text x="{pad - 6}" y="{size - pad - v * span + 4:.1f}" font-size="10" '
                     f'text-anchor="end">{v:.1f}</text>')
    n_curves = 0
    for i, r in enumerate(reports):
        if r.roc is None:
            continue
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(xy(f, t) for f, t in r.roc.points)
        parts.append(f'<polyline class="roc" fill="none" stroke="{color}" stroke-width="2" '
                     f'points="{pts}"/>')
        ly = pad + 16 + 16 * n_curves
        parts.append(f'<text x="{size - pad - 8}" y="{ly + (span - 16 * len(reports) - 20)}" '
                     f'font-size="12" text-anchor="end" fill="{color}">'
                     f"{r.model} (AUC {r.roc.auc:.3f})</text>")
        n_curves += 1
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
