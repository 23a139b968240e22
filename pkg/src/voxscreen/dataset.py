"""Participant-grouped train/val/test splitting and positive-sample rebalancing."""
from __future__ import annotations

import csv
import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .errors import DataError, EmptyClass, InsufficientPositives

SPLITS = ("train", "val", "test")


@dataclass(frozen=True)
class Item:
    sample_id: str
    label: int
    ref: str = ""
    participant_id: str = ""

    @property
    def group(self) -> str:
        return self.participant_id or self.sample_id


@dataclass(frozen=True)
class LabeledSet:
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def __len__(self):
        return len(self.items)

    @property
    def counts(self) -> tuple:
        """(n_negative, n_positive)."""
        pos = sum(1 for it in self.items if it.label == 1)
        return len(self.items) - pos, pos

    @property
    def n_negative(self) -> int:
        return self.counts[0]

    @property
    def n_positive(self) -> int:
        return self.counts[1]

    @property
    def ids(self) -> list:
        return [it.sample_id for it in self.items]

    @property
    def labels(self) -> np.ndarray:
        return np.array([it.label for it in self.items], dtype=np.int64)


@dataclass(frozen=True)
class SplitSpec:
    """Split proportions. ``val_frac`` may be 0 for a plain train/test split."""

    train_frac: float = 0.7
    val_frac: float = 0.15
    test_frac: float = 0.15
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        for name in ("train_frac", "test_frac"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if not 0.0 <= self.val_frac < 1.0:
            raise ValueError(f"val_frac must lie in [0, 1), got {self.val_frac}")
        if abs(self.train_frac + self.val_frac + self.test_frac - 1.0) > 1e-12:
            raise ValueError("split fractions must sum to 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def fractions(self) -> tuple:
        return self.train_frac, self.val_frac, self.test_frac


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _groups(items) -> "OrderedDict[str, list]":
    groups = OrderedDict()
    for it in items:
        groups.setdefault(it.group, []).append(it)
    return groups


def _allocate(groups: list, fractions, rng) -> list:
    """Shuffle groups and fill splits up to cumulative sample targets."""
    order = rng.permutation(len(groups))
    total = sum(len(g) for g in groups)
    bounds = np.cumsum(fractions)
    targets = [_round_half_up(total * b) for b in bounds]
    targets[-1] = total
    out = [[] for _ in fractions]
    filled = 0
    for gi in order:
        g = groups[gi]
        k = 0
        while k < len(targets) - 1 and filled >= targets[k]:
            k += 1
        out[k].extend(g)
        filled += len(g)
    return out


def split(all_items: LabeledSet, spec: SplitSpec) -> tuple:
    """Deterministic seeded split into (train, val, test).

    Samples sharing a participant always land in the same split. With
    ``stratified`` each class is allocated separately, so the class ratio
    holds per split to within one sample (for single-sample participants).
    A participant's stratum is the label of its first sample.
    """
    if len(all_items) == 0:
        raise DataError("cannot split an empty set")
    rng = np.random.default_rng(spec.seed)
    groups = list(_groups(all_items.items).values())
    n_splits = sum(1 for f in spec.fractions if f > 0)

    if spec.stratified:
        parts = [[], [], []]
        for label in (0, 1):
            cls = [g for g in groups if g[0].label == label]
            n = sum(len(g) for g in cls)
            if n < n_splits:
                raise EmptyClass(f"class {label} has {n} samples, fewer than {n_splits} splits")
            for k, chunk in enumerate(_allocate(cls, spec.fractions, rng)):
                parts[k].extend(chunk)
    else:
        parts = _allocate(groups, spec.fractions, rng)

    return tuple(LabeledSet(p) for p in parts)


def rebalance(train: LabeledSet, val: LabeledSet, target_train_pos: int, seed: int = 0) -> tuple:
    """Move positives from ``val`` into ``train`` until train holds ``target_train_pos``.

    Which positives move is fixed by ``seed``. Negatives and the test split
    are never touched.
    """
    need = target_train_pos - train.n_positive
    if need < 0:
        raise ValueError(
            f"train already has {train.n_positive} positives, above target {target_train_pos}"
        )
    if need == 0:
        return train, val
    val_pos = [i for i, it in enumerate(val.items) if it.label == 1]
    if len(val_pos) < need:
        raise InsufficientPositives(
            f"need {need} positives from validation, only {len(val_pos)} available"
        )
    rng = np.random.default_rng(seed)
    chosen = set(np.asarray(val_pos)[rng.permutation(len(val_pos))[:need]].tolist())
    moved = [val.items[i] for i in sorted(chosen)]
    kept = [it for i, it in enumerate(val.items) if i not in chosen]
    return LabeledSet(train.items + tuple(moved)), LabeledSet(kept)


def assignments(train: LabeledSet, val: LabeledSet, test: LabeledSet) -> dict:
    out = {}
    for name, part in zip(SPLITS, (train, val, test)):
        for it in part.items:
            if it.sample_id in out:
                raise DataError(f"sample {it.sample_id!r} appears in two splits")
            out[it.sample_id] = name
    return out


def write_split_manifest(path, train: LabeledSet, val: LabeledSet, test: LabeledSet) -> None:
    rows = assignments(train, val, test)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample_id", "split"])
        for part in (train, val, test):
            for it in part.items:
                w.writerow([it.sample_id, rows[it.sample_id]])


def read_split_manifest(path) -> dict:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = {}
    for r in rows:
        if r["split"] not in SPLITS:
            raise DataError(f"unknown split {r['split']!r} for {r['sample_id']!r}")
        out[r["sample_id"]] = r["split"]
    return out


def apply_manifest(all_items: LabeledSet, mapping: dict) -> tuple:
    parts = {s: [] for s in SPLITS}
    for it in all_items.items:
        if it.sample_id in mapping:
            parts[mapping[it.sample_id]].append(it)
    return tuple(LabeledSet(parts[s]) for s in SPLITS)
