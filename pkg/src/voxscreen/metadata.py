"""Questionnaire preprocessing: categorical cleanup and one-/multi-hot encoding.

The column order of an encoded vector is frozen by ``EncodingSchema``, which
is fitted on training rows only and then applied unchanged to every split.
"""
from __future__ import annotations

import csv
import logging
import re
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, MissingLabel, SchemaMismatch, UnknownCategory, UnparseableAge

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

GENDERS = ("female", "male", "other")
MEDICAL_CATEGORIES = (
    "high_blood_pressure", "pulmonary", "cardiovascular", "cancer", "diabetes", "other",
)
SMOKING = ("non_smoker", "ex_smoker", "1_10_per_day", "11_plus_per_day", "prefer_not_to_say")

MEDICAL_TABLE = {
    "hbp": "high_blood_pressure",
    "hpb": "high_blood_pressure",  # transposed spelling seen in the wild
    "asthma": "pulmonary",
    "lung": "pulmonary",
    "copd": "pulmonary",
    "cystic": "pulmonary",
    "heart": "cardiovascular",
    "valvular": "cardiovascular",
    "otherheart": "cardiovascular",
    "cancer": "cancer",
    "diabetes": "diabetes",
    "pnts": "other",
    "longterm": "other",
    "hiv": "other",
    "angina": "other",
}

_SMOKING_ALIASES = {
    "non_smoker": ("never", "non-smoker", "nonsmoker", "non smoker", "non_smoker", "no"),
    # "smoked once" folds into non-smoker; the app code is ltOnce
    "ltonce": ("ltonce", "itonce", "smoked once", "lt_once"),
    "ex_smoker": ("ex", "ex-smoker", "exsmoker", "ex smoker", "ex_smoker"),
    "1_10_per_day": ("1to10", "1-10", "1-10 cigarettes per day", "1_10_per_day"),
    "11_20": ("11to20", "11-20", "11-20 cigarettes per day"),
    "21_plus": ("21+", "21+ cigarettes per day", "21plus"),
    "11_plus_per_day": ("11_plus_per_day", "11+", "11 or more cigarettes per day"),
    "prefer_not_to_say": ("pnts", "prefer not to say", "prefer_not_to_say"),
}
_SMOKING_MERGE = {"ltonce": "non_smoker", "11_20": "11_plus_per_day", "21_plus": "11_plus_per_day"}
_SMOKING_LOOKUP = {alias: key for key, aliases in _SMOKING_ALIASES.items() for alias in aliases}

_GENDER_LOOKUP = {
    "female": "female", "f": "female", "woman": "female",
    "male": "male", "m": "male", "man": "male",
    "other": "other", "pnts": "other", "prefer not to say": "other", "nonbinary": "other",
}

_NONE_TOKENS = {"", "none", "no", "n/a", "na"}
_YES = {"yes", "y", "1", "true"}
_NO = {"no", "n", "0", "false"}
_POSITIVE = {"positive", "pos", "1", "yes"}
_NEGATIVE = {"negative", "neg", "0", "no"}


@dataclass
class ParticipantRecord:
    participant_id: str
    gender: str
    age_field: str
    medical_history: list = field(default_factory=list)
    smoking: str = "never"
    symptoms: list = field(default_factory=list)
    hospitalized: str = "no"
    covid_test: str | None = None
    sample_id: str = ""
    audio_path: str = ""


@dataclass(frozen=True)
class EncodedRecord:
    features: np.ndarray
    label: int
    schema_version: int = SCHEMA_VERSION


def _norm(s) -> str:
    return re.sub(r"\s+", " ", str(s).strip().lower())


def _split_codes(raw) -> list:
    if isinstance(raw, (list, tuple)):
        items = raw
    else:
        items = re.split(r"[;,]", str(raw))
    out = []
    for it in items:
        t = str(it).strip()
        if _norm(t) not in _NONE_TOKENS:
            out.append(t)
    return out


# ---------------------------------------------------------------- groups


def categorize_medical(code: str) -> str:
    key = _norm(code).replace(" ", "")
    if key in MEDICAL_TABLE:
        return MEDICAL_TABLE[key]
    log.warning("unlisted medical condition %r categorized as 'other'", code)
    return "other"


def medical_multi_hot(codes) -> np.ndarray:
    v = np.zeros(len(MEDICAL_CATEGORIES))
    for c in _split_codes(codes):
        v[MEDICAL_CATEGORIES.index(categorize_medical(c))] = 1.0
    return v


def smoking_category(raw: str) -> str:
    key = _SMOKING_LOOKUP.get(_norm(raw))
    if key is None:
        raise UnknownCategory(f"unrecognized smoking status {raw!r}")
    return _SMOKING_MERGE.get(key, key)


def encode_smoking(raw: str) -> np.ndarray:
    v = np.zeros(len(SMOKING))
    v[SMOKING.index(smoking_category(raw))] = 1.0
    return v


def encode_gender(raw: str) -> np.ndarray:
    g = _GENDER_LOOKUP.get(_norm(raw))
    if g is None:
        raise UnknownCategory(f"unrecognized gender {raw!r}")
    v = np.zeros(len(GENDERS))
    v[GENDERS.index(g)] = 1.0
    return v


def parse_yes_no(raw) -> int:
    t = _norm(raw)
    if t in _YES:
        return 1
    if t in _NO:
        return 0
    raise UnknownCategory(f"expected yes/no, got {raw!r}")


def parse_label(raw) -> int:
    if raw is None or _norm(raw) == "":
        raise MissingLabel("record has no covid_test value")
    t = _norm(raw)
    if t in _POSITIVE:
        return 1
    if t in _NEGATIVE:
        return 0
    raise UnknownCategory(f"unrecognized covid_test value {raw!r}")


_RANGE = re.compile(r"^(\d+(?:\.\d+)?)\s*-\s*(\d+(?:\.\d+)?)$")
_OPEN = re.compile(r"^(\d+(?:\.\d+)?)\s*[+-]$")
_EXACT = re.compile(r"^\d+(?:\.\d+)?$")


def parse_age(raw) -> float | None:
    """Age midpoint in years; ``None`` for "prefer not to say".

    "40-49" gives 44.5. An open range such as "90-" or "90+" gives its
    lower bound.
    """
    t = _norm(raw)
    if t in ("pnts", "prefer not to say"):
        return None
    if m := _RANGE.match(t):
        lo, hi = float(m.group(1)), float(m.group(2))
        if hi < lo:
            raise UnparseableAge(f"inverted age range {raw!r}")
        return (lo + hi) / 2.0
    if m := _OPEN.match(t):
        return float(m.group(1))
    if _EXACT.match(t):
        return float(t)
    raise UnparseableAge(f"cannot parse age {raw!r}")


# ---------------------------------------------------------------- schema


@dataclass(frozen=True)
class EncodingSchema:
    symptoms: tuple
    age_min: float
    age_max: float
    age_mean: float
    schema_version: int = SCHEMA_VERSION

    @property
    def columns(self) -> list:
        cols = [f"gender_{g}" for g in GENDERS]
        cols += [f"medical_{m}" for m in MEDICAL_CATEGORIES]
        cols += [f"smoking_{s}" for s in SMOKING]
        cols += [f"symptom_{s}" for s in self.symptoms]
        return cols + ["age", "hospitalized"]

    @property
    def width(self) -> int:
        return len(self.columns)

    def normalize_age(self, years: float) -> float:
        span = self.age_max - self.age_min
        if span <= 0:
            return 0.0
        # test-split ages outside the training bounds are clipped to keep [0, 1]
        return float(np.clip((years - self.age_min) / span, 0.0, 1.0))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["symptoms"] = list(self.symptoms)
        d["columns"] = self.columns
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EncodingSchema":
        return cls(
            symptoms=tuple(d["symptoms"]),
            age_min=d["age_min"],
            age_max=d["age_max"],
            age_mean=d["age_mean"],
            schema_version=d.get("schema_version", SCHEMA_VERSION),
        )


def symptom_key(code: str) -> str:
    return _norm(code).replace(" ", "")


def fit_schema(train_records) -> EncodingSchema:
    """Freeze vocabulary and age bounds from training rows.

    Labels are never read. Test rows must never be passed here.
    """
    vocab = set()
    ages = []
    for rec in train_records:
        vocab.update(symptom_key(s) for s in _split_codes(rec.symptoms))
        a = parse_age(rec.age_field)
        if a is not None:
            ages.append(a)
    if not ages:
        raise DataError("no parseable ages in training rows")
    ages = np.array(sorted(ages))
    return EncodingSchema(
        symptoms=tuple(sorted(vocab)),
        age_min=float(ages.min()),
        age_max=float(ages.max()),
        age_mean=float(ages.mean()),
    )


def encode_age(raw, label: int, schema: EncodingSchema) -> float | None:
    """Normalized age, or ``None`` when the row must be dropped.

    "pnts" with a negative label rejects the row; with a positive label the
    training mean age is imputed.
    """
    years = parse_age(raw)
    if years is None:
        if label == 0:
            return None
        years = schema.age_mean
    return schema.normalize_age(years)


def encode_record(rec: ParticipantRecord, schema: EncodingSchema) -> EncodedRecord | None:
    """Encode one record, returning ``None`` if the age rule rejects it."""
    label = parse_label(rec.covid_test)
    age = encode_age(rec.age_field, label, schema)
    if age is None:
        return None
    sym = np.zeros(len(schema.symptoms))
    index = {s: i for i, s in enumerate(schema.symptoms)}
    for s in _split_codes(rec.symptoms):
        k = symptom_key(s)
        if k in index:
            sym[index[k]] = 1.0
        else:
            warnings.warn(f"symptom {s!r} not in frozen schema; ignored", SchemaMismatch)
    vec = np.concatenate([
        encode_gender(rec.gender),
        medical_multi_hot(rec.medical_history),
        encode_smoking(rec.smoking),
        sym,
        [age, float(parse_yes_no(rec.hospitalized))],
    ])
    return EncodedRecord(vec, label, schema.schema_version)


# ---------------------------------------------------------------- manifest IO

MANIFEST_COLUMNS = (
    "participant_id", "audio_path", "gender", "age", "medical_history",
    "smoking", "symptoms", "hospitalized", "covid_test",
)


def record_from_row(row: dict, row_index: int = 0) -> ParticipantRecord:
    missing = [c for c in MANIFEST_COLUMNS if c not in row]
    if missing:
        raise DataError(f"manifest row {row_index} lacks columns {missing}")
    pid = row["participant_id"].strip()
    audio = row["audio_path"].strip()
    sid = (row.get("sample_id") or "").strip()
    if not sid:
        sid = f"{pid}_{Path(audio).stem}" if audio else f"{pid}_{row_index}"
    return ParticipantRecord(
        participant_id=pid,
        gender=row["gender"],
        age_field=row["age"],
        medical_history=_split_codes(row["medical_history"]),
        smoking=row["smoking"],
        symptoms=_split_codes(row["symptoms"]),
        hospitalized=row["hospitalized"],
        covid_test=row["covid_test"],
        sample_id=sid,
        audio_path=audio,
    )


def read_manifest(path) -> list:
    """Parse a manifest CSV; rows without a test result are rejected."""
    records = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.DictReader(fh)):
            rec = record_from_row(row, i)
            parse_label(rec.covid_test)
            records.append(rec)
    seen = set()
    for rec in records:
        if rec.sample_id in seen:
            raise DataError(f"duplicate sample_id {rec.sample_id!r} in manifest")
        seen.add(rec.sample_id)
    return records


def write_manifest(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("sample_id",) + MANIFEST_COLUMNS)
        for r in records:
            w.writerow([
                r.sample_id, r.participant_id, r.audio_path, r.gender, r.age_field,
                ";".join(r.medical_history), r.smoking, ";".join(r.symptoms),
                r.hospitalized, r.covid_test,
            ])


def write_encoded_csv(path, schema: EncodingSchema, rows) -> None:
    """``rows`` is an iterable of (sample_id, split, EncodedRecord)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample_id", "split", "label"] + schema.columns)
        for sid, split, enc in rows:
            w.writerow([sid, split, enc.label] + [repr(float(v)) for v in enc.features])


def read_encoded_csv(path):
    """Returns (columns, sample_ids, splits, X, y)."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        ids, splits, X, y = [], [], [], []
        for row in r:
            ids.append(row[0])
            splits.append(row[1])
            y.append(int(row[2]))
            X.append([float(v) for v in row[3:]])
    return header[3:], ids, splits, np.array(X, dtype=np.float64).reshape(len(ids), -1), np.array(y)
