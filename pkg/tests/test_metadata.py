import csv
import logging
import random
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from voxscreen.errors import DataError, MissingLabel, SchemaMismatch, UnknownCategory, UnparseableAge
from voxscreen.metadata import (
    GENDERS,
    MEDICAL_CATEGORIES,
    SMOKING,
    EncodingSchema,
    ParticipantRecord,
    categorize_medical,
    encode_age,
    encode_gender,
    encode_record,
    encode_smoking,
    fit_schema,
    medical_multi_hot,
    parse_age,
    parse_label,
    parse_yes_no,
    read_encoded_csv,
    read_manifest,
    smoking_category,
    write_encoded_csv,
    write_manifest,
)

# Disease -> category rows exactly as printed in the categorization table.
TABLE_ROWS = [
    ("Hpb", "high_blood_pressure"),
    ("Asthma", "pulmonary"),
    ("Pnts", "other"),
    ("Longterm", "other"),
    ("Lung", "pulmonary"),
    ("Heart", "cardiovascular"),
    ("Valvular", "cardiovascular"),
    ("Cancer", "cancer"),
    ("Diabetes", "diabetes"),
    ("Copd", "pulmonary"),
    ("Hiv", "other"),
    ("otherHeart", "cardiovascular"),
    ("Cystic", "pulmonary"),
    ("Angina", "other"),
]

N_GENDER, N_MED, N_SMOKE = len(GENDERS), len(MEDICAL_CATEGORIES), len(SMOKING)


def rec(**kw):
    base = dict(participant_id="p1", gender="male", age_field="40-49", medical_history=[],
                smoking="never", symptoms=[], hospitalized="no", covid_test="negative",
                sample_id="s1", audio_path="a.wav")
    base.update(kw)
    return ParticipantRecord(**base)


@pytest.mark.parametrize("code,category", TABLE_ROWS)
def test_table_categorization(code, category):
    assert categorize_medical(code) == category
    assert categorize_medical(code.lower()) == category


def test_app_code_for_blood_pressure():
    assert categorize_medical("hbp") == "high_blood_pressure"


def test_unlisted_condition_goes_to_other_with_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="voxscreen.metadata"):
        assert categorize_medical("unlisted_xyz") == "other"
    assert "unlisted_xyz" in caplog.text


def test_medical_multi_hot_example():
    v = medical_multi_hot(["hbp", "diabetes", "heart"])
    expected = np.zeros(N_MED)
    for c in ("high_blood_pressure", "diabetes", "cardiovascular"):
        expected[MEDICAL_CATEGORIES.index(c)] = 1
    np.testing.assert_array_equal(v, expected)
    np.testing.assert_array_equal(medical_multi_hot("none"), np.zeros(N_MED))
    np.testing.assert_array_equal(medical_multi_hot(["asthma", "copd"]),
                                  np.eye(N_MED)[MEDICAL_CATEGORIES.index("pulmonary")])


@pytest.mark.parametrize("raw,category", [
    ("ltOnce", "non_smoker"),
    ("ItOnce", "non_smoker"),
    ("smoked once", "non_smoker"),
    ("never", "non_smoker"),
    ("non-smoker", "non_smoker"),
    ("21+ cigarettes per day", "11_plus_per_day"),
    ("21+", "11_plus_per_day"),
    ("11-20 cigarettes per day", "11_plus_per_day"),
    ("11to20", "11_plus_per_day"),
    ("1-10 cigarettes per day", "1_10_per_day"),
    ("ex-smoker", "ex_smoker"),
    ("prefer not to say", "prefer_not_to_say"),
])
def test_smoking_merges(raw, category):
    assert smoking_category(raw) == category
    v = encode_smoking(raw)
    assert v.sum() == 1 and v[SMOKING.index(category)] == 1


def test_smoking_unknown():
    with pytest.raises(UnknownCategory):
        smoking_category("pipe")


def test_gender_one_hot():
    np.testing.assert_array_equal(encode_gender("Female"), [1, 0, 0])
    np.testing.assert_array_equal(encode_gender("male"), [0, 1, 0])
    np.testing.assert_array_equal(encode_gender("pnts"), [0, 0, 1])
    with pytest.raises(UnknownCategory):
        encode_gender("?")


def test_age_parsing():
    assert parse_age("40-49") == 44.5
    assert parse_age("16-19") == 17.5
    assert parse_age("90-") == 90.0
    assert parse_age("33") == 33.0
    assert parse_age("pnts") is None
    with pytest.raises(UnparseableAge):
        parse_age("forty")
    with pytest.raises(UnparseableAge):
        parse_age("50-40")


def test_age_min_max_normalization():
    recs = [rec(age_field="20"), rec(age_field="45"), rec(age_field="70")]
    schema = fit_schema(recs)
    assert [schema.normalize_age(a) for a in (20, 45, 70)] == [0.0, 0.5, 1.0]
    assert schema.normalize_age(90) == 1.0 and schema.normalize_age(5) == 0.0


def test_pnts_age_rules():
    schema = fit_schema([rec(age_field="20-29"), rec(age_field="60-69")])
    assert encode_age("pnts", 0, schema) is None
    assert encode_age("pnts", 1, schema) == pytest.approx(0.5)
    assert encode_record(rec(age_field="pnts", covid_test="negative"), schema) is None
    assert encode_record(rec(age_field="pnts", covid_test="positive"), schema) is not None


def test_symptom_multi_hot_example():
    train = [rec(symptoms=["drycough", "shortbreath"]), rec(symptoms=["headache", "sorethroat"])]
    schema = fit_schema(train)
    enc = encode_record(rec(symptoms=["drycough", "shortbreath"]), schema)
    block = enc.features[N_GENDER + N_MED + N_SMOKE: N_GENDER + N_MED + N_SMOKE + len(schema.symptoms)]
    expected = [1.0 if s in ("drycough", "shortbreath") else 0.0 for s in schema.symptoms]
    np.testing.assert_array_equal(block, expected)
    assert block.sum() == 2


def test_no_symptoms_block_zero_and_groups_sum_to_one():
    schema = fit_schema([rec(symptoms=["drycough"]), rec(symptoms=["wetcough"])])
    enc = encode_record(rec(symptoms=[]), schema)
    f = enc.features
    assert f[:N_GENDER].sum() == 1
    assert f[N_GENDER + N_MED: N_GENDER + N_MED + N_SMOKE].sum() == 1
    s0 = N_GENDER + N_MED + N_SMOKE
    assert np.all(f[s0: s0 + len(schema.symptoms)] == 0)


def test_hospitalized_and_label():
    schema = fit_schema([rec()])
    enc = encode_record(rec(hospitalized="yes", covid_test="positive"), schema)
    assert enc.features[-1] == 1.0
    assert enc.label == 1
    assert parse_yes_no("no") == 0
    assert parse_label("negative") == 0
    with pytest.raises(MissingLabel):
        parse_label("")
    with pytest.raises(MissingLabel):
        encode_record(rec(covid_test=None), schema)


def test_column_order_frozen():
    schema = fit_schema([rec(symptoms=["b", "a"])])
    cols = schema.columns
    assert cols[:3] == ["gender_female", "gender_male", "gender_other"]
    assert cols[3:9] == [f"medical_{m}" for m in MEDICAL_CATEGORIES]
    assert cols[9:14] == [f"smoking_{s}" for s in SMOKING]
    assert cols[14:16] == ["symptom_a", "symptom_b"]
    assert cols[-2:] == ["age", "hospitalized"]
    assert schema.width == len(cols) == 18


def test_unknown_symptom_warns_and_is_ignored():
    schema = fit_schema([rec(symptoms=["drycough"])])
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        enc = encode_record(rec(symptoms=["drycough", "fever"]), schema)
    assert any(issubclass(i.category, SchemaMismatch) for i in w)
    assert enc.features.shape == (schema.width,)


def test_schema_fit_ignores_order_and_labels():
    rows = [rec(age_field=a, symptoms=s, covid_test=t) for a, s, t in [
        ("20-29", ["drycough"], "positive"), ("50-59", [], "negative"),
        ("70-79", ["headache"], "negative"), ("pnts", ["wetcough"], "positive"),
    ]]
    ref = fit_schema(rows)
    shuffled = rows[:]
    random.Random(4).shuffle(shuffled)
    assert fit_schema(shuffled) == ref
    relabeled = [rec(age_field=r.age_field, symptoms=r.symptoms, covid_test=None) for r in rows]
    assert fit_schema(relabeled) == ref
    assert EncodingSchema.from_dict(ref.to_dict()) == ref


_field = st.fixed_dictionaries({
    "gender": st.sampled_from(["female", "male", "other"]),
    "age_field": st.sampled_from(["20-29", "40-49", "60-69"]),
    "medical_history": st.lists(st.sampled_from(["hbp", "asthma", "cancer", "heart"]), unique=True),
    "smoking": st.sampled_from(["never", "ex", "1to10", "21+", "pnts"]),
    "symptoms": st.lists(st.sampled_from(["drycough", "headache", "shortbreath"]), unique=True),
    "hospitalized": st.sampled_from(["yes", "no"]),
})

_SCHEMA = fit_schema([rec(age_field="20-29", symptoms=["drycough", "headache", "shortbreath"]),
                      rec(age_field="60-69")])


def _canon(d):
    med = {categorize_medical(m) for m in d["medical_history"]}
    return (d["gender"], d["age_field"], frozenset(med), smoking_category(d["smoking"]),
            frozenset(d["symptoms"]), d["hospitalized"])


@given(_field, _field)
def test_encoding_injective_and_constant_width(a, b):
    ea = encode_record(rec(**a), _SCHEMA)
    eb = encode_record(rec(**b), _SCHEMA)
    assert ea.features.shape == eb.features.shape == (_SCHEMA.width,)
    if _canon(a) != _canon(b):
        assert not np.array_equal(ea.features, eb.features)


def test_manifest_and_encoded_roundtrip(tmp_path):
    recs = [rec(sample_id=f"s{i}", participant_id=f"p{i}", symptoms=["drycough"] if i % 2 else [],
                covid_test="positive" if i % 2 else "negative") for i in range(4)]
    write_manifest(tmp_path / "m.csv", recs)
    back = read_manifest(tmp_path / "m.csv")
    assert [r.sample_id for r in back] == ["s0", "s1", "s2", "s3"]
    assert back[1].symptoms == ["drycough"] and back[0].symptoms == []
    schema = fit_schema(back)
    rows = [(r.sample_id, "train", encode_record(r, schema)) for r in back]
    write_encoded_csv(tmp_path / "e.csv", schema, rows)
    cols, ids, splits, X, y = read_encoded_csv(tmp_path / "e.csv")
    assert cols == schema.columns
    assert ids == ["s0", "s1", "s2", "s3"] and splits == ["train"] * 4
    np.testing.assert_array_equal(X, np.stack([r[2].features for r in rows]))
    np.testing.assert_array_equal(y, [0, 1, 0, 1])


def test_manifest_rejects_missing_label_and_duplicates(tmp_path):
    write_manifest(tmp_path / "m.csv", [rec(sample_id="a"), rec(sample_id="a")])
    with pytest.raises(DataError):
        read_manifest(tmp_path / "m.csv")
    p = tmp_path / "n.csv"
    write_manifest(p, [rec(sample_id="a")])
    rows = list(csv.reader(p.open()))
    rows[1][-1] = ""
    with p.open("w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    with pytest.raises(MissingLabel):
        read_manifest(p)
