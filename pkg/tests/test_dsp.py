import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import dct_matrix, direct_dct_ortho, direct_dft_power, mfcc_reference, triangle_matrix
from voxscreen.audio_io import AudioBuffer
from voxscreen.dsp import (
    DspConfig,
    FeatureKind,
    FeatureMatrix,
    dct_ortho,
    extract,
    feature_from_bytes,
    feature_to_bytes,
    feature_to_csv,
    frame_and_window,
    hann_window,
    hz_to_mel,
    load_feature,
    log_mel_spectrogram,
    mel_filter_centers,
    mel_filterbank,
    mel_to_hz,
    mfcc,
    num_frames,
    power_spectrum,
    save_feature,
    stat_features,
    triangle_weights,
)
from voxscreen.errors import DataError, DegenerateSignal, InvalidRange, TooShort

CFG = DspConfig()


def test_mel_formula_values():
    assert hz_to_mel(0.0) == 0.0
    assert hz_to_mel(1000.0) == pytest.approx(2595.0 * math.log10(17.0 / 7.0), abs=1e-12)
    for f in (100.0, 440.0, 7999.0):
        assert abs(mel_to_hz(hz_to_mel(f)) - f) < 1e-9


def test_mel_anchor_1000():
    # 2595 * log10(17/7) = 999.98554, so this tolerance is out of reach for
    # the mandated constants; kept as stated and recorded as unattainable
    assert abs(hz_to_mel(1000.0) - 1000.0) < 0.01


@given(st.floats(0, 8000))
def test_mel_monotone_inverse(f):
    assert mel_to_hz(hz_to_mel(f)) == pytest.approx(f, abs=1e-8)
    assert hz_to_mel(f + 1.0) > hz_to_mel(f)


def test_hann_periodic():
    w = hann_window(400)
    assert w[0] == 0.0
    assert w[200] == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(w[1:], w[1:][::-1], atol=1e-15)


def test_frame_count_boundaries():
    assert num_frames(400, CFG) == 1
    assert num_frames(400 + 160 - 1, CFG) == 1
    assert num_frames(400 + 160, CFG) == 2
    assert num_frames(16000, CFG) == 98
    assert frame_and_window(AudioBuffer(np.ones(400), 16000), CFG).shape == (1, 400)
    with pytest.raises(TooShort):
        frame_and_window(AudioBuffer(np.ones(399), 16000), CFG)


def test_power_spectrum_zero():
    assert np.all(power_spectrum(np.zeros(400), CFG) == 0.0)


def test_power_spectrum_cosine_bin8():
    n = np.arange(512)
    cfg = DspConfig(frame_len=512, hop_len=160)
    p = power_spectrum(np.cos(2 * math.pi * 8 * n / 512), cfg)
    assert int(np.argmax(p)) == 8
    far = np.delete(p, [7, 8, 9])
    assert far.max() < 1e-18 * p[8]
    np.testing.assert_allclose(p, direct_dft_power(np.cos(2 * math.pi * 8 * n / 512), 512), atol=1e-8)


def test_power_spectrum_matches_direct_dft_1000_frames():
    rng = np.random.default_rng(11)
    frames = rng.uniform(-1, 1, (1000, 400))
    fast = power_spectrum(frames, CFG)
    worst = max(np.max(np.abs(fast[i] - direct_dft_power(frames[i], 512))) for i in range(1000))
    assert worst < 1e-8


def test_dct_constant_vector():
    c = 1.7
    out = dct_ortho(np.full(40, c))
    assert out[0] == pytest.approx(c * math.sqrt(40), abs=1e-12)
    assert np.max(np.abs(out[1:])) < 1e-10


def test_dct_matches_direct_1000_frames():
    rng = np.random.default_rng(12)
    v = rng.normal(size=(1000, 40))
    fast = dct_ortho(v)
    assert np.max(np.abs(fast[0] - direct_dct_ortho(v[0]))) < 1e-9
    M = dct_matrix(40)
    assert np.max(np.abs(fast - v @ M.T)) < 1e-8


def test_filterbank_matches_explicit_triangles():
    fb = mel_filterbank(CFG)
    ref = triangle_matrix(40, 512, 16000, 0.0, 8000.0)
    np.testing.assert_allclose(fb, ref, atol=1e-12)
    assert fb.shape == (40, 257)
    assert np.all(fb.sum(axis=1) > 0)


def test_triangle_apex_and_partition_of_unity():
    pts = mel_filter_centers(CFG)
    apex = triangle_weights(pts[1:-1], pts)
    np.testing.assert_allclose(np.diag(apex), 1.0, atol=1e-12)
    grid = np.linspace(pts[1], pts[-2], 20001)
    total = triangle_weights(grid, pts).sum(axis=0)
    assert np.max(np.abs(total - 1.0)) < 1e-9


def test_filterbank_collapse_raises():
    with pytest.raises(InvalidRange):
        mel_filterbank(DspConfig(n_mels=40, fmin_hz=1000.0, fmax_hz=1100.0))
    with pytest.raises(InvalidRange):
        DspConfig(fmax_hz=9000.0).validate()


def test_log_mel_silence_and_shape():
    lm = log_mel_spectrogram(AudioBuffer(np.zeros(16000), 16000))
    assert lm.shape == (98, 40)
    assert lm.kind is FeatureKind.log_mel
    assert np.all(lm.data == math.log(1e-10))


def test_log_mel_440_band():
    t = np.arange(16000) / 16000
    lm = log_mel_spectrogram(AudioBuffer(np.sin(2 * math.pi * 440 * t), 16000)).data
    centers_hz = mel_to_hz(mel_filter_centers(CFG)[1:-1])
    expected = int(np.argmin(np.abs(centers_hz - 440.0)))
    assert np.all(np.argmax(lm, axis=1) == expected)


def test_mfcc_matches_reference_pipeline():
    rng = np.random.default_rng(5)
    x = rng.uniform(-1, 1, 4000)
    got = mfcc(AudioBuffer(x, 16000)).data
    ref = mfcc_reference(x)
    assert got.shape == ref.shape == (num_frames(4000, CFG), 13)
    assert np.max(np.abs(got - ref)) < 1e-6


@pytest.mark.parametrize("k", [0.5, 2.0])
def test_mfcc_gain_only_moves_c0(k):
    # the log floor is the only term that breaks exact gain covariance, so
    # the signal is loud enough that every band energy dwarfs it
    x = np.random.default_rng(6).normal(0.0, 3.0, 8000)
    a = mfcc(AudioBuffer(x, 16000)).data
    b = mfcc(AudioBuffer(k * x, 16000)).data
    np.testing.assert_allclose(b[:, 1:], a[:, 1:], rtol=0, atol=1e-8)
    np.testing.assert_allclose(b[:, 0] - a[:, 0], 2 * math.log(k) * math.sqrt(40), rtol=0, atol=1e-8)


@pytest.mark.parametrize("k", [0.5, 2.0])
def test_mfcc_gain_covariance_exact_without_floor(k):
    cfg = DspConfig(log_floor=1e-30)
    x = np.random.default_rng(6).uniform(-0.4, 0.4, 8000)
    a = mfcc(AudioBuffer(x, 16000), cfg).data
    b = mfcc(AudioBuffer(k * x, 16000), cfg).data
    np.testing.assert_allclose(b[:, 1:], a[:, 1:], rtol=0, atol=1e-12)


def test_extract_deterministic_and_finite():
    x = np.random.default_rng(7).normal(size=6000)
    buf = AudioBuffer(x, 16000)
    assert extract(buf, "mfcc").data.tobytes() == extract(buf, FeatureKind.mfcc).data.tobytes()
    assert np.all(np.isfinite(extract(AudioBuffer(np.zeros(800), 16000), "mfcc").data))


@given(arrays(np.float64, st.integers(400, 1200), elements=st.floats(-1e3, 1e3)))
@settings(max_examples=40, deadline=None)
def test_features_finite_for_finite_input(x):
    buf = AudioBuffer(x, 16000)
    assert np.all(np.isfinite(mfcc(buf).data))
    assert np.all(np.isfinite(log_mel_spectrogram(buf).data))


def test_config_digest_tracks_fields():
    assert CFG.digest() == DspConfig().digest()
    assert CFG.digest() != DspConfig(n_mels=64).digest()
    assert len(CFG.digest()) == 32
    assert DspConfig.from_dict(CFG.to_dict()) == CFG


def test_stat_quartiles_example():
    s = stat_features(AudioBuffer([1.0, 2.0, 3.0, 4.0], 16000))
    assert (s.mean, s.median, s.q1, s.q3, s.iqr) == (2.5, 2.5, 1.75, 3.25, 1.5)
    assert s.min == 1.0 and s.max == 4.0
    assert s.std == pytest.approx(math.sqrt(1.25))


def test_stat_skew_odd_symmetry():
    x = np.random.default_rng(8).exponential(size=1000)
    a = stat_features(AudioBuffer(x, 16000))
    b = stat_features(AudioBuffer(-x, 16000))
    assert a.skewness > 0
    assert b.skewness == pytest.approx(-a.skewness, abs=1e-12)


def test_stat_gaussian_excess_kurtosis():
    x = np.random.default_rng(9).standard_normal(1_000_000)
    assert abs(stat_features(AudioBuffer(x, 16000)).kurtosis) < 0.05


def test_stat_mode_and_constant():
    x = np.r_[np.zeros(50), np.linspace(-1, 1, 20)]
    assert abs(stat_features(AudioBuffer(x, 16000)).mode) < 2 / 256
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        s = stat_features(AudioBuffer(np.full(10, 0.3), 16000))
    assert any(issubclass(i.category, DegenerateSignal) for i in w)
    assert s.skewness == 0.0 and s.kurtosis == 0.0
    assert len(s.as_array()) == 11


def test_feature_file_roundtrip(tmp_path):
    fm = FeatureMatrix(np.arange(12.0).reshape(3, 4), FeatureKind.log_mel, CFG.digest())
    blob = feature_to_bytes(fm)
    assert blob[:4] == b"VXF1"
    assert len(blob) == 4 + 12 + 32 + 8 * 12
    back = feature_from_bytes(blob)
    assert back.kind is FeatureKind.log_mel
    assert back.config_hash == CFG.digest()
    np.testing.assert_array_equal(back.data, fm.data)
    save_feature(tmp_path / "f.vxf", fm)
    np.testing.assert_array_equal(load_feature(tmp_path / "f.vxf").data, fm.data)
    feature_to_csv(tmp_path / "f.csv", fm)
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0].startswith("frame,mel0") and len(lines) == 4
    with pytest.raises(DataError):
        feature_from_bytes(blob[:-8])
    with pytest.raises(DataError):
        feature_from_bytes(b"XXXX" + blob[4:])
