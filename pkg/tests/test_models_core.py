import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import numerical_grad, rel_error
from voxscreen.errors import ShapeMismatch, SingleClass
from voxscreen.models.core import (
    AdamState,
    adam_step,
    bce_loss,
    clip_by_global_norm,
    global_norm,
    sigmoid,
    softmax,
    softmax_cross_entropy,
)
from voxscreen.models.logreg import LogRegModel, logreg_loss_grad, logreg_train


def test_sigmoid_stable_extremes():
    s = sigmoid(np.array([-1000.0, 0.0, 1000.0]))
    np.testing.assert_array_equal(s, [0.0, 0.5, 1.0])
    assert np.all(np.isfinite(s))


@given(arrays(np.float64, (5, 2), elements=st.floats(-300, 300)))
def test_softmax_sums_to_one(z):
    np.testing.assert_allclose(softmax(z).sum(axis=1), 1.0, atol=1e-12)


def test_bce_perfect_prediction():
    y = np.array([0.0, 1.0, 1.0, 0.0])
    loss, _ = bce_loss(y, y)
    assert loss == pytest.approx(0.0, abs=1e-11)


def test_bce_max_entropy():
    y = np.array([0, 1, 1, 1, 0])
    loss, _ = bce_loss(np.full(5, 0.5), y)
    assert loss == pytest.approx(math.log(2), abs=1e-15)
    loss2, _ = bce_loss(np.full((5, 2), 0.5), y)
    assert loss2 == pytest.approx(math.log(2), abs=1e-15)


@pytest.mark.parametrize("two_col", [False, True])
def test_bce_gradient_finite_differences(two_col):
    rng = np.random.default_rng(0)
    y = rng.integers(0, 2, 12).astype(float)
    p = rng.uniform(0.05, 0.95, 12)
    if two_col:
        p = np.column_stack([1 - p, p])
    _, g = bce_loss(p, y)
    num = numerical_grad(lambda: bce_loss(p, y)[0], p, h=1e-7)
    assert rel_error(g, num) < 1e-6


def test_bce_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        bce_loss(np.ones(3) * 0.5, np.ones(4))


def test_softmax_cross_entropy_gradient():
    rng = np.random.default_rng(1)
    z = rng.normal(size=(6, 2))
    y = rng.integers(0, 2, 6)
    loss, probs, g = softmax_cross_entropy(z, y)
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)
    ref, _ = bce_loss(probs, y)
    assert loss == pytest.approx(ref, abs=1e-12)
    num = numerical_grad(lambda: softmax_cross_entropy(z, y)[0], z)
    assert rel_error(g, num) < 1e-6


def test_adam_zero_gradient_is_fixed_point():
    p = {"w": np.array([1.0, -2.0])}
    st_ = AdamState(lr=0.1)
    for _ in range(3):
        adam_step(st_, p, {"w": np.zeros(2)})
    np.testing.assert_array_equal(p["w"], [1.0, -2.0])


@pytest.mark.parametrize("g", [3.0, -3.0])
def test_adam_first_step_magnitude_is_lr(g):
    p = {"x": np.array([0.7])}
    st_ = AdamState()
    adam_step(st_, p, {"x": np.array([g])})
    assert abs(abs(p["x"][0] - 0.7) - st_.lr) < 1e-12
    assert np.sign(0.7 - p["x"][0]) == np.sign(g)


def test_adam_quadratic_bowl():
    p = {"x": np.array([5.0])}
    st_ = AdamState(lr=0.01)
    for _ in range(10_000):
        adam_step(st_, p, {"x": 2.0 * p["x"]})
    assert abs(p["x"][0]) < 0.1


def test_global_norm_clip():
    g = {"a": np.array([3.0, 0.0]), "b": np.array([[4.0]])}
    assert global_norm(g) == 5.0
    before = clip_by_global_norm(g, 1.0)
    assert before == 5.0
    assert global_norm(g) == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(g["a"], [0.6, 0.0])
    g2 = {"a": np.array([0.1])}
    clip_by_global_norm(g2, 5.0)
    assert g2["a"][0] == 0.1


# ---------------------------------------------------------------- logistic regression


def test_logreg_separable_1d():
    X = np.array([[-1.0], [1.0]])
    y = np.array([0, 1])
    m = logreg_train(X, y, epochs=500, lr=0.5)
    assert m.decision_function(np.array([[-1e-3]]))[0] < 0 < m.decision_function(np.array([[1e-3]]))[0]
    assert abs(m.bias) < 1e-12
    np.testing.assert_array_equal(m.predict_proba(X) >= 0.5, [False, True])


def test_logreg_duplicate_column_symmetry():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(40, 1))
    X = np.hstack([a, a, rng.normal(size=(40, 1))])
    y = (a[:, 0] + 0.3 * rng.normal(size=40) > 0).astype(int)
    m = logreg_train(X, y, epochs=300)
    assert m.weights[0] == m.weights[1]


def test_logreg_zero_weights_is_half():
    m = LogRegModel(np.zeros(4), 0.0)
    np.testing.assert_array_equal(m.predict_proba(np.random.default_rng(0).normal(size=(7, 4))), 0.5)


def test_logreg_probability_monotone_in_score():
    rng = np.random.default_rng(3)
    m = LogRegModel(rng.normal(size=3), 0.2)
    X = rng.normal(size=(200, 3))
    order = np.argsort(m.decision_function(X))
    assert np.all(np.diff(m.predict_proba(X)[order]) >= 0)


@pytest.mark.parametrize("l2", [0.0, 0.3])
def test_logreg_gradient_finite_differences(l2):
    rng = np.random.default_rng(4)
    X = rng.normal(size=(25, 5))
    y = rng.integers(0, 2, 25).astype(float)
    w = rng.normal(size=5)
    b = np.array([0.4])
    _, gw, gb = logreg_loss_grad(w, b[0], X, y, l2)
    nw = numerical_grad(lambda: logreg_loss_grad(w, b[0], X, y, l2)[0], w)
    nb = numerical_grad(lambda: logreg_loss_grad(w, b[0], X, y, l2)[0], b)
    assert rel_error(gw, nw) < 1e-6
    assert rel_error(np.array([gb]), nb) < 1e-6


def test_logreg_single_class_and_history():
    with pytest.raises(SingleClass):
        logreg_train(np.ones((3, 2)), np.zeros(3))
    hist = []
    logreg_train(np.array([[0.0], [1.0]]), np.array([0, 1]), epochs=5, history=hist)
    assert [h[0] for h in hist] == list(range(5))
    assert hist[0][1] == pytest.approx(math.log(2))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_logreg_deterministic(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(20, 3))
    y = np.r_[np.zeros(10), np.ones(10)]
    a = logreg_train(X, y, epochs=50)
    b = logreg_train(X, y, epochs=50)
    assert a.weights.tobytes() == b.weights.tobytes() and a.bias == b.bias
