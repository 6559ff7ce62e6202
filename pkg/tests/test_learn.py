import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_stump_choice, brute_stump_errors

from ovorank.errors import ParameterError, ValidationError
from ovorank.learn import (
    BinaryView,
    LinearBinaryModel,
    Stump,
    binary_view,
    empirical_binary_risk,
    fit_linear,
    fit_stump_erm,
    logistic_loss,
    model_from_dict,
)
from ovorank.synth import LabeledDataset


def view(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    return BinaryView(x, y, (1, 2), int(np.sum(y == -1)), int(np.sum(y == 1)))


class Negated:
    def __init__(self, clf):
        self.clf = clf

    def predict(self, x):
        return -self.clf.predict(x)


views = st.integers(0, 50).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 12).map(lambda v: v / 12), min_size=n, max_size=n),
        st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n),
    )
)


def test_binary_view_examples():
    d = LabeledDataset(np.array([0.1, 0.2, 0.3, 0.4]), np.array([1, 1, 2, 3]), 3)
    v = binary_view(d, 1, 2)
    assert len(v) == 3 and v.y.tolist() == [-1, -1, 1]
    assert (v.n_k, v.n_l) == (2, 1)
    assert len(binary_view(d, 2, 3)) == 2
    with pytest.raises(ParameterError):
        binary_view(d, 2, 1)


def test_binary_views_cover_each_point_k_minus_one_times(rng):
    k = 5
    d = LabeledDataset(rng.random(300), rng.integers(1, k + 1, 300), k)
    seen = np.zeros(300, dtype=int)
    for a in range(1, k + 1):
        for b in range(a + 1, k + 1):
            mask = (d.y == a) | (d.y == b)
            v = binary_view(d, a, b)
            assert np.array_equal(v.x, d.x[mask])
            seen[mask] += 1
    assert np.all(seen == k - 1)


def test_empirical_risk_examples():
    empty = view([], [])
    assert empirical_binary_risk(Stump(0.5, 1), empty) == 0.0
    v = view([0.1, 0.2, 0.8], [-1, -1, 1])
    assert empirical_binary_risk(Stump(0.5, 1), v) == 0.0
    v5 = view([0.1, 0.2, 0.3, 0.4, 0.5], [-1, 1, -1, 1, -1])
    assert empirical_binary_risk(Stump(-math.inf, 1), v5) == pytest.approx(0.6)


def test_stump_predict_sentinels():
    x = np.array([0.0, 0.5, 1.0])
    assert Stump(-math.inf, 1).predict(x).tolist() == [1, 1, 1]
    assert Stump(-math.inf, -1).predict(x).tolist() == [-1, -1, -1]
    assert Stump(math.inf, 1).predict(x).tolist() == [-1, -1, -1]
    assert Stump(math.inf, -1).predict(x).tolist() == [1, 1, 1]
    assert Stump(0.5, 1).predict(x).tolist() == [-1, 1, 1]
    assert Stump(0.5, -1).predict(x).tolist() == [1, 1, -1]


def test_stump_validation():
    with pytest.raises(ParameterError):
        Stump(0.5, 0)
    with pytest.raises(ParameterError):
        Stump(float("nan"), 1)


def test_fit_stump_examples():
    assert fit_stump_erm(view([0.1, 0.2, 0.8], [-1, -1, 1])) == Stump(0.5, 1)
    assert fit_stump_erm(view([0.3, 0.6, 0.9], [1, 1, 1])) == Stump(-math.inf, 1)
    assert fit_stump_erm(view([0.3, 0.6, 0.9], [-1, -1, -1])) == Stump(-math.inf, -1)
    assert fit_stump_erm(view([0.1, 0.2, 0.8], [1, 1, -1])) == Stump(0.5, -1)
    assert fit_stump_erm(view([], [])) == Stump(-math.inf, 1)


def test_fit_stump_adjacent_floats():
    lo = 0.3
    hi = np.nextafter(lo, 1.0)
    for y in ([-1, 1], [1, -1]):
        v = view([lo, hi], y)
        assert empirical_binary_risk(fit_stump_erm(v), v) == 0.0


def test_fit_stump_rejects_non_finite():
    with pytest.raises(ValidationError):
        fit_stump_erm(view([0.1, np.inf], [1, -1]))


@settings(max_examples=300, deadline=None)
@given(views)
def test_fit_stump_is_exact_minimizer(xy):
    x, y = xy
    v = view(x, y)
    s = fit_stump_erm(v)
    errors = int(np.count_nonzero(s.predict(v.x) != v.y))
    assert errors == min(brute_stump_errors(x, y))
    if x:
        err, thr, eps = brute_stump_choice(x, y)
        assert (s.threshold, s.polarity) == (thr, eps)


def test_fit_stump_random_views(rng):
    for _ in range(200):
        n = int(rng.integers(1, 51))
        x = rng.random(n)
        y = rng.choice([-1, 1], n)
        s = fit_stump_erm(view(x, y))
        assert int(np.count_nonzero(s.predict(x) != y)) == min(brute_stump_errors(x, y))


def test_stump_risk_invariant_under_monotone_map(rng):
    for _ in range(100):
        n = int(rng.integers(1, 40))
        x = rng.random(n)
        y = rng.choice([-1, 1], n)
        v, w = view(x, y), view(np.exp(3 * x) + x**3, y)
        assert empirical_binary_risk(fit_stump_erm(v), v) == empirical_binary_risk(fit_stump_erm(w), w)


def test_risk_complement_of_negation(rng):
    for _ in range(100):
        n = int(rng.integers(1, 30))
        v = view(rng.random(n), rng.choice([-1, 1], n))
        for clf in (Stump(float(rng.random()), 1), Stump(0.4, -1), LinearBinaryModel((1.0,), -0.5)):
            r = empirical_binary_risk(clf, v)
            assert 0.0 <= r <= 1.0
            assert r == pytest.approx(1.0 - empirical_binary_risk(Negated(clf), v))


def test_fit_linear_zero_steps():
    v = view([0.1, 0.9], [-1, 1])
    m = fit_linear(v, steps=0)
    assert m.weight == (0.0,) and m.bias == 0.0
    assert m.predict([0.1, 0.5, 0.9]).tolist() == [1, 1, 1]


def test_fit_linear_separable():
    x = np.concatenate([np.linspace(0.0, 0.4, 20), np.linspace(0.6, 1.0, 20)])
    y = np.repeat([-1, 1], 20)
    v = view(x, y)
    m = fit_linear(v, steps=500, step_size=5.0)
    assert empirical_binary_risk(m, v) == 0.0


def test_fit_linear_loss_nonincreasing(rng):
    x = rng.random(80)
    y = np.where(rng.random(80) < x, 1, -1)
    v = view(x, y)
    losses = [logistic_loss(fit_linear(v, steps=s, step_size=0.5), v) for s in range(0, 60)]
    assert all(b <= a + 1e-15 for a, b in zip(losses, losses[1:]))


def test_fit_linear_rejects_bad_input():
    with pytest.raises(ValidationError):
        fit_linear(view([0.1, np.nan], [1, -1]), steps=3)
    with pytest.raises(ParameterError):
        fit_linear(view([0.1], [1]), steps=-1)
    with pytest.raises(ParameterError):
        fit_linear(view([0.1], [1]), step_size=0.0)


def test_fit_linear_empty_view():
    assert fit_linear(view([], []), steps=10).predict([0.3]).tolist() == [1]


def test_model_json_roundtrip():
    for m in (Stump(0.25, -1), Stump(-math.inf, 1), LinearBinaryModel((1.5,), -0.2)):
        assert model_from_dict(m.to_dict()) == m
    assert Stump(0.25, -1).to_dict() == {"stump": {"s": 0.25, "eps": -1}}
    with pytest.raises(ValidationError):
        model_from_dict({"tree": {}})
