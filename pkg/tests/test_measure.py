import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from arrowhead import curve, measure
from arrowhead.errors import DomainError, ValidationError
from arrowhead.measure import MeasureModel


@st.composite
def weight_triples(draw):
    a = draw(st.floats(min_value=0.05, max_value=0.9))
    b = 0.05 + draw(st.floats(min_value=0.0, max_value=1.0)) * (0.9 - a)
    return (a, b, 1.0 - a - b)


def test_default_model_is_uniform():
    model = measure.DEFAULT_MODEL
    assert model.is_uniform
    assert model.total_mass == pytest.approx(1.0)
    assert measure.measure_weights() == (1 / 3, 1 / 3, 1 / 3)


@pytest.mark.parametrize(
    "weights",
    [(0.5, 0.5), (0.5, 0.6, -0.1), (0.0, 0.5, 0.5), (0.3, 0.3, 0.3), (1.0, 0.0, 0.0)],
)
def test_bad_weights_are_rejected(weights):
    with pytest.raises(ValidationError):
        MeasureModel(weights)


def test_unknown_shared_rule():
    with pytest.raises(ValidationError):
        MeasureModel(shared_rule="average")


@given(weight_triples(), st.integers(min_value=1, max_value=6))
def test_masses_sum_to_one(weights, m):
    mu = measure.trapeze_measures(MeasureModel(weights), m)
    assert mu.shape == (3 ** (m - 1),)
    assert math.fsum(mu) == pytest.approx(1.0, abs=1e-12)


@given(weight_triples(), st.integers(min_value=2, max_value=5), st.data())
def test_vectorized_masses_match_ternary_address(weights, m, data):
    model = MeasureModel(weights)
    j = data.draw(st.integers(min_value=1, max_value=3 ** (m - 1)))
    assert measure.trapeze_measures(model, m)[j - 1] == pytest.approx(measure.trapeze_measure(model, m, j), rel=1e-14)


@given(weight_triples(), st.integers(min_value=1, max_value=5))
def test_self_similar_split(weights, m):
    """Each trapeze's mass splits among its three children by the weights."""
    model = MeasureModel(weights)
    parent = measure.trapeze_measures(model, m)
    child = measure.trapeze_measures(model, m + 1).reshape(-1, 3)
    assert np.allclose(child, parent[:, None] * np.asarray(weights)[None, :], rtol=1e-14)


def test_trapeze_measure_index_range():
    with pytest.raises(DomainError):
        measure.trapeze_measure(measure.DEFAULT_MODEL, 2, 4)
    with pytest.raises(DomainError):
        measure.trapeze_measures(measure.DEFAULT_MODEL, 0)


def _integrate_by_loop(m, u, model):
    total = []
    for t in curve.trapeze_decomposition(m):
        avg = sum(u[i - 1] for i in t.vertex_indices) / 4
        total.append(measure.trapeze_measure(model, m, t.index) * avg)
    return math.fsum(total)


@given(weight_triples(), st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=2**32 - 1))
def test_integral_matches_loop_oracle(weights, m, seed):
    model = MeasureModel(weights)
    u = np.random.default_rng(seed).uniform(-1, 1, 3**m + 1)
    assert measure.integrate(m, u, model) == pytest.approx(_integrate_by_loop(m, u, model), abs=1e-14)


@given(st.integers(min_value=1, max_value=6), st.floats(min_value=-5, max_value=5))
def test_integral_of_constant(m, c):
    assert measure.integrate(m, np.full(3**m + 1, c)) == pytest.approx(c, abs=1e-12)


def test_integral_is_linear():
    rng = np.random.default_rng(3)
    u, v = rng.normal(size=(2, 82))
    lhs = measure.integrate(4, 2 * u - 3 * v)
    rhs = 2 * measure.integrate(4, u) - 3 * measure.integrate(4, v)
    assert lhs == pytest.approx(rhs, abs=1e-13)


def test_integrate_checks_shape():
    with pytest.raises(ValidationError):
        measure.integrate(2, np.ones(5))


@pytest.mark.parametrize("m", range(1, 7))
def test_spline_integrals_under_uniform_weights(m):
    si = measure.spline_integrals(m)
    assert si.shape == (3**m - 1,)
    assert np.allclose(si, 3.0 ** (1 - m) / 4, rtol=0, atol=1e-15)


def test_shared_rules_differ_only_at_shared_vertices():
    model = MeasureModel(shared_rule="additive")
    halved = measure.spline_integrals(3)
    additive = measure.spline_integrals(3, model)
    shared = np.arange(2, halved.size, 3)
    assert np.allclose(additive[shared], 2 * halved[shared])
    other = np.setdiff1d(np.arange(halved.size), shared)
    assert np.array_equal(additive[other], halved[other])


@given(weight_triples(), st.integers(min_value=2, max_value=5), st.data())
def test_scalar_and_vector_spline_integrals_agree(weights, m, data):
    model = MeasureModel(weights, data.draw(st.sampled_from(measure.SHARED_RULES)))
    idx = data.draw(st.integers(min_value=2, max_value=3**m))
    assert measure.spline_integral(m, idx, model) == pytest.approx(measure.spline_integrals(m, model)[idx - 2], rel=1e-14)


def test_spline_integral_endpoints():
    for idx in (1, 10, 11):
        with pytest.raises(DomainError):
            measure.spline_integral(2, idx)
