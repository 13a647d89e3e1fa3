import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxop.grid import GridFunction, VectorField, make_grid, sample
from maxop.norms import Exponent, level_measure, lp_norm, lq_pointwise, mixed_norm

SPEC = make_grid(2, 1.0, 8)


def _gf(values):
    return GridFunction(SPEC, np.asarray(values, dtype=float))


def test_exponent_validation():
    assert Exponent(math.inf).is_inf
    assert Exponent(1.5).value == 1.5
    for bad in (1.0, 0.5, -2.0):
        with pytest.raises(ValueError):
            Exponent(bad)


def test_lp_norm_constant():
    one = _gf(np.ones(SPEC.shape))
    assert abs(lp_norm(one, 2.0) - 2.0) < 1e-14  # volume of [-1,1]^2 is 4
    assert lp_norm(one, math.inf) == 1.0


def test_lp_norm_vs_resummation(rng):
    vals = rng.standard_normal(SPEC.shape)
    f = _gf(vals)
    for p in (1.5, 2.0, 3.0, 7.0):
        direct = (sum(abs(v) ** p for v in vals.reshape(-1)) * SPEC.cell_volume) ** (1 / p)
        assert abs(lp_norm(f, p) - direct) < 1e-12 * direct


def test_lq_pointwise_basics(rng):
    f = _gf(rng.standard_normal(SPEC.shape))
    single = lq_pointwise(VectorField((f,)), 2.0)
    np.testing.assert_allclose(single.values, np.abs(f.values), rtol=1e-14)
    double = lq_pointwise(VectorField((f, f)), 2.0)
    np.testing.assert_allclose(double.values, math.sqrt(2) * np.abs(f.values), rtol=1e-14)
    with pytest.raises(ValueError):
        lq_pointwise(VectorField((f,)), math.inf)


def test_lq_pointwise_vs_per_node(rng):
    F = VectorField(tuple(_gf(rng.standard_normal(SPEC.shape)) for _ in range(3)))
    got = lq_pointwise(F, 2.5).values
    want = np.zeros(SPEC.shape)
    for i in np.ndindex(SPEC.shape):
        want[i] = sum(abs(m.values[i]) ** 2.5 for m in F) ** (1 / 2.5)
    np.testing.assert_allclose(got, want, rtol=1e-13)


def test_mixed_norm_reductions(rng):
    f = _gf(rng.standard_normal(SPEC.shape))
    assert abs(mixed_norm(VectorField((f,)), 3.0, 2.0) - lp_norm(f, 3.0)) < 1e-13
    F = VectorField((f, _gf(rng.standard_normal(SPEC.shape))))
    c = 3.7
    scaled = VectorField(tuple(_gf(c * m.values) for m in F))
    assert abs(mixed_norm(scaled, 2.0, 3.0) - c * mixed_norm(F, 2.0, 3.0)) < 1e-12


def test_mixed_norm_monotone(rng):
    F = VectorField(tuple(_gf(rng.standard_normal(SPEC.shape)) for _ in range(2)))
    G = VectorField(tuple(_gf(np.abs(m.values) + 0.1) for m in F))
    assert mixed_norm(F, 2.0, 2.0) <= mixed_norm(G, 2.0, 2.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(1.0, 8.0))
def test_triangle_inequality(seed, p):
    r = np.random.default_rng(seed)
    a, b = r.standard_normal(SPEC.shape), r.standard_normal(SPEC.shape)
    lhs = lp_norm(_gf(a + b), max(p, 1.0 + 1e-9))
    rhs = lp_norm(_gf(a), max(p, 1.0 + 1e-9)) + lp_norm(_gf(b), max(p, 1.0 + 1e-9))
    assert lhs <= rhs * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.05, 3.0), st.floats(1.1, 6.0))
def test_chebyshev(seed, lam, p):
    vals = np.abs(np.random.default_rng(seed).standard_normal(SPEC.shape))
    g = _gf(vals)
    assert lam * level_measure(g, lam) ** (1 / p) <= lp_norm(g, p) * (1 + 1e-12)


def test_level_measure_examples():
    one = _gf(np.ones(SPEC.shape))
    assert level_measure(one, 0.5) == pytest.approx(4.0)
    assert level_measure(one, 2.0) == 0.0
    with pytest.raises(ValueError):
        level_measure(one, 0.0)
    with pytest.raises(ValueError):
        level_measure(_gf(-np.ones(SPEC.shape)), 1.0)


def test_level_measure_subbox():
    spec = make_grid(2, 1.0, 32)
    box = sample(spec, lambda p: ((np.abs(p[..., 0]) <= 0.5) & (np.abs(p[..., 1]) <= 0.5)).astype(float))
    measured = level_measure(box, 0.5)
    cells = np.count_nonzero(box.values)
    assert measured == pytest.approx(cells * spec.cell_volume)
    assert abs(measured - 1.0) <= 4 * 0.5 * 4 * spec.h  # perimeter * h slack
