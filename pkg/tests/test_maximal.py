import math

import numpy as np
import pytest

from maxop.grid import GridFunction, make_grid, sample
from maxop.maximal import (
    RadiiSet,
    _ball_max_exact,
    _cumulative_weights,
    _strict_bound,
    default_radii,
    hl_maximal,
    maximal_1d,
    weighted_maximal,
)
from maxop.multiplier import spherical_maximal
from maxop.norms import lp_norm


def test_default_radii_endpoints():
    spec = make_grid(1, 1.0, 4)
    rs = default_radii(spec, 2)
    assert rs.radii == pytest.approx((0.5, 2.0))
    rs3 = default_radii(spec, 3)
    assert rs3.radii[1] == pytest.approx(1.0)  # geometric midpoint
    assert all(b > a for a, b in zip(rs3.radii, rs3.radii[1:]))
    with pytest.raises(ValueError):
        default_radii(spec, 1)


def test_radii_set_validation():
    with pytest.raises(ValueError):
        RadiiSet(())
    with pytest.raises(ValueError):
        RadiiSet((1.0, 1.0))
    with pytest.raises(ValueError):
        RadiiSet((-1.0, 2.0))


def test_strict_bound_center_only_at_h():
    # radius h leaves exactly the center cell: n*h^2 < h^2 only for n = 0
    assert _strict_bound(0.5, 0.5) == 0
    assert _strict_bound(0.5001, 0.5) == 1
    assert _strict_bound(1.0, 0.5) == 3


def test_constant_is_fixed_everywhere():
    spec = make_grid(2, 2.0, 16)
    one = GridFunction(spec, np.ones(spec.shape))
    for op in (
        lambda f: hl_maximal(f, default_radii(spec, 8)),
        lambda f: maximal_1d(f, default_radii(spec, 8), axis=1),
    ):
        np.testing.assert_allclose(op(one).values, 1.0, atol=1e-12)


def test_domination_and_sublinearity(rng):
    spec = make_grid(2, 1.5, 12)
    radii = default_radii(spec, 12)
    f_vals = rng.standard_normal(spec.shape)
    g_vals = rng.standard_normal(spec.shape)
    Mf = hl_maximal(GridFunction(spec, f_vals), radii).values
    Mg = hl_maximal(GridFunction(spec, g_vals), radii).values
    Mfg = hl_maximal(GridFunction(spec, f_vals + g_vals), radii).values
    assert np.all(Mf >= np.abs(f_vals) - 1e-14)
    assert np.all(Mf >= 0)
    assert np.all(Mfg <= Mf + Mg + 1e-12)


def test_translation_covariance():
    spec = make_grid(1, 2.0, 32)
    vals = np.exp(-8 * (spec.axis_nodes() - 0.2) ** 2)
    shifted = np.roll(vals, 1)
    radii = RadiiSet((spec.h, 0.3, 0.6))
    a = hl_maximal(GridFunction(spec, vals), radii).values
    b = hl_maximal(GridFunction(spec, shifted), radii).values
    # where the largest stencil stays inside the cube, Mf shifts with f
    reach = math.isqrt(_strict_bound(0.6, spec.h))
    inner = slice(reach + 1, spec.N - reach)
    np.testing.assert_allclose(b[inner], a[inner.start - 1 : inner.stop - 1], atol=1e-14)


def test_interval_indicator_matches_continuum_sup():
    # sup_r of the centered average of chi_[-1,1] at x=2 is 1/3, at r = 3
    spec = make_grid(1, 4.0, 128)
    f = sample(spec, lambda p: (np.abs(p[..., 0]) <= 1.0).astype(float))
    M = hl_maximal(f, RadiiSet(tuple(np.linspace(spec.h, 6.0, 160))))
    node = int(np.argmin(np.abs(spec.axis_nodes() - 2.0)))
    assert abs(M.values[node] - 1.0 / 3.0) <= 2 * spec.h


def test_fft_path_matches_exact_path(rng):
    spec = make_grid(2, 2.0, 40)  # large enough to take the FFT route
    vals = rng.standard_normal(spec.shape)
    radii = default_radii(spec, 10)
    got = hl_maximal(GridFunction(spec, vals), radii).values
    tmax = _strict_bound(radii.radii[-1], spec.h)
    want = _ball_max_exact(
        np.abs(vals), spec.h, radii.radii, 0, _cumulative_weights(2, tmax, 0, spec.h)
    )
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_weighted_k0_is_hl(rng):
    spec = make_grid(2, 1.0, 8)
    f = GridFunction(spec, rng.standard_normal(spec.shape))
    radii = RadiiSet((spec.h, 0.5, 1.1))
    np.testing.assert_array_equal(
        weighted_maximal(f, 0, radii).values, hl_maximal(f, radii).values
    )
    with pytest.raises(ValueError):
        weighted_maximal(f, -1, radii)


def test_weighted_constant_interior():
    spec = make_grid(2, 2.0, 16)
    one = GridFunction(spec, np.ones(spec.shape))
    radii = RadiiSet(tuple(np.geomspace(spec.h, 1.0, 6)))
    M = weighted_maximal(one, 2, radii).values
    ax = spec.axis_nodes()
    interior = np.abs(np.stack(np.meshgrid(ax, ax, indexing="ij"), -1)).max(-1) <= spec.L - 1.05
    np.testing.assert_allclose(M[interior], 1.0, atol=1e-12)


def test_weighted_below_spherical_on_bump():
    # polar coordinates turn the weighted average into an average of sphere
    # averages, so the spherical maximal function dominates
    spec = make_grid(2, 4.0, 48)
    f = sample(spec, lambda p: np.exp(-2 * np.sum(p**2, -1)))
    radii = RadiiSet(tuple(np.geomspace(spec.h, 2.5, 12)))
    dense = RadiiSet(tuple(np.geomspace(spec.h / 2, 3.0, 48)))
    for k in (1, 3):
        W = weighted_maximal(f, k, radii).values
        S = spherical_maximal(f, dense).values
        ax = spec.axis_nodes()
        interior = np.abs(np.stack(np.meshgrid(ax, ax, indexing="ij"), -1)).max(-1) <= 1.0
        assert np.all(W[interior] <= S[interior] * 1.05 + 4 * spec.h)


def test_maximal_1d_equals_hl_in_1d(rng):
    spec = make_grid(1, 1.0, 8)
    f = GridFunction(spec, rng.standard_normal(spec.shape))
    radii = RadiiSet((spec.h, 0.3, 0.8, 1.9))
    a = maximal_1d(f, radii, axis=0).values
    b = hl_maximal(f, radii).values
    np.testing.assert_allclose(a, b, atol=1e-13)
    with pytest.raises(ValueError):
        maximal_1d(f, radii, axis=1)


def test_maximal_1d_spike_decay():
    spec = make_grid(1, 1.0, 64)
    vals = np.zeros(spec.shape)
    vals[32] = 1.0
    radii = RadiiSet(tuple(np.geomspace(spec.h, 1.5, 64)))
    M = maximal_1d(GridFunction(spec, vals), radii, axis=0).values
    for cells in (6, 10, 16):
        s = cells * spec.h
        expect = spec.h / (2 * s)
        assert abs(M[32 + cells] - expect) <= 0.25 * expect


def test_maximal_1d_per_fiber(rng):
    spec = make_grid(2, 1.0, 8)
    vals = rng.standard_normal(spec.shape)
    radii = RadiiSet((spec.h, 0.4, 0.9))
    M = maximal_1d(GridFunction(spec, vals), radii, axis=1).values
    spec1 = make_grid(1, 1.0, 8)
    for i in range(spec.N):
        fiber = hl_maximal(GridFunction(spec1, vals[i]), radii).values
        np.testing.assert_allclose(M[i], fiber, atol=1e-13)


def test_dimension_stability_probe():
    # ||M f||_2 / ||f||_2 for the unit gaussian stays below 3 across d=1..5
    ratios = []
    for d, N in ((1, 32), (2, 24), (3, 16), (4, 12), (5, 12)):
        spec = make_grid(d, 4.0, N)
        f = sample(spec, lambda p: np.exp(-np.sum(p**2, -1)))
        M = hl_maximal(f, default_radii(spec, 16))
        ratios.append(lp_norm(M, 2.0) / lp_norm(f, 2.0))
    assert all(r < 3.0 for r in ratios)
    assert all(r >= 1.0 - 1e-12 for r in ratios)


def test_rejects_frequency_domain_and_oversized_radii(rng):
    spec = make_grid(1, 1.0, 8)
    f = GridFunction(spec, rng.standard_normal(spec.shape))
    from maxop.grid import forward_transform

    with pytest.raises(ValueError):
        hl_maximal(forward_transform(f), RadiiSet((0.5,)))
    with pytest.raises(ValueError):
        hl_maximal(f, RadiiSet((0.5, 50.0)))
