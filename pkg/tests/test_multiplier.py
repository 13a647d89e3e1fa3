import math

import numpy as np
import pytest
from scipy.special import j0

from maxop.grid import GridFunction, make_grid, sample
from maxop.maximal import RadiiSet, default_radii, hl_maximal
from maxop.multiplier import (
    RadialProfile,
    _zonal_inverse,
    apply_multiplier,
    bump,
    decay_constants,
    dyadic_piece,
    funk_hecke_kernel,
    kernel,
    maximal_multiplier,
    radial_majorant,
    spherical_maximal,
    surface_multiplier,
    tilde_piece,
)
from maxop.quadrature import gegenbauer_rule, gegenbauer_weight_mass


def test_surface_multiplier_normalization():
    for d in (2, 3, 4, 5, 7):
        assert abs(surface_multiplier(d)(0.0) - 1.0) <= 1e-10


def test_surface_multiplier_closed_forms():
    m3 = surface_multiplier(3)
    s = np.array([0.25, 1.0, 3.7])
    np.testing.assert_allclose(m3(s), np.sin(2 * np.pi * s) / (2 * np.pi * s), atol=1e-10)
    m2 = surface_multiplier(2)
    np.testing.assert_allclose(m2(s), j0(2 * np.pi * s), atol=1e-10)
    with pytest.raises(ValueError):
        surface_multiplier(1)


def test_surface_multiplier_decay_envelope():
    # |m(s)| s^((d-1)/2) stays bounded (the classical oscillatory decay)
    m5 = surface_multiplier(5)
    s = np.linspace(1.0, 100.0, 1500)
    assert np.max(np.abs(m5(s)) * s**2) < 2.0
    assert np.max(np.abs(m5(s))) <= 1.0 + 1e-12


def test_bump_plateau_and_support():
    phi0 = bump(0)
    assert phi0(0.5) == 1.0
    assert phi0(3.0) == 0.0
    assert phi0(1.5) == pytest.approx(0.5)  # symmetry of the splice midpoint
    phi2 = bump(2)
    assert phi2(1.9) == 0.0 and phi2(8.1) == 0.0
    assert phi2(4.0) == pytest.approx(1.0)


def test_bump_partition_of_unity():
    s = np.linspace(0.0, 32.0, 3001)
    total = sum(bump(l)(s) for l in range(6))
    np.testing.assert_allclose(total, 1.0, atol=1e-12)


def test_dyadic_pieces_sum_to_multiplier():
    d = 3
    s = np.linspace(0.0, 8.0, 1200)
    total = sum(dyadic_piece(d, l)(s) for l in range(4))
    np.testing.assert_allclose(total, surface_multiplier(d)(s), atol=1e-10)


def test_dyadic_piece_vanishing_and_support():
    piece = dyadic_piece(3, 1)
    assert piece(0.0) == 0.0
    assert np.all(piece(np.array([4.1, 7.0, 100.0])) == 0.0)
    assert piece.sup_bound is not None
    s = np.linspace(1.0, 4.0, 500)
    assert np.max(np.abs(piece(s))) <= piece.sup_bound


def test_tilde_piece_matches_finite_differences():
    delta = 3e-5
    for d, l in ((3, 1), (4, 2)):
        piece, tilde = dyadic_piece(d, l), tilde_piece(d, l)
        assert tilde(0.0) == 0.0
        sp = np.array([0.8, 1.0, 1.2]) * 2.0**l
        fd = sp * (piece(sp + delta) - piece(sp - delta)) / (2 * delta)
        np.testing.assert_allclose(tilde(sp), fd, rtol=1e-6)
        assert np.all(tilde(np.array([2.0 ** (l + 1) + 0.1, 2.0 ** (l - 1) - 0.05])) == 0.0)


def test_apply_multiplier_identity_and_linearity(rng):
    spec = make_grid(2, 2.0, 16)
    f = GridFunction(spec, rng.standard_normal(spec.shape))
    g = GridFunction(spec, rng.standard_normal(spec.shape))
    out = apply_multiplier(f, bump(0), 1e-9)
    np.testing.assert_allclose(out.values, f.values, atol=1e-12)
    lin = apply_multiplier(GridFunction(spec, f.values + 2.0 * g.values), dyadic_piece(2, 1), 1.3)
    parts = apply_multiplier(f, dyadic_piece(2, 1), 1.3).values + 2.0 * apply_multiplier(
        g, dyadic_piece(2, 1), 1.3
    ).values
    np.testing.assert_allclose(lin.values, parts, atol=1e-12)


def test_apply_multiplier_is_sphere_average():
    spec = make_grid(3, 4.0, 32)
    f = sample(spec, lambda p: np.exp(-np.sum(p**2, -1)))
    r = 1.5
    sph = apply_multiplier(f, surface_multiplier(3), r)
    c = spec.N // 2
    x0 = math.sqrt(3) * spec.h / 2
    t, w = gegenbauer_rule(3, 256)
    vals = np.exp(-(x0**2 + r**2 - 2 * x0 * r * t))
    oracle = float(vals @ w) / gegenbauer_weight_mass(3)
    assert abs(sph.values[c, c, c] - oracle) <= 1e-8 * oracle


def test_maximal_multiplier_basics(rng):
    spec = make_grid(2, 2.0, 16)
    f = GridFunction(spec, rng.standard_normal(spec.shape))
    radii = RadiiSet((0.5, 1.0, 2.0))
    ident = RadialProfile(fn=lambda s: np.ones_like(np.asarray(s, float)), support=(0.0, math.inf), sup_bound=1.0)
    M = maximal_multiplier(f, ident, radii)
    np.testing.assert_allclose(M.values, np.abs(f.values), atol=1e-12)
    c = -2.5
    Mc = maximal_multiplier(GridFunction(spec, c * f.values), ident, radii)
    np.testing.assert_allclose(Mc.values, abs(c) * M.values, atol=1e-12)


def test_spherical_maximal_at_bump_center():
    spec = make_grid(3, 2.0, 16)
    f = sample(spec, lambda p: np.exp(-4 * np.sum(p**2, -1)))
    radii = RadiiSet(tuple(np.geomspace(spec.h, 1.0, 8)))
    M = spherical_maximal(f, radii)
    c = spec.N // 2
    assert M.values[c, c, c] >= 0.8 * f.values[c, c, c]
    with pytest.raises(ValueError):
        spherical_maximal(GridFunction(make_grid(1, 1.0, 8), np.ones(8)), radii)


def test_prop1_majorant_domination():
    # the multiplier maximal function is controlled by ||Omega||_1 times the
    # Hardy-Littlewood maximal function, Omega the kernel's radial majorant
    spec = make_grid(2, 4.0, 48)
    prof = bump(0)
    kern = kernel(prof, spec)
    omega, mass = radial_majorant(kern)
    assert mass >= 1.0 - 1e-6  # at least the kernel integral = profile(0)
    s = np.linspace(0.0, 5.0, 400)
    vals = omega(s)
    assert np.all(np.diff(vals) <= 1e-15)
    assert np.all(np.abs(kern.values) <= omega(np.sqrt(np.sum(
        np.stack(np.meshgrid(spec.axis_nodes(), spec.axis_nodes(), indexing='ij'), -1) ** 2, -1
    )) ) + 1e-15)
    f = sample(spec, lambda p: np.exp(-3 * np.sum((p - 0.4) ** 2, -1)))
    radii = RadiiSet(tuple(np.geomspace(spec.h, 2.0, 10)))
    dense = default_radii(spec, 24)
    Mw = maximal_multiplier(f, prof, radii)
    Mhl = hl_maximal(f, dense)
    assert np.all(Mw.values <= mass * Mhl.values * 1.05 + 1e-8)


def test_kernel_guards_and_phi0_mass():
    spec = make_grid(2, 6.0, 96)
    k0 = kernel(bump(0), spec)
    assert k0.is_real
    assert abs(float(k0.values.sum()) * spec.cell_volume - 1.0) <= 1e-8
    with pytest.raises(ValueError):
        kernel(surface_multiplier(2), spec)  # unbounded support
    with pytest.raises(ValueError):
        kernel(dyadic_piece(2, 4), spec)  # support 32 exceeds extent 4


@pytest.mark.parametrize("N", [32, 40, 48])  # non-dyadic sizes exercise the phases
def test_kernel_matches_generic_inverse_transform(N):
    # the half-spectrum fast path agrees with the full inverse transform
    from maxop.grid import frequency_radii, inverse_transform, _wrap

    spec = make_grid(2, N / 16.0, N)  # extent 4 holds the support of the piece
    prof = dyadic_piece(2, 1)
    fast = kernel(prof, spec)
    samples = prof(frequency_radii(spec)).astype(np.complex128)
    slow = inverse_transform(_wrap(spec, samples, "frequency"))
    np.testing.assert_allclose(fast.values, slow.values.real, atol=1e-12)


def test_kernel_dilation_rule():
    # (profile(r .))^v is the L^1-normalized dilate of the kernel
    d, r = 3, 2.0
    spec = make_grid(3, 6.0, 48)
    prof = dyadic_piece(d, 1)
    dilated = RadialProfile(
        fn=lambda s: prof.fn(np.asarray(s, float) * r),
        support=(prof.support[0] / r, prof.support[1] / r),
        sup_bound=prof.sup_bound,
    )
    kd = kernel(dilated, spec)
    probes = np.array([0.6, 1.1, 2.3])
    direct = _zonal_inverse(dilated, d, probes, tol=1e-10)
    scaled = _zonal_inverse(prof, d, probes / r, tol=1e-10) / r**d
    np.testing.assert_allclose(direct, scaled, atol=1e-9)
    c = spec.N // 2
    ray = kd.values[:, c, c]
    x1 = spec.axis_nodes()
    sel = (x1 > 0.4) & (x1 < 2.5)
    rad = np.sqrt(x1[sel] ** 2 + 2 * (spec.h / 2) ** 2)
    np.testing.assert_allclose(ray[sel], _zonal_inverse(dilated, d, rad, tol=1e-10), atol=1e-5)


def test_funk_hecke_against_zonal_route():
    # chord-integral route vs direct radial transform of the full piece
    probes = np.array([0.0, 0.5, 1.0, 2.0])
    for l in (1, 2):
        fh = funk_hecke_kernel(l, 3, probes, tol=1e-10)
        direct = _zonal_inverse(dyadic_piece(3, l), 3, probes, tol=1e-10)
        np.testing.assert_allclose(fh, direct, atol=1e-7)
    assert isinstance(funk_hecke_kernel(1, 3, 0.7), float)
    with pytest.raises(ValueError):
        funk_hecke_kernel(1, 2, 0.5)


def test_funk_hecke_at_origin_is_bump_kernel_on_sphere():
    # at x = 0 every chord has length 1, so the value is the bump kernel at 1
    val = funk_hecke_kernel(2, 3, 0.0, tol=1e-10)
    phi_kernel_at_1 = _zonal_inverse(bump(2), 3, np.array([1.0]), tol=1e-11)[0]
    assert abs(val - phi_kernel_at_1) <= 1e-8 * max(1.0, abs(phi_kernel_at_1))


def test_funk_hecke_decay_envelope():
    xs = np.linspace(0.0, 8.0, 33)
    vals = funk_hecke_kernel(1, 3, xs, tol=1e-8)
    env = np.abs(vals) * (1 + xs) ** 4 / 2.0
    assert np.max(env) < 50.0


def test_decay_constants_small():
    rows = decay_constants(3, 2)
    assert [r.l for r in rows] == [1, 2]
    assert all(r.c1 > 0 and r.c2 > 0 and r.c3 > 0 for r in rows)
    with pytest.raises(ValueError):
        decay_constants(2, 6)
    with pytest.raises(ValueError):
        decay_constants(3, 1)


def test_ptw_partial_sums_dominate():
    # the spherical maximal function sits below the summed dyadic maximal
    # pieces, with a tail defect shrinking as more pieces are added
    spec = make_grid(2, 2.0, 128)
    f = sample(spec, lambda p: np.exp(-4 * np.sum(p**2, -1)))
    radii = RadiiSet(tuple(np.geomspace(spec.h, 1.5, 10)))
    MS = spherical_maximal(f, radii).values
    total = np.zeros(spec.shape)
    defects = []
    for l in range(5):
        total += maximal_multiplier(f, dyadic_piece(2, l), radii).values
        defects.append(float(np.max(MS - total)))
    assert defects[-1] <= 0.02
    assert defects[-1] <= defects[0] + 1e-12
    assert max(0.0, defects[-1]) < max(0.02, defects[0])
