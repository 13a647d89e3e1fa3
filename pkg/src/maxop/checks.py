"""Acceptance/property suite: one callable per criterion, each returning a
pass/fail result with a measured detail string.

Every criterion pairs the production path with an independent oracle (closed
forms, brute-force enumeration, quadrature, Monte-Carlo error bars) at the
tolerance fixed here; nothing is calibrated at run time.  The CLI ``check``
subcommand and the acceptance test module both drive :func:`run_all`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .families import compact_bump_values
from .grid import VectorField, _wrap, make_grid, sample
from .grushin import (
    GrushinFunction,
    GrushinGrid,
    GrushinPoint,
    grushin_maximal,
    iterated_maximal,
    koranyi_ball_volume,
    koranyi_distance,
    min_node_gap,
    sample_grushin,
)
from .maximal import RadiiSet, default_radii, hl_maximal, maximal_1d, weighted_maximal
from .multiplier import (
    bump,
    dyadic_piece,
    funk_hecke_kernel,
    kernel,
    maximal_multiplier,
    spherical_maximal,
    surface_multiplier,
    tilde_piece,
    decay_constants,
)
from .norms import lp_norm, lq_pointwise, mixed_norm
from .quadrature import gegenbauer_rule, gegenbauer_weight_mass
from .rotations import (
    DescentSplit,
    descent_maximal,
    haar_rotation,
    lemma2_domination,
    rotation_average_check,
    sphere_identity_check,
)
from .scan import ScanConfig, csv_text, report_violations, run_scan
from .squarefn import default_tgrid, prop2_check, sharp_annulus, square_function

__all__ = ["CheckResult", "run_all", "CRITERIA"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _result(name: str, t0: float, checks: list[tuple[str, bool]], extra: str = "") -> CheckResult:
    failed = [label for label, ok in checks if not ok]
    detail = f"{len(checks) - len(failed)}/{len(checks)} assertions"
    if extra:
        detail += f"; {extra}"
    if failed:
        detail += f"; FAILED: {', '.join(failed)}"
    return CheckResult(name=name, passed=not failed, detail=detail, seconds=time.time() - t0)


# -- criterion 1 -------------------------------------------------------------


def criterion_identity_suite() -> CheckResult:
    """All eight maximal-averaging operators send f == 1 to 1 (1e-10; 1e-3 on
    FFT paths), at interior nodes, in under 10 s."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []

    spec2 = make_grid(2, 2.0, 16)
    one2 = _wrap(spec2, np.ones(spec2.shape), "physical")
    dev = np.abs(hl_maximal(one2, default_radii(spec2, 8)).values - 1.0).max()
    checks.append((f"hl {dev:.1e}", dev <= 1e-10))

    small = RadiiSet(tuple(np.geomspace(spec2.h, 1.0, 6)))
    ax = spec2.axis_nodes()
    interior2 = np.abs(np.stack(np.meshgrid(ax, ax, indexing="ij"), -1)).max(-1) <= spec2.L - 1.05
    dev = np.abs(weighted_maximal(one2, 2, small).values[interior2] - 1.0).max()
    checks.append((f"weighted {dev:.1e}", dev <= 1e-10))

    dev = np.abs(maximal_1d(one2, default_radii(spec2, 8), axis=0).values - 1.0).max()
    checks.append((f"1d {dev:.1e}", dev <= 1e-10))

    spec3 = make_grid(3, 2.0, 16)
    one3 = _wrap(spec3, np.ones(spec3.shape), "physical")
    rs3 = RadiiSet(tuple(np.geomspace(spec3.h, 1.0, 6)))
    dev = np.abs(spherical_maximal(one3, rs3).values - 1.0).max()
    checks.append((f"spherical {dev:.1e}", dev <= 1e-3))

    dev = np.abs(maximal_multiplier(one3, dyadic_piece(3, 0), rs3).values - 1.0).max()
    checks.append((f"multiplier {dev:.1e}", dev <= 1e-3))

    spec3s = make_grid(3, 2.0, 12)
    one3s = _wrap(spec3s, np.ones(spec3s.shape), "physical")
    rsd = RadiiSet((0.2, 0.35, 0.5))
    desc = descent_maximal(one3s, haar_rotation(3, 1), DescentSplit(3, 3), rsd, n_radial=6, n_sphere=12)
    axs = spec3s.axis_nodes()
    inter3 = np.abs(np.stack(np.meshgrid(axs, axs, axs, indexing="ij"), -1)).max(-1) <= spec3s.L - 0.55
    dev = np.abs(desc.values[inter3] - 1.0).max()
    checks.append((f"descent {dev:.1e}", dev <= 1e-10))

    grid = GrushinGrid(1, 2.0, 2.0, 8, 8)
    oneg = GrushinFunction(grid, np.ones(grid.shape))
    rk = RadiiSet((0.9 * min_node_gap(grid), 0.8, 1.5))
    dev = np.abs(grushin_maximal(oneg, rk).values - 1.0).max()
    checks.append((f"grushin {dev:.1e}", dev <= 1e-10))

    rx = RadiiSet(tuple(np.geomspace(grid.h_x, 2.0, 6)))
    ru = RadiiSet(tuple(np.geomspace(grid.h_u, 2.0, 6)))
    dev = np.abs(iterated_maximal(oneg, rx, ru).values - 1.0).max()
    checks.append((f"iterated {dev:.1e}", dev <= 1e-10))

    elapsed = time.time() - t0
    checks.append((f"runtime {elapsed:.1f}s < 10s", elapsed < 10.0))
    return _result("criterion 1: identity/constant suite", t0, checks)


# -- criterion 2 -------------------------------------------------------------


def _oracle_hl(values: np.ndarray, h: float, radii) -> np.ndarray:
    """Naive triple-loop Hardy-Littlewood: strict lattice balls, in-cube
    numerators in linear index order, infinite-lattice denominators."""
    absf = np.abs(values)
    flat = absf.reshape(-1)
    d = values.ndim
    idx = np.indices(values.shape).reshape(d, -1)
    out = np.zeros(flat.size)
    for i in range(flat.size):
        best = 0.0
        for r in radii:
            t = 0
            while (t + 1) * h * h < r * r:
                t += 1
            m = math.isqrt(t)
            count = 0
            for offs in np.ndindex(*([2 * m + 1] * d)):
                if sum((o - m) ** 2 for o in offs) <= t:
                    count += 1
            mask = np.zeros(flat.size, dtype=bool)
            for j in range(flat.size):
                if sum(int(idx[ax, j] - idx[ax, i]) ** 2 for ax in range(d)) <= t:
                    mask[j] = True
            best = max(best, float(np.sum(flat[mask])) / count)
        out[i] = best
    return out.reshape(values.shape)


def _oracle_grushin(f: GrushinFunction, radii) -> np.ndarray:
    grid = f.grid
    absf = np.abs(f.values)
    xa, ua = grid.x_axis(), grid.u_axis()
    out = np.zeros(grid.shape)
    for multi in np.ndindex(grid.shape):
        x = np.array([xa[i] for i in multi[: grid.d]])
        u = float(ua[multi[grid.d]])
        xn = float(np.linalg.norm(x))
        best = 0.0
        for r in radii:
            bx = int(math.ceil(r / grid.h_x)) + 2
            bu = int(math.ceil((0.5 * (r * r + 2 * xn * (xn + r))) / grid.h_u)) + 2
            count = 0
            members = []
            x_ranges = [range(i - bx, i + bx + 1) for i in multi[: grid.d]]
            iu = multi[grid.d]
            for xi in np.ndindex(*[len(rg) for rg in x_ranges]):
                jx = tuple(rg[k] for rg, k in zip(x_ranges, xi))
                xp = np.array([-grid.L_x + (j + 0.5) * grid.h_x for j in jx])
                for ju in range(iu - bu, iu + bu + 1):
                    up = -grid.L_u + (ju + 0.5) * grid.h_u
                    dk = koranyi_distance(GrushinPoint(tuple(x), u), GrushinPoint(tuple(xp), up))
                    if dk <= r:
                        count += 1
                        if all(0 <= j < grid.N_x for j in jx) and 0 <= ju < grid.N_u:
                            members.append(jx + (ju,))
            num = float(np.sum(np.array([absf[m] for m in sorted(members)])))
            if count:
                best = max(best, num / count)
        out[multi] = best
    return out


def criterion_brute_force() -> CheckResult:
    """Small-grid operators match independent naive loops bit-for-bit; norm
    reductions match re-summation oracles to 1e-12."""
    t0 = time.time()
    rng = np.random.default_rng(42)
    checks: list[tuple[str, bool]] = []

    for d in (1, 2):
        spec = make_grid(d, 1.0, 8)
        f = _wrap(spec, rng.standard_normal(spec.shape), "physical")
        radii = RadiiSet((spec.h, 0.4, 0.9, 1.7))
        got = hl_maximal(f, radii).values
        want = _oracle_hl(f.values, spec.h, radii)
        checks.append((f"hl d={d} bit-exact", np.array_equal(got, want)))

    grid = GrushinGrid(1, 1.0, 1.0, 8, 8)
    fg = GrushinFunction(grid, rng.standard_normal(grid.shape))
    rk = RadiiSet((0.9 * min_node_gap(grid), 0.35, 0.8, 1.4))
    got = grushin_maximal(fg, rk).values
    want = _oracle_grushin(fg, rk)
    checks.append(("grushin bit-exact", np.array_equal(got, want)))

    spec = make_grid(2, 1.5, 12)
    F = VectorField(tuple(_wrap(spec, rng.standard_normal(spec.shape), "physical") for _ in range(3)))
    for p, q in ((2.0, 2.0), (3.0, 1.5), (1.5, 4.0)):
        got = mixed_norm(F, p, q)
        acc = sum(np.abs(m.values) ** q for m in F) ** (1.0 / q)
        want = (float(np.sum(acc**p)) * spec.cell_volume) ** (1.0 / p)
        checks.append((f"mixed p={p} q={q}", abs(got - want) <= 1e-12 * want))
    got = lq_pointwise(F, 3.0).values
    want = sum(np.abs(m.values) ** 3.0 for m in F) ** (1.0 / 3.0)
    checks.append(("lq pointwise", np.max(np.abs(got - want)) <= 1e-12 * np.max(want)))
    return _result("criterion 2: brute-force oracles", t0, checks)


# -- criterion 3 -------------------------------------------------------------


def criterion_multiplier_exactness() -> CheckResult:
    """m(0) = 1 and the d = 3 closed form to 1e-10; partition of unity to
    1e-12; radial-derivative profiles vs finite differences to 1e-6; < 30 s."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []
    for d in (2, 3, 5):
        dev = abs(surface_multiplier(d)(0.0) - 1.0)
        checks.append((f"m(0) d={d} {dev:.1e}", dev <= 1e-10))

    m3 = surface_multiplier(3)
    probes = np.array([0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 3.7, 5.0])
    closed = np.sin(2 * np.pi * probes) / (2 * np.pi * probes)
    dev = np.abs(m3(probes) - closed).max()
    checks.append((f"d=3 closed form {dev:.1e}", dev <= 1e-10))

    lmax = 6
    s = np.linspace(0.0, 2.0**lmax, 4001)
    total = sum(bump(l)(s) for l in range(lmax + 1))
    dev = np.abs(total - 1.0).max()
    checks.append((f"partition of unity {dev:.1e}", dev <= 1e-12))

    delta = 3e-5
    worst = 0.0
    for d in (3, 4):
        for l in (1, 2, 3):
            piece = dyadic_piece(d, l)
            tilde = tilde_piece(d, l)
            sp = np.array([0.7, 1.0, 1.3]) * 2.0**l
            fd = sp * (piece(sp + delta) - piece(sp - delta)) / (2 * delta)
            tv = tilde(sp)
            rel = np.abs(tv - fd) / np.maximum(np.abs(tv), 1e-12)
            worst = max(worst, float(rel.max()))
    checks.append((f"tilde vs finite diff {worst:.1e}", worst <= 1e-6))

    elapsed = time.time() - t0
    checks.append((f"runtime {elapsed:.1f}s < 30s", elapsed < 30.0))
    return _result("criterion 3: multiplier exactness", t0, checks)


# -- criterion 4 -------------------------------------------------------------


def criterion_decay_constants() -> CheckResult:
    """For d in {3, 5}, l = 1..6: each normalized decay column varies by at
    most a factor 4 across l; under 5 minutes."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []
    spreads = []
    for d in (3, 5):
        rows = decay_constants(d, 6)
        for col, name in ((1, "c1"), (2, "c2"), (3, "c3")):
            vals = [r[col] for r in rows]
            checks.append((f"d={d} {name} positive", all(v > 0 for v in vals)))
            spread = max(vals) / min(vals)
            spreads.append(f"d={d} {name} x{spread:.2f}")
            checks.append((f"d={d} {name} max/min {spread:.2f}", spread <= 4.0))
    elapsed = time.time() - t0
    checks.append((f"runtime {elapsed:.0f}s < 300s", elapsed < 300.0))
    return _result("criterion 4: decay-constant boundedness", t0, checks, extra=", ".join(spreads))


# -- criterion 5 -------------------------------------------------------------


def criterion_kernel_cross_oracle() -> CheckResult:
    """FFT kernel vs Funk-Hecke quadrature for the dyadic pieces, d = 3,
    l in {1, 2}: relative error <= 1e-3 wherever both exceed 1e-6."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []
    spec = make_grid(3, 8.0, 256)
    center = spec.N // 2
    x1 = spec.axis_nodes()
    rad = np.sqrt(x1**2 + 2 * (spec.h / 2.0) ** 2)
    sel = (x1 > 0) & (rad <= 2.3)
    worst = []
    for l in (1, 2):
        fft_vals = kernel(dyadic_piece(3, l), spec).values[:, center, center][sel]
        fh_vals = funk_hecke_kernel(l, 3, rad[sel], tol=1e-10)
        strong = np.minimum(np.abs(fft_vals), np.abs(fh_vals)) >= 1e-6
        rel = np.abs(fft_vals - fh_vals)[strong] / np.abs(fh_vals)[strong]
        worst.append(f"l={l} rel {rel.max():.2e} over {strong.sum()} pts")
        checks.append((f"l={l} coverage", int(strong.sum()) >= 20))
        checks.append((f"l={l} rel err {rel.max():.2e}", float(rel.max()) <= 1e-3))
    return _result("criterion 5: kernel cross-oracle", t0, checks, extra="; ".join(worst))


# -- criterion 6 -------------------------------------------------------------


def criterion_square_function() -> CheckResult:
    """Sharp-cutoff Plancherel equality to 1e-3; annulus square-function
    bound with tolerance 1e-2 on 10 random vector fields."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []
    spec = make_grid(2, 2.0, 32)
    rng = np.random.default_rng(7)
    vals = rng.standard_normal(spec.shape)
    vals -= vals.mean()  # zero frequency never meets the annulus
    f = _wrap(spec, vals, "physical")
    height = 1.3
    sharp = sharp_annulus(0.5, 2.0, height)
    g = square_function(f, sharp, default_tgrid(sharp, spec, n=128))
    lhs = lp_norm(g, 2.0)
    rhs = height * math.sqrt(math.log(4.0)) * lp_norm(f, 2.0)
    rel = abs(lhs - rhs) / rhs
    checks.append((f"equality case {rel:.1e}", rel <= 1e-3))

    ok = 0
    for trial in range(10):
        F = VectorField(
            tuple(_wrap(spec, rng.standard_normal(spec.shape), "physical") for _ in range(3))
        )
        l1, r1 = prop2_check(F, sharp)
        l2, r2 = prop2_check(F, dyadic_piece(2, 1))
        if l1 <= r1 * (1 + 1e-2) and l2 <= r2 * (1 + 1e-2):
            ok += 1
    checks.append((f"annulus bound on {ok}/10 fields", ok == 10))
    return _result("criterion 6: square-function equality case", t0, checks)


# -- criterion 7 -------------------------------------------------------------


def criterion_rotation_identities() -> CheckResult:
    """Ball-average and sphere pushforward identities pass their Monte-Carlo
    error bars (3 sigma + 2h) at d in {3, 4}, d' = 3, n_mc = 4096; the
    rotation-average domination holds at >= 95% of interior nodes; < 5 min."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []

    def test_field(points):
        r2 = np.sum(points**2, axis=-1)
        off = np.sum((points - 0.3) ** 2, axis=-1)
        return np.exp(-2.0 * r2) + 0.3 * np.exp(-4.0 * off)

    for d, N in ((3, 16), (4, 12)):
        spec = make_grid(d, 2.0, N)
        f = sample(spec, test_field)
        res = rotation_average_check(
            f, DescentSplit(d, 3), r=0.7, x_index=(spec.N // 2,) * d, n_mc=4096, seed=11
        )
        slack = 3 * res.stderr + 2 * spec.h
        gap = abs(res.lhs - res.rhs)
        checks.append((f"ball-average identity d={d} gap {gap:.2e} vs {slack:.2e}", gap <= slack))

    moments = [
        ("const", lambda y: np.ones(y.shape[0])),
        ("x1^2", lambda y: y[:, 0] ** 2),
        ("x1*x2", lambda y: y[:, 0] * y[:, 1]),
        ("x1^4", lambda y: y[:, 0] ** 4),
        ("x1^3 (odd)", lambda y: y[:, 0] ** 3),
    ]
    for d in (3, 4):
        split = DescentSplit(d, 3)
        for name, fn in moments:
            res = sphere_identity_check(fn, split, n_mc=4096, seed=23)
            gap = abs(res.lhs - res.rhs)
            tol = 3 * res.stderr + 1e-12
            checks.append((f"pushforward d={d} {name} gap {gap:.1e}", gap <= tol))

    for d, N in ((3, 12), (4, 10)):
        spec = make_grid(d, 2.0, N)
        f = sample(spec, lambda p: np.exp(-2.0 * np.sum(p**2, axis=-1)))
        radii = RadiiSet((spec.h, 0.55, 0.75))
        dom = lemma2_domination(f, DescentSplit(d, 3), radii, n_mc=16, seed=3, n_radial=8, n_sphere=16)
        M = hl_maximal(f, radii)
        axn = spec.axis_nodes()
        interior = (
            np.abs(np.stack(np.meshgrid(*([axn] * d), indexing="ij"), -1)).max(-1)
            <= spec.L - 0.8
        )
        ok = M.values <= dom.average.values + 3 * dom.stderr.values + 2 * spec.h
        frac = float(ok[interior].mean())
        checks.append((f"rotation-average domination d={d} at {frac:.3f}", frac >= 0.95))

    elapsed = time.time() - t0
    checks.append((f"runtime {elapsed:.0f}s < 300s", elapsed < 300.0))
    return _result("criterion 7: rotation identities", t0, checks)


# -- criterion 8 -------------------------------------------------------------


def _oracle_sphere_sup(d: int, x: float, r_grid: np.ndarray) -> float:
    """sup over r of the zonal average of the compact bump at distance x."""
    t, w = gegenbauer_rule(d, 400)
    mass = gegenbauer_weight_mass(d)
    best = 0.0
    for r in r_grid:
        rho2 = x**2 + r**2 - 2 * x * r * t
        vals = np.zeros_like(rho2)
        inside = rho2 < 1.0
        vals[inside] = np.exp(-1.0 / (1.0 - rho2[inside]))
        best = max(best, abs(float(vals @ w) / mass))
    return best


def criterion_decay_slope() -> CheckResult:
    """The spherical maximal function of the compact bump decays like
    |x|^-(d-1): log-log slope over |x| in [2, 4] equals -2 +- 0.2 at d = 3,
    for both the FFT path and the sphere-quadrature oracle."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []
    spec = make_grid(3, 8.0, 96)
    f = sample(spec, compact_bump_values)
    radii = RadiiSet(tuple(np.geomspace(0.5, 6.0, 64)))
    M = spherical_maximal(f, radii)
    center = spec.N // 2
    ray = M.values[:, center, center]
    x1 = spec.axis_nodes()
    rad = np.sqrt(x1**2 + 2 * (spec.h / 2.0) ** 2)
    sel = (rad >= 2.0) & (rad <= 4.0) & (x1 > 0)
    slope = float(np.polyfit(np.log(rad[sel]), np.log(ray[sel]), 1)[0])
    checks.append((f"fft slope {slope:.3f}", abs(slope + 2.0) <= 0.2))

    r_dense = np.linspace(1.0, 5.5, 400)
    oracle_vals = np.array([_oracle_sphere_sup(3, x, r_dense) for x in rad[sel]])
    oslope = float(np.polyfit(np.log(rad[sel]), np.log(oracle_vals), 1)[0])
    checks.append((f"oracle slope {oslope:.3f}", abs(oslope + 2.0) <= 0.2))
    agree = np.max(np.abs(ray[sel] - oracle_vals) / oracle_vals)
    return _result(
        "criterion 8: necessity decay slope",
        t0,
        checks,
        extra=f"fft-vs-oracle value spread {agree:.2f}",
    )


# -- criterion 9 -------------------------------------------------------------


def _shell_fraction(g: GrushinPoint, r: float, grid: GrushinGrid, delta: float) -> float:
    hi = koranyi_ball_volume(g, r + delta, grid)
    lo = koranyi_ball_volume(g, max(r - delta, delta), grid)
    mid = koranyi_ball_volume(g, r, grid)
    return (hi - lo) / mid if mid > 0 else float("inf")


def criterion_grushin_suite() -> CheckResult:
    """Pseudo-distance identities to rounding; dilation volume scaling within
    the measured surface-cell fraction; the iterated operator dominates the
    Koranyi one with a stable measured constant across d in {1, 2, 3}."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []
    rng = np.random.default_rng(5)

    worst_sym = 0.0
    for _ in range(10000):
        d = int(rng.integers(1, 4))
        a = GrushinPoint(tuple(rng.uniform(-2, 2, d)), float(rng.uniform(-2, 2)))
        b = GrushinPoint(tuple(rng.uniform(-2, 2, d)), float(rng.uniform(-2, 2)))
        worst_sym = max(worst_sym, abs(koranyi_distance(a, b) - koranyi_distance(b, a)))
        if koranyi_distance(a, b) <= 0:
            worst_sym = float("inf")
    checks.append((f"symmetry/positivity {worst_sym:.1e}", worst_sym == 0.0))
    origin = GrushinPoint((0.0, 0.0), 0.0)
    checks.append(("self distance", koranyi_distance(origin, origin) == 0.0))
    v = koranyi_distance(origin, GrushinPoint((0.3, 0.4), 0.0))
    checks.append((f"x-collapse {abs(v-0.5):.1e}", abs(v - 0.5) <= 1e-13))
    v = koranyi_distance(origin, GrushinPoint((0.0, 0.0), 0.18))
    checks.append((f"u-collapse {abs(v-0.6):.1e}", abs(v - 0.6) <= 1e-13))

    for d, N in ((1, 96), (2, 48)):
        grid = GrushinGrid(d, 3.0, 3.0, N, N)
        delta = grid.h_x * math.sqrt(d) + math.sqrt(2.0 * grid.h_u)
        c = GrushinPoint((0.3,) + (0.0,) * (d - 1), 0.2)
        r = 1.4
        lhs = koranyi_ball_volume(c, r, grid)
        cd = GrushinPoint(tuple(np.asarray(c.x) / r), c.u / r**2)
        rhs = r ** (d + 2) * koranyi_ball_volume(cd, 1.0, grid)
        tol = _shell_fraction(c, r, grid, delta) + _shell_fraction(cd, 1.0, grid, delta)
        rel = abs(lhs - rhs) / lhs
        checks.append((f"dilation scaling d={d} rel {rel:.3f} vs shell {tol:.3f}", rel <= tol))

    bumps = [
        lambda p: np.exp(-np.sum(p**2, -1) / 0.7**2),
        lambda p: np.exp(-np.sum(p**2, -1) / 1.2**2),
        lambda p: np.exp(-(np.sum(p[..., :-1] ** 2, -1) + (p[..., -1] - 0.5) ** 2) / 0.8**2),
        compact_bump_values,
        lambda p: (np.sum(p**2, -1) <= 1.44).astype(float),
    ]
    cmeas = {}
    for d, N in ((1, 16), (2, 12), (3, 8)):
        grid = GrushinGrid(d, 3.0, 3.0, N, N)
        rk = RadiiSet(tuple(np.geomspace(0.9 * min_node_gap(grid), 1.2, 8)))
        rx = RadiiSet(tuple(np.geomspace(grid.h_x, 2 * grid.L_x * math.sqrt(d), 16)))
        ru = RadiiSet(tuple(np.geomspace(grid.h_u, 2 * grid.L_u, 16)))
        worst = 0.0
        for bump_fn in bumps:
            f = sample_grushin(grid, bump_fn)
            mk = grushin_maximal(f, rk).values
            it = iterated_maximal(f, rx, ru).values
            ratio = np.where(it > 0, mk / np.maximum(it, 1e-300), np.inf)
            worst = max(worst, float(ratio.max()))
        cmeas[d] = worst
        checks.append((f"domination finite d={d} C={worst:.3f}", math.isfinite(worst)))
    spread = max(cmeas.values()) / min(cmeas.values())
    checks.append((f"C_meas stability x{spread:.3f}", spread <= 1.5))
    elapsed = time.time() - t0
    checks.append((f"runtime {elapsed:.0f}s < 300s", elapsed < 300.0))
    return _result(
        "criterion 9: grushin suite",
        t0,
        checks,
        extra="C_meas " + ", ".join(f"d={d}: {v:.3f}" for d, v in cmeas.items()),
    )


# -- criterion 10 ------------------------------------------------------------


def _stability_scan() -> tuple[list, str]:
    # one config per operator: the exponent grid is the product of the lists,
    # and the per-dimension operator output is shared across all its rows
    reports = []
    for op in ("HL", "MULT_L"):
        cfg = ScanConfig(
            operator=op,
            d_range=(1, 2, 3, 4, 5),
            p_list=(2.0, 3.0),
            q_list=(2.0, 1.5),
            family="gaussian",
            n_members=4,
            seed=0,
            l=1,
        )
        reports.append(run_scan(cfg))
    text = "".join(csv_text(r, mask_wall=True) for r in reports)
    return reports, text


def criterion_dimension_stability() -> CheckResult:
    """Gaussian-family scan over d = 1..5 including (p,q) = (2,2) and
    (3,1.5): all computable ratios finite, maximal ratios within a factor 3
    across d, and the CSV reproduced byte-identically on a seeded re-run."""
    t0 = time.time()
    checks: list[tuple[str, bool]] = []
    reports, text1 = _stability_scan()
    hl_ratios: dict[tuple[float, float], list[float]] = {}
    for rep in reports:
        for row in rep.rows:
            if row.extra.startswith("error="):
                ok = row.operator == "MULT_L" and row.d == 1
                checks.append((f"{row.operator} d={row.d} error row expected", ok))
                continue
            checks.append(
                (f"{row.operator} d={row.d} p={row.p} q={row.q} finite", math.isfinite(row.ratio))
            )
            if row.operator == "HL":
                hl_ratios.setdefault((row.p, row.q), []).append(row.ratio)
        checks.append((f"{rep.rows[0].operator} contract", not report_violations(rep)))
    spreads = []
    for p, q in ((2.0, 2.0), (3.0, 1.5)):
        ratios = hl_ratios[(p, q)]
        checks.append((f"HL (p={p}, q={q}) covers d=1..5", len(ratios) == 5))
        spread = max(ratios) / min(ratios)
        spreads.append(f"HL (p={p}, q={q}) x{spread:.3f}")
        checks.append((f"HL spread (p={p}, q={q}) {spread:.2f}", spread <= 3.0))
    _, text2 = _stability_scan()
    checks.append(("CSV byte-identical re-run", text1 == text2))
    elapsed = time.time() - t0
    checks.append((f"runtime {elapsed:.0f}s < 600s", elapsed < 600.0))
    return _result(
        "criterion 10: dimension-stability probe", t0, checks, extra="; ".join(spreads)
    )


CRITERIA: dict[str, Callable[[], CheckResult]] = {
    "identity": criterion_identity_suite,
    "brute-force": criterion_brute_force,
    "multiplier": criterion_multiplier_exactness,
    "decay": criterion_decay_constants,
    "kernel-oracle": criterion_kernel_cross_oracle,
    "square-function": criterion_square_function,
    "rotations": criterion_rotation_identities,
    "slope": criterion_decay_slope,
    "grushin": criterion_grushin_suite,
    "stability": criterion_dimension_stability,
}

_QUICK = ("identity", "brute-force", "multiplier", "square-function")


def run_all(quick: bool = False) -> list[CheckResult]:
    names = _QUICK if quick else tuple(CRITERIA)
    return [CRITERIA[name]() for name in names]
