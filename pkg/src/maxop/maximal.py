"""Centered Hardy-Littlewood maximal operator, weighted variant, 1-D variant.

Discrete convention
-------------------
Ball membership on the node lattice is *strict*: an offset ``delta`` (in cells)
belongs to the ball of radius r iff ``|delta| h < r``, i.e. ``|delta|^2 <= T``
with ``T = max{n : n h^2 < r^2}``.  With the minimal radius r = h this leaves
exactly the center cell, which makes ``Mf >= |f|`` hold pointwise and sends
constants to themselves at every node; a closed ball at r = h would pull in
the 2d axis neighbors and break both.

Numerators sum |f| over in-cube nodes (zero extension outside the cube);
denominators count (or weight-sum) the ball on the *infinite* lattice, so
averages near the boundary are biased downward, exactly like the continuum
operator acting on a function supported in the cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from .grid import GridFunction, GridSpec, _wrap, fft_workers

__all__ = ["RadiiSet", "default_radii", "hl_maximal", "weighted_maximal", "maximal_1d"]

_EXACT_PATH_MAX_NODES = 1100


@dataclass(frozen=True)
class RadiiSet:
    """Strictly increasing positive radii discretizing the sup over r > 0."""

    radii: tuple[float, ...]

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii:
            raise ValueError("RadiiSet must be nonempty")
        if radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be positive and strictly increasing")
        object.__setattr__(self, "radii", radii)

    def __iter__(self):
        return iter(self.radii)

    def __len__(self):
        return len(self.radii)


def default_radii(spec: GridSpec, K: int = 32) -> RadiiSet:
    """K log-spaced radii from h to the cube diameter 2L*sqrt(d)."""
    if K < 2:
        raise ValueError(f"need at least 2 radii, got K={K}")
    return RadiiSet(tuple(np.geomspace(spec.h, 2.0 * spec.L * math.sqrt(spec.d), K)))


def _as_radii(radii) -> tuple[float, ...]:
    if isinstance(radii, RadiiSet):
        return radii.radii
    return RadiiSet(tuple(radii)).radii


def _strict_bound(r: float, h: float) -> int:
    """Largest integer n with n*h^2 < r^2 (strict lattice-ball bound)."""
    t = int((r * r) / (h * h)) + 2
    while t > 0 and t * h * h >= r * r:
        t -= 1
    return t


def _sq_norm_hist(d: int, tmax: int) -> np.ndarray:
    """hist[n] = number of integer lattice points in Z^d with |delta|^2 = n <= tmax."""
    base = np.zeros(tmax + 1)
    base[0] = 1.0
    for j in range(1, math.isqrt(tmax) + 1):
        base[j * j] = 2.0
    out = base
    for _ in range(d - 1):
        out = np.convolve(out, base)[: tmax + 1]
    return out


def _cumulative_weights(d: int, tmax: int, k: int, h: float) -> np.ndarray:
    """W[T] = sum over lattice offsets with |delta|^2 <= T of (|delta| h)^k."""
    hist = _sq_norm_hist(d, tmax)
    n = np.arange(tmax + 1, dtype=float)
    if k == 0:
        w = hist
    else:
        w = hist * (n * h * h) ** (k / 2.0)
    return np.cumsum(w)


def _validate_radii_for_spec(radii: tuple[float, ...], spec_like_h: float, limit: float) -> None:
    if radii[-1] > limit + spec_like_h:
        raise ValueError(
            f"max radius {radii[-1]} exceeds the cube diameter {limit}; "
            "averages beyond it only dilute into the zero extension"
        )


def _ball_max_values(vals: np.ndarray, h: float, radii: tuple[float, ...], k: int) -> np.ndarray:
    """max over r of weighted lattice-ball averages of |vals| (zero-extended)."""
    a = np.abs(np.asarray(vals, dtype=float))
    d = a.ndim
    tmax = _strict_bound(radii[-1], h)
    denom = _cumulative_weights(d, tmax, k, h)
    if a.size <= _EXACT_PATH_MAX_NODES:
        return _ball_max_exact(a, h, radii, k, denom)
    return _ball_max_fft(a, h, radii, k, denom)


def _ball_max_exact(a, h, radii, k, denom):
    # quadratic-cost reference path; numerators are per-node sums over the
    # masked flat array in linear index order
    shape = a.shape
    d = a.ndim
    idx = np.indices(shape).reshape(d, -1)
    d2 = np.zeros((a.size, a.size), dtype=np.int64)
    for ax in range(d):
        diff = idx[ax][:, None] - idx[ax][None, :]
        d2 += diff * diff
    flat = a.reshape(-1)
    out = np.zeros(a.size)
    for r in radii:
        t = _strict_bound(r, h)
        den = denom[t]
        if den <= 0:
            continue
        if k == 0:
            for i in range(a.size):
                sel = flat[d2[i] <= t]
                out[i] = max(out[i], float(np.sum(sel)) / den)
        else:
            w2 = (d2.astype(float) * (h * h)) ** (k / 2.0)
            for i in range(a.size):
                mask = d2[i] <= t
                out[i] = max(out[i], float(np.sum(flat[mask] * w2[i][mask])) / den)
    return out.reshape(shape)


def _ball_max_fft(a, h, radii, k, denom):
    d = a.ndim
    N = a.shape[0]
    out = np.zeros_like(a)
    fhat_cache: dict[tuple[int, ...], np.ndarray] = {}
    n2_cache: dict[int, np.ndarray] = {}
    conv_cache: dict[tuple[int, int], np.ndarray] = {}
    for r in radii:
        t = _strict_bound(r, h)
        den = denom[t]
        if den <= 0:
            continue
        reach = min(math.isqrt(t), N - 1)
        t_eff = t if t < d * reach * reach else -1  # -1: ball covers the reach box
        key = (reach, t_eff)
        conv = conv_cache.get(key)
        if conv is None:
            mshape = tuple(_fft.next_fast_len(N + reach) for _ in range(d))
            fhat = fhat_cache.get(mshape)
            if fhat is None:
                pad = np.zeros(mshape)
                pad[tuple(slice(0, N) for _ in range(d))] = a
                fhat = _fft.rfftn(pad, workers=fft_workers())
                fhat_cache[mshape] = fhat
            n2 = n2_cache.get(reach)
            if n2 is None:
                off2 = (np.arange(-reach, reach + 1).astype(float)) ** 2
                n2 = np.zeros((2 * reach + 1,) * d)
                for ax in range(d):
                    sh = [1] * d
                    sh[ax] = off2.size
                    n2 = n2 + off2.reshape(sh)
                n2_cache[reach] = n2
            if k == 0:
                st = (n2 <= t).astype(float)
            else:
                st = np.where(n2 <= t, (n2 * (h * h)) ** (k / 2.0), 0.0)
            spad = np.zeros(mshape)
            spad[tuple(slice(0, 2 * reach + 1) for _ in range(d))] = st
            conv = _fft.irfftn(_fft.rfftn(spad, workers=fft_workers()) * fhat, s=mshape, workers=fft_workers())
            conv = conv[tuple(slice(reach, reach + N) for _ in range(d))].copy()
            conv_cache[key] = conv
        np.maximum(out, conv / den, out=out)
    return np.maximum(out, 0.0)


def _require_real_physical(f: GridFunction) -> None:
    f.require("physical")
    if not f.is_real:
        raise ValueError("maximal operators act on real-valued grid functions")


def hl_maximal(f: GridFunction, radii) -> GridFunction:
    """Centered Hardy-Littlewood maximal function over the RadiiSet."""
    _require_real_physical(f)
    rs = _as_radii(radii)
    _validate_radii_for_spec(rs, f.spec.h, 2.0 * f.spec.L * math.sqrt(f.spec.d))
    return _wrap(f.spec, _ball_max_values(f.values, f.spec.h, rs, 0), "physical")


def weighted_maximal(f: GridFunction, k: int, radii) -> GridFunction:
    """Ball averages against the weight |y|^k, maximized over the RadiiSet.

    k = 0 reduces to :func:`hl_maximal` exactly.  For k >= 1 the center offset
    carries zero weight; a radius whose ball holds only the center therefore
    has an empty weighted average, which is taken as 0.
    """
    _require_real_physical(f)
    if k < 0 or int(k) != k:
        raise ValueError(f"weight exponent must be a nonnegative integer, got {k}")
    rs = _as_radii(radii)
    _validate_radii_for_spec(rs, f.spec.h, 2.0 * f.spec.L * math.sqrt(f.spec.d))
    return _wrap(f.spec, _ball_max_values(f.values, f.spec.h, rs, int(k)), "physical")


def _interval_max_values(vals: np.ndarray, h: float, radii: tuple[float, ...], axis: int) -> np.ndarray:
    """Per-fiber 1-D centered interval averages maximized over radii."""
    a = np.abs(np.asarray(vals, dtype=float))
    n = a.shape[axis]
    a_moved = np.moveaxis(a, axis, -1)
    csum = np.concatenate(
        [np.zeros(a_moved.shape[:-1] + (1,)), np.cumsum(a_moved, axis=-1)], axis=-1
    )
    i = np.arange(n)
    out = np.zeros_like(a_moved)
    for r in radii:
        m = math.isqrt(_strict_bound(r, h))
        den = 2 * m + 1
        hi = np.minimum(i + m, n - 1) + 1
        lo = np.maximum(i - m, 0)
        win = np.take(csum, hi, axis=-1) - np.take(csum, lo, axis=-1)
        np.maximum(out, win / den, out=out)
    return np.moveaxis(out, -1, axis)


def maximal_1d(f: GridFunction, radii, axis: int = 0) -> GridFunction:
    """1-D centered maximal averages along one axis, independently per fiber."""
    _require_real_physical(f)
    if not (0 <= axis < f.spec.d):
        raise ValueError(f"axis {axis} out of range for d={f.spec.d}")
    rs = _as_radii(radii)
    _validate_radii_for_spec(rs, f.spec.h, 2.0 * f.spec.L * math.sqrt(f.spec.d))
    return _wrap(f.spec, _interval_max_values(f.values, f.spec.h, rs, axis), "physical")
