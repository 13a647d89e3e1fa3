"""Square function over multiplicative dilations and its annulus L^2 bound.

The dilation integral int_0^inf |...|^2 dt/t is discretized by a log-midpoint
rule: nodes t_i = A exp((i + 1/2) du) with constant weight du, so the weights
over any subinterval resolved by the grid sum exactly to its log-length.  For
an annulus-supported profile the integrand vanishes for t outside
[a/s_max, b/s_min] (s ranging over the nonzero frequency radii of the grid),
which fixes the node range.

The builder additionally locks the step to an integer division of the
support's log-length log(b/a).  Every frequency s then sees exactly
floor(log(b/a)/du) in-support nodes, so for a sharp annulus cutoff the
discrete t-sum reproduces the exact continuum value C^2 log(b/a) for every s
simultaneously; that is what makes the Plancherel equality case below an
equality and not an O(1/n) approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, GridSpec, VectorField, _wrap, forward_transform, frequency_radii, inverse_transform
from .multiplier import RadialProfile
from .norms import lp_norm, lq_pointwise

__all__ = ["TGrid", "default_tgrid", "sharp_annulus", "square_function", "prop2_check"]


def sharp_annulus(a: float, b: float, height: float = 1.0) -> RadialProfile:
    """Indicator-type profile height * chi_[a, b).

    Half-open membership: on a log-spaced dilation grid whose step divides
    log(b/a), every frequency then meets exactly log(b/a)/du in-support
    nodes even when a node ties with an edge, which keeps the Plancherel
    equality case exact.
    """
    if not (0.0 < a < b < math.inf):
        raise ValueError(f"need 0 < a < b < inf, got ({a}, {b})")

    def fn(s):
        s = np.asarray(s, dtype=float)
        return np.where((s >= a) & (s < b), height, 0.0)

    return RadialProfile(fn=fn, support=(a, b), sup_bound=height)


@dataclass(frozen=True, eq=False)
class TGrid:
    """Log-spaced dilation nodes with dt/t weights."""

    ts: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if ts.ndim != 1 or ts.size == 0 or w.shape != ts.shape:
            raise ValueError("TGrid needs matching nonempty 1-D nodes and weights")
        if np.any(ts <= 0) or np.any(np.diff(ts) <= 0):
            raise ValueError("TGrid nodes must be positive and increasing")
        if np.any(w <= 0):
            raise ValueError("TGrid weights must be positive")
        ts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.ts.size


def _require_annulus(profile: RadialProfile) -> tuple[float, float]:
    a, b = profile.support
    if not (0.0 < a < b < math.inf):
        raise ValueError(
            f"profile must be supported in an annulus 0 < a < b < inf, got {profile.support}"
        )
    return a, b


def default_tgrid(profile: RadialProfile, spec: GridSpec, n: int = 128) -> TGrid:
    """Dilation grid covering [a/s_max, b/s_min] with du dividing log(b/a)."""
    a, b = _require_annulus(profile)
    s_min = spec.freq_step
    s_max = spec.freq_extent * math.sqrt(spec.d)
    lo = a / s_max
    span = math.log((b / s_min) / lo)
    du0 = span / n
    m = max(1, round(math.log(b / a) / du0))
    du = math.log(b / a) / m
    count = math.ceil(span / du - 1e-12)
    ts = lo * np.exp((np.arange(count) + 0.5) * du)
    return TGrid(ts=ts, weights=np.full(count, du))


def square_function(f: GridFunction, profile: RadialProfile, tgrid: TGrid) -> GridFunction:
    """g(x) = (sum_t |(fhat profile(t .))^v(x)|^2 w_t)^(1/2)."""
    f.require("physical")
    _require_annulus(profile)
    fhat = forward_transform(f)
    freq = frequency_radii(f.spec)
    acc = np.zeros(f.spec.shape)
    for t, w in zip(tgrid.ts, tgrid.weights):
        mult = profile(t * freq)
        if not np.any(mult):
            continue
        piece = inverse_transform(_wrap(f.spec, fhat.values * mult, "frequency"))
        acc += w * np.abs(piece.values) ** 2
    return _wrap(f.spec, np.sqrt(acc), "physical")


def prop2_check(F: VectorField, profile: RadialProfile, n_t: int = 128) -> tuple[float, float]:
    """L^2 aggregate of member square functions vs the annulus bound.

    Returns (lhs, rhs) with lhs the L^2 norm of the l^2 aggregation of
    g(f_n) and rhs = C sqrt(log rho) times the same norm of the inputs,
    where C is the profile's recorded sup bound and rho its annulus ratio.
    The inequality lhs <= rhs holds up to the dilation-grid discretization.
    """
    a, b = _require_annulus(profile)
    if profile.sup_bound is None:
        raise ValueError("prop2_check needs a profile with a recorded sup_bound")
    tg = default_tgrid(profile, F.spec, n=n_t)
    gs = VectorField(tuple(square_function(m, profile, tg) for m in F))
    lhs = lp_norm(lq_pointwise(gs, 2.0), 2.0)
    rhs = profile.sup_bound * math.sqrt(math.log(b / a)) * lp_norm(lq_pointwise(F, 2.0), 2.0)
    return lhs, rhs
