"""Discrete L^p norms, pointwise l^q reductions, mixed norms, level-set measures.

Integrals are plain Riemann sums with cell weight h^d; reductions rely on
numpy's pairwise summation, which is deterministic for a fixed array layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, VectorField, _wrap

__all__ = [
    "Exponent",
    "lp_norm",
    "lq_pointwise",
    "mixed_norm",
    "mixed_norm_values",
    "level_measure",
]


@dataclass(frozen=True)
class Exponent:
    """An exponent p with 1 < p < inf, or p = inf."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (v > 1.0):
            raise ValueError(f"exponent must satisfy p > 1 (or inf), got {v}")
        object.__setattr__(self, "value", v)

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)


def _pvalue(p) -> float:
    if isinstance(p, Exponent):
        return p.value
    return Exponent(float(p)).value


def lp_norm(f: GridFunction, p) -> float:
    """(sum |f|^p h^d)^(1/p); max |f| for p = inf."""
    f.require("physical")
    pv = _pvalue(p)
    a = np.abs(f.values)
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite values in lp_norm input")
    if math.isinf(pv):
        return float(a.max())
    return float((np.sum(a**pv) * f.spec.cell_volume) ** (1.0 / pv))


def lq_pointwise(F: VectorField, q) -> GridFunction:
    """Node-wise (sum_n |f_n|^q)^(1/q); q must be finite."""
    qv = _pvalue(q)
    if math.isinf(qv):
        raise ValueError("lq_pointwise requires a finite q")
    acc = np.zeros(F.spec.shape)
    for m in F:
        m.require("physical")
        acc += np.abs(m.values) ** qv
    return _wrap(F.spec, acc ** (1.0 / qv), "physical")


def mixed_norm(F: VectorField, p, q) -> float:
    """The L^p(l^q) norm: lp_norm of the pointwise l^q reduction."""
    return lp_norm(lq_pointwise(F, q), p)


def mixed_norm_values(arrays, p, q, cell_volume: float) -> float:
    """Mixed norm on raw sample arrays sharing one cell volume (used for
    product grids that carry no GridSpec)."""
    pv, qv = _pvalue(p), _pvalue(q)
    if math.isinf(qv):
        raise ValueError("mixed_norm_values requires a finite q")
    acc = np.zeros(np.shape(arrays[0]))
    for a in arrays:
        acc += np.abs(np.asarray(a)) ** qv
    red = acc ** (1.0 / qv)
    if math.isinf(pv):
        return float(red.max())
    return float((np.sum(red**pv) * cell_volume) ** (1.0 / pv))


def level_measure(g: GridFunction, lam: float) -> float:
    """h^d times the number of nodes where g exceeds lam (superlevel-set measure)."""
    g.require("physical")
    if not (lam > 0):
        raise ValueError(f"level threshold must be positive, got {lam}")
    vals = g.values
    if np.iscomplexobj(vals) or np.any(vals < 0):
        raise ValueError("level_measure expects a real nonnegative GridFunction")
    return float(np.count_nonzero(vals > lam)) * g.spec.cell_volume
