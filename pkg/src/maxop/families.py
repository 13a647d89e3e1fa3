"""Deterministic test-function families for scans and property checks.

Each builder maps an array of node coordinates with shape (..., dim) to a
list of member value arrays.  Member parameters are fixed functions of the
member index (or of a seed, for the random family), so a (family, seed,
grid) triple always reproduces the same data.
"""

from __future__ import annotations

import numpy as np

FAMILIES = ("gaussian", "ball_indicator", "remark_bump", "random_bumps")

__all__ = ["FAMILIES", "family_values", "compact_bump_values"]


def compact_bump_values(points: np.ndarray) -> np.ndarray:
    """exp(-1/(1-|x|^2)) inside the unit ball, zero outside."""
    r2 = np.sum(points**2, axis=-1)
    out = np.zeros(r2.shape)
    inside = r2 < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
    return out


def family_values(
    name: str, points: np.ndarray, n_members: int, seed: int, box_halfwidth: float
) -> list[np.ndarray]:
    if n_members < 1:
        raise ValueError(f"need at least one member, got {n_members}")
    if name == "gaussian":
        widths = 0.8 + 0.3 * np.arange(n_members)
        return [np.exp(-np.sum(points**2, axis=-1) / w**2) for w in widths]
    if name == "ball_indicator":
        radii = 0.6 + 0.3 * np.arange(n_members)
        r2 = np.sum(points**2, axis=-1)
        return [(r2 <= rad**2).astype(float) for rad in radii]
    if name == "remark_bump":
        lead = compact_bump_values(points)
        return [lead] + [np.zeros(lead.shape) for _ in range(n_members - 1)]
    if name == "random_bumps":
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        dim = points.shape[-1]
        out = []
        for _ in range(n_members):
            center = rng.uniform(-box_halfwidth / 2.0, box_halfwidth / 2.0, size=dim)
            width = rng.uniform(0.5, 1.5)
            out.append(np.exp(-np.sum((points - center) ** 2, axis=-1) / width**2))
        return out
    raise ValueError(f"unknown family {name!r}; choose from {FAMILIES}")
