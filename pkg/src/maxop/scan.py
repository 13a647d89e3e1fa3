"""Experiment driver: dimension/exponent sweeps of mixed-norm ratios.

A scan fixes one operator and one test-function family, then walks the
requested dimensions and (p, q) exponent pairs, recording the mixed-norm
ratio ||op F|| / ||F|| per row.  Operator outputs are computed once per
dimension (and per descent split, which depends on (p, q)) and shared among
the exponent rows.  Everything is seeded, and rows are sorted before
emission, so a config re-run reproduces the CSV byte for byte apart from
the wall_ms column.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .families import FAMILIES, family_values
from .grid import GridFunction, GridSpec, VectorField, _wrap, node_coordinates
from .grushin import (
    GrushinFunction,
    GrushinGrid,
    cc_domination_note,
    grushin_maximal,
    iterated_maximal,
    min_node_gap,
)
from .maximal import RadiiSet, default_radii, hl_maximal, weighted_maximal
from .multiplier import dyadic_piece, maximal_multiplier, spherical_maximal
from .norms import mixed_norm, mixed_norm_values
from .rotations import DescentSplit, descent_maximal, dimension_split, haar_rotation
from .squarefn import default_tgrid, square_function

OPERATORS = ("HL", "HL_weighted", "SPH", "MULT_L", "SQFN", "DESCENT", "MK", "MK_iter")

CSV_HEADER = "operator,d,p,q,family,n_members,input_norm,output_norm,ratio,wall_ms,extra"

__all__ = [
    "OPERATORS",
    "ScanConfig",
    "ScanRow",
    "ScanReport",
    "run_scan",
    "emit_csv",
    "emit_plotdata",
    "csv_text",
    "report_violations",
]


def default_grid(d: int) -> tuple[float, int]:
    """Per-dimension grid defaults keeping any scan row desk-scale."""
    if d <= 3:
        return (4.0, 32)
    if d <= 5:
        return (4.0, 16)
    return (4.0, 8)


def _grushin_default_grid(d: int) -> tuple[float, int]:
    if d == 1:
        return (3.0, 12)
    if d == 2:
        return (3.0, 10)
    return (3.0, 8)


@dataclass(frozen=True)
class ScanConfig:
    """Flat scan configuration; JSON files use exactly these field names."""

    operator: str = "HL"
    d_range: tuple[int, ...] = (1, 2, 3)
    p_list: tuple[float, ...] = (2.0,)
    q_list: tuple[float, ...] = (2.0,)
    family: str = "gaussian"
    n_members: int = 4
    grid: tuple[float, int] | None = None  # (L, N); None -> per-d defaults
    radii_K: int = 32
    seed: int = 0
    l: int = 1  # dyadic index for MULT_L / SQFN
    k: int = 1  # weight exponent for HL_weighted

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator!r}; choose from {OPERATORS}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        object.__setattr__(self, "d_range", tuple(int(v) for v in self.d_range))
        object.__setattr__(self, "p_list", tuple(float(v) for v in self.p_list))
        object.__setattr__(self, "q_list", tuple(float(v) for v in self.q_list))
        if self.grid is not None:
            L, N = self.grid
            object.__setattr__(self, "grid", (float(L), int(N)))

    @classmethod
    def from_json(cls, path: str) -> "ScanConfig":
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def with_overrides(self, **kwargs) -> "ScanConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


@dataclass(frozen=True)
class ScanRow:
    operator: str
    d: int
    p: float
    q: float
    family: str
    n_members: int
    input_norm: float
    output_norm: float
    ratio: float
    wall_ms: float
    extra: str = ""


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.rows, key=lambda r: (r.operator, r.d, r.p, r.q)))
        object.__setattr__(self, "rows", ordered)


def _euclid_field(cfg: ScanConfig, d: int) -> tuple[GridSpec, VectorField]:
    L, N = cfg.grid if cfg.grid is not None else default_grid(d)
    spec = GridSpec(d, L, N)
    vals = family_values(cfg.family, node_coordinates(spec), cfg.n_members, cfg.seed, L)
    return spec, VectorField(tuple(_wrap(spec, v, "physical") for v in vals))


def _grushin_field(cfg: ScanConfig, d: int) -> tuple[GrushinGrid, list[GrushinFunction]]:
    L, N = cfg.grid if cfg.grid is not None else _grushin_default_grid(d)
    grid = GrushinGrid(d, L, L, N, N)
    vals = family_values(cfg.family, grid.node_points(), cfg.n_members, cfg.seed, L)
    return grid, [GrushinFunction(grid, v) for v in vals]


def _decay_slope_extra(spec: GridSpec, member: GridFunction) -> str:
    """log-log slope of the leading member over the first-axis ray, fitted on
    the radii window [2, 4] (clipped to the grid)."""
    vals = member.values
    center = (spec.N // 2,) * (spec.d - 1)
    ray = vals[(slice(None),) + center] if spec.d > 1 else vals
    x1 = spec.axis_nodes()
    rad = np.sqrt(x1**2 + (spec.d - 1) * (spec.h / 2.0) ** 2)
    sel = (rad >= 2.0) & (rad <= min(4.0, spec.L - spec.h)) & (x1 > 0) & (ray > 0)
    if np.count_nonzero(sel) < 3:
        return ""
    slope = np.polyfit(np.log(rad[sel]), np.log(ray[sel]), 1)[0]
    return f"slope={float(slope)!r}"


def _apply_euclid(cfg: ScanConfig, spec: GridSpec, F: VectorField, p: float, q: float):
    """Returns (list of output GridFunctions, extra string)."""
    radii = default_radii(spec, cfg.radii_K)
    op = cfg.operator
    if op == "HL":
        return [hl_maximal(m, radii) for m in F], ""
    if op == "HL_weighted":
        return [weighted_maximal(m, cfg.k, radii) for m in F], ""
    if op == "SPH":
        out = [spherical_maximal(m, radii) for m in F]
        extra = _decay_slope_extra(spec, out[0]) if cfg.family == "remark_bump" else ""
        return out, extra
    if op == "MULT_L":
        piece = dyadic_piece(spec.d, cfg.l)
        return [maximal_multiplier(m, piece, radii) for m in F], ""
    if op == "SQFN":
        piece = dyadic_piece(spec.d, cfg.l)
        tg = default_tgrid(piece, spec)
        return [square_function(m, piece, tg) for m in F], ""
    if op == "DESCENT":
        split = DescentSplit(spec.d, dimension_split(p, q))
        theta = haar_rotation(spec.d, cfg.seed)
        rs = RadiiSet(tuple(np.geomspace(spec.h, spec.L / 2.0, min(cfg.radii_K, 8))))
        return (
            [descent_maximal(m, theta, split, rs, seed=cfg.seed) for m in F],
            f"d_prime={split.d_prime}",
        )
    raise ValueError(f"operator {op} is not a Euclidean-grid operator")


def _grushin_radii(grid: GrushinGrid, K: int) -> tuple[RadiiSet, RadiiSet, RadiiSet]:
    r0 = 0.9 * min_node_gap(grid)
    rk = RadiiSet(tuple(np.geomspace(r0, 1.2, min(K, 8))))
    rx = RadiiSet(tuple(np.geomspace(grid.h_x, 2.0 * grid.L_x * math.sqrt(grid.d), K)))
    ru = RadiiSet(tuple(np.geomspace(grid.h_u, 2.0 * grid.L_u, K)))
    return rk, rx, ru


def run_scan(cfg: ScanConfig) -> ScanReport:
    """Execute the sweep; per-row module errors become error-tagged rows."""
    rows: list[ScanRow] = []
    grushin_op = cfg.operator in ("MK", "MK_iter")
    for d in cfg.d_range:
        pq_pairs = [(p, q) for p in cfg.p_list for q in cfg.q_list]
        cache: dict = {}
        for p, q in pq_pairs:
            t0 = time.perf_counter()
            try:
                if grushin_op:
                    key = "grushin"
                    if key not in cache:
                        grid, members = _grushin_field(cfg, d)
                        rk, rx, ru = _grushin_radii(grid, cfg.radii_K)
                        if cfg.operator == "MK":
                            outs = [grushin_maximal(m, rk) for m in members]
                        else:
                            outs = [iterated_maximal(m, rx, ru) for m in members]
                        cache[key] = (grid, members, outs)
                    grid, members, outs = cache[key]
                    inn = mixed_norm_values([m.values for m in members], p, q, grid.cell_volume)
                    out = mixed_norm_values([m.values for m in outs], p, q, grid.cell_volume)
                    extra = f"cc_note={cc_domination_note()}"
                else:
                    split_key = dimension_split(p, q) if cfg.operator == "DESCENT" else None
                    key = ("euclid", split_key)
                    if key not in cache:
                        spec, F = _euclid_field(cfg, d)
                        outs, extra0 = _apply_euclid(cfg, spec, F, p, q)
                        cache[key] = (spec, F, outs, extra0)
                    spec, F, outs, extra = cache[key]
                    inn = mixed_norm(F, p, q)
                    out = mixed_norm(VectorField(tuple(outs)), p, q)
                wall = (time.perf_counter() - t0) * 1000.0
                rows.append(
                    ScanRow(
                        operator=cfg.operator,
                        d=d,
                        p=p,
                        q=q,
                        family=cfg.family,
                        n_members=cfg.n_members,
                        input_norm=inn,
                        output_norm=out,
                        ratio=out / inn,
                        wall_ms=wall,
                        extra=extra,
                    )
                )
            except ValueError as exc:
                wall = (time.perf_counter() - t0) * 1000.0
                rows.append(
                    ScanRow(
                        operator=cfg.operator,
                        d=d,
                        p=p,
                        q=q,
                        family=cfg.family,
                        n_members=cfg.n_members,
                        input_norm=float("nan"),
                        output_norm=float("nan"),
                        ratio=float("nan"),
                        wall_ms=wall,
                        extra=f"error={exc}",
                    )
                )
    return ScanReport(tuple(rows))


def _fmt(x: float) -> str:
    return repr(float(x))


def csv_text(report: ScanReport, mask_wall: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for r in report.rows:
        writer.writerow(
            [
                r.operator,
                r.d,
                _fmt(r.p),
                _fmt(r.q),
                r.family,
                r.n_members,
                _fmt(r.input_norm),
                _fmt(r.output_norm),
                _fmt(r.ratio),
                "masked" if mask_wall else _fmt(r.wall_ms),
                r.extra,
            ]
        )
    return buf.getvalue()


def emit_csv(report: ScanReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(report))


def emit_plotdata(report: ScanReport, path: str) -> None:
    """Per-(p, q) series of (d, ratio) pairs in whitespace-delimited blocks."""
    groups: dict[tuple, list[ScanRow]] = {}
    for r in report.rows:
        if math.isnan(r.ratio):
            continue
        groups.setdefault((r.operator, r.family, r.n_members, r.p, r.q), []).append(r)
    with open(path, "w") as fh:
        first = True
        for key in sorted(groups):
            op, fam, n, p, q = key
            if not first:
                fh.write("\n")
            first = False
            fh.write(f"# operator={op} family={fam} n_members={n} p={_fmt(p)} q={_fmt(q)}\n")
            for r in sorted(groups[key], key=lambda r: r.d):
                fh.write(f"{r.d} {_fmt(r.ratio)}\n")


def report_violations(report: ScanReport) -> list[str]:
    """Contract checks on a finished report (exit-code-2 conditions)."""
    bad = []
    for r in report.rows:
        if math.isnan(r.ratio):
            continue
        if not math.isfinite(r.ratio):
            bad.append(f"{r.operator} d={r.d} p={r.p} q={r.q}: ratio not finite")
        if abs(r.ratio - r.output_norm / r.input_norm) > 1e-12 * max(1.0, r.ratio):
            bad.append(f"{r.operator} d={r.d} p={r.p} q={r.q}: ratio inconsistent")
        if r.operator == "HL" and r.ratio < 1.0 - 1e-12:
            bad.append(f"HL d={r.d} p={r.p} q={r.q}: ratio {r.ratio} < 1")
        if r.wall_ms < 0:
            bad.append(f"{r.operator} d={r.d}: negative wall_ms")
    return bad
