"""Command-line driver: scans, decay tables, Grushin sweeps, and the
self-check suite.

Exit codes: 0 on success, 1 on usage errors, 2 on any failed contract
(report violations or failed checks).  MAXOP_THREADS caps FFT parallelism.
"""

from __future__ import annotations

import argparse
import sys

from .multiplier import decay_constants, decay_table_csv
from .scan import OPERATORS, ScanConfig, emit_csv, emit_plotdata, report_violations, run_scan

__all__ = ["main"]

USAGE_EXIT = 1
CONTRACT_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we keep 2 for contracts
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _grid(text: str) -> tuple[float, int]:
    L, N = text.split(",")
    return (float(L), int(N))


def _add_scan_flags(p: _Parser, with_operator: bool = True) -> None:
    if with_operator:
        p.add_argument("--operator", choices=OPERATORS)
    p.add_argument("--config", help="JSON file with flat ScanConfig keys")
    p.add_argument("--d_range", type=_int_list, help="comma-separated dimensions")
    p.add_argument("--p_list", type=_float_list)
    p.add_argument("--q_list", type=_float_list)
    p.add_argument("--family")
    p.add_argument("--n_members", type=int)
    p.add_argument("--grid", type=_grid, help="L,N (default: per-dimension)")
    p.add_argument("--radii_K", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--plotdata", help="optional plot-ready data path")


def _config_from_args(args, forced_operator: str | None = None) -> ScanConfig:
    cfg = ScanConfig.from_json(args.config) if args.config else ScanConfig()
    overrides = dict(
        d_range=args.d_range,
        p_list=args.p_list,
        q_list=args.q_list,
        family=args.family,
        n_members=args.n_members,
        grid=args.grid,
        radii_K=args.radii_K,
        seed=args.seed,
        l=args.l,
        k=args.k,
    )
    if forced_operator is not None:
        overrides["operator"] = forced_operator
    elif getattr(args, "operator", None) is not None:
        overrides["operator"] = args.operator
    return cfg.with_overrides(**overrides)


def _run_and_emit(cfg: ScanConfig, out: str, plotdata: str | None) -> int:
    report = run_scan(cfg)
    emit_csv(report, out)
    if plotdata:
        emit_plotdata(report, plotdata)
    violations = report_violations(report)
    for v in violations:
        print(f"contract violation: {v}", file=sys.stderr)
    errors = [r for r in report.rows if r.extra.startswith("error=")]
    for r in errors:
        print(f"row skipped: {r.operator} d={r.d} p={r.p} q={r.q}: {r.extra}", file=sys.stderr)
    print(f"wrote {len(report.rows)} rows to {out}")
    return CONTRACT_EXIT if violations else 0


def main(argv=None) -> int:
    parser = _Parser(prog="maxop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="dimension/exponent sweep of one operator")
    _add_scan_flags(p_scan)

    p_decay = sub.add_parser("decay", help="multiplier decay-constant table")
    p_decay.add_argument("--d", type=int, default=3)
    p_decay.add_argument("--l_max", type=int, default=8)
    p_decay.add_argument("--out", required=True)

    p_check = sub.add_parser("check", help="run the property/acceptance suite")
    p_check.add_argument(
        "--quick", action="store_true", help="skip the long-running criteria"
    )

    p_gr = sub.add_parser("grushin", help="Grushin maximal-operator scans (MK and MK_iter)")
    _add_scan_flags(p_gr, with_operator=False)

    args = parser.parse_args(argv)

    if args.command == "scan":
        return _run_and_emit(_config_from_args(args), args.out, args.plotdata)

    if args.command == "decay":
        rows = decay_constants(args.d, args.l_max)
        decay_table_csv(rows, args.out)
        print(f"wrote decay table for d={args.d}, l=1..{args.l_max} to {args.out}")
        return 0

    if args.command == "check":
        from .checks import run_all

        results = run_all(quick=args.quick)
        failed = [r for r in results if not r.passed]
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status} {r.name} ({r.seconds:.1f}s): {r.detail}")
        return CONTRACT_EXIT if failed else 0

    if args.command == "grushin":
        rc = 0
        base, ext = args.out.rsplit(".", 1) if "." in args.out else (args.out, "csv")
        for op in ("MK", "MK_iter"):
            cfg = _config_from_args(args, forced_operator=op)
            out = f"{base}_{op.lower()}.{ext}"
            pd = f"{args.plotdata}_{op.lower()}" if args.plotdata else None
            rc = max(rc, _run_and_emit(cfg, out, pd))
        return rc

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
