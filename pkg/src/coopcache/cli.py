"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 infeasible budget,
3 indivisible file size, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from .delivery import NonDistinctDemand, simulate
from .lp import solve
from .model import (
    CacheBudget,
    InfeasibleBudget,
    OutOfDomain,
    classify_region,
    feasible_grid,
    format_fraction,
    require_feasible,
    to_fraction,
)
from .placement import IndivisibleFileSize, minimal_file_size
from .theorem import BASELINE_POINTS, broadcast_baseline_fdt, closed_form_fdt, tx_only_fdt
from .verify import run_checks

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INDIVISIBLE, EXIT_VERIFY = range(5)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction_arg(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid fraction or decimal: {text!r}")


def _step_arg(text: str) -> Fraction:
    step = _fraction_arg(text)
    if not 0 < step <= Fraction(1, 2):
        raise argparse.ArgumentTypeError(f"step must satisfy 0 < step <= 1/2, got {step}")
    return step


def _file_size_arg(text: str):
    if text == "auto":
        return None
    try:
        size = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {text!r}")
    if size <= 0:
        raise argparse.ArgumentTypeError("file size must be positive")
    return size


def _demand_arg(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated file indices, got {text!r}")


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _budget(args) -> CacheBudget:
    budget = CacheBudget(args.mu_r, args.mu_t)
    require_feasible(budget)
    return budget


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def solve_record(budget: CacheBudget) -> dict:
    sol = solve(budget)
    return {
        "mu_r": format_fraction(budget.mu_r),
        "mu_t": format_fraction(budget.mu_t),
        "feasible": True,
        "region": str(classify_region(budget)),
        "fdt_lp": format_fraction(sol.tau),
        "fdt_closed_form": format_fraction(closed_form_fdt(budget)),
        "ratios": {name: format_fraction(v) for name, v in sol.ratios.items()},
    }


def cmd_solve(args) -> int:
    rec = solve_record(_budget(args))
    if args.format == "json":
        print(json.dumps(rec, indent=2))
    else:
        print(f"mu_r = {rec['mu_r']}, mu_t = {rec['mu_t']}  region {rec['region']}")
        print(f"FDT (LP)          = {rec['fdt_lp']}")
        print(f"FDT (closed form) = {rec['fdt_closed_form']}")
        nonzero = [f"{k}={v}" for k, v in rec["ratios"].items() if v != "0"]
        print("ratios: " + ", ".join(nonzero))
    if rec["fdt_lp"] != rec["fdt_closed_form"]:
        return _fail(EXIT_VERIFY, "LP optimum disagrees with the closed form")
    return EXIT_OK


def sweep_rows(step: Fraction):
    for b in sorted(feasible_grid(step), key=lambda b: (b.mu_r, b.mu_t)):
        yield (
            format_fraction(b.mu_r),
            format_fraction(b.mu_t),
            str(classify_region(b)),
            format_fraction(closed_form_fdt(b)),
        )


def cmd_sweep(args) -> int:
    rows = list(sweep_rows(args.step))
    try:
        with _open_out(args.out) as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mu_r", "mu_t", "region", "fdt"])
            w.writerows(rows)
    except OSError as exc:
        return _fail(EXIT_USAGE, f"cannot write {args.out}: {exc}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    budget = _budget(args)
    sol = solve(budget)
    try:
        sc = simulate(
            budget,
            sol.ratios,
            num_files=args.files,
            file_size=args.file_size,
            seed=args.seed,
            demand=args.demand,
        )
    except IndivisibleFileSize as exc:
        return _fail(
            EXIT_INDIVISIBLE,
            f"{exc}; use a multiple of {exc.required_multiple} (or --file-size auto)",
        )
    rep = sc.report
    out = {
        "mu_r": format_fraction(budget.mu_r),
        "mu_t": format_fraction(budget.mu_t),
        "region": str(classify_region(budget)),
        "fdt_lp": format_fraction(sol.tau),
        "ratios": {n: format_fraction(v) for n, v in sol.ratios.items()},
        "minimal_file_size": minimal_file_size(sol.ratios),
        **rep.to_dict(),
    }
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(f"mu_r = {out['mu_r']}, mu_t = {out['mu_t']}  region {out['region']}")
        print(f"L = {rep.num_files} files of F = {rep.file_size} bits, demand {rep.demand}")
        for ph in rep.phases:
            print(
                f"  {ph['kind']:<22} {ph['messages']:>2} msgs {ph['bits']:>6} bits"
                f"  DoF {ph['dof']:<5} time {ph['duration']}"
            )
        print(f"measured FDT = {out['measured_fdt']}  (LP {out['fdt_lp']})")
        print(f"decoded: {rep.decode_ok}")
        print(f"tx occupancy: {rep.tx_occupancy}  rx occupancy: {rep.rx_occupancy}")
    if not rep.all_decoded or rep.measured_fdt != sol.tau:
        return _fail(EXIT_VERIFY, "simulation disagrees with the LP optimum")
    return EXIT_OK


def cmd_verify(args, predicates=None) -> int:
    results = run_checks(args.step, args.oracle_samples, args.seed, predicates)
    for res in results:
        status = "ok" if res.ok else "FAIL"
        print(f"{res.name:<32} {res.passed:>6} passed {len(res.failures):>6} failed  {status}")
    failed = [r for r in results if not r.ok]
    if failed:
        return _fail(EXIT_VERIFY, f"{failed[0].name}: {failed[0].failures[0]}")
    print("all checks passed")
    return EXIT_OK


def compare_rows():
    for mu_r in BASELINE_POINTS:
        ours = closed_form_fdt(CacheBudget(mu_r, 1))
        yield format_fraction(mu_r), format_fraction(ours), format_fraction(broadcast_baseline_fdt(mu_r))


def tx_only_rows(step=Fraction(1, 12)):
    mu_t = Fraction(1, 3)
    while mu_t <= 1:
        yield format_fraction(mu_t), format_fraction(tx_only_fdt(mu_t))
        mu_t += step


def cmd_compare(args) -> int:
    out = Path(args.out)
    tx_out = Path(args.tx_only_out) if args.tx_only_out else out.with_name(out.stem + "_tx_only.csv")
    try:
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mu_r", "ours_at_mu_t_1", "baseline"])
            w.writerows(compare_rows())
        with open(tx_out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mu_t", "ours_at_mu_r_0"])
            w.writerows(tx_only_rows())
    except OSError as exc:
        return _fail(EXIT_USAGE, f"cannot write output: {exc}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coopcache", description="Storage-latency tradeoff of the 3x3 cache-aided interference channel")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def budget_flags(sp):
        sp.add_argument("--mu-r", type=_fraction_arg, required=True, help="normalized receiver cache size")
        sp.add_argument("--mu-t", type=_fraction_arg, required=True, help="normalized transmitter cache size")
        sp.add_argument("--format", choices=("json", "text"), default="text")

    sp = sub.add_parser("solve", help="solve the LP and compare with the closed form")
    budget_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("sweep", help="closed-form FDT over a grid, as CSV")
    sp.add_argument("--step", type=_step_arg, default=Fraction(1, 60))
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", help="bit-level placement and delivery")
    budget_flags(sp)
    sp.add_argument("--files", type=int, default=3)
    sp.add_argument("--file-size", type=_file_size_arg, default=None, help="bits per file, or 'auto'")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--demand", type=_demand_arg, default=(1, 2, 3), help="e.g. 2,3,1")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="run the consistency checks")
    sp.add_argument("--step", type=_step_arg, default=Fraction(1, 60))
    sp.add_argument("--oracle-samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("compare", help="baseline comparison at mu_t = 1, as CSV")
    sp.add_argument("--out", required=True)
    sp.add_argument("--tx-only-out", default=None, help="defaults to <out>_tx_only.csv")
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except InfeasibleBudget as exc:
        return _fail(EXIT_INFEASIBLE, str(exc))
    except (OutOfDomain, NonDistinctDemand, ValueError) as exc:
        return _fail(EXIT_USAGE, str(exc))


if __name__ == "__main__":
    sys.exit(main())
