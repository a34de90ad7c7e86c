"""Boundary value problem commands: green, hw, critical, reduce-check."""
import argparse
import logging

from app.bvp.green import amplification_factor, check_properties, denominator, green_grid
from app.bvp.inequality import hw_check
from app.bvp.reduction import golden_checks
from app.bvp.solver import build_operator, critical_constant
from app.commands import parse_coefficients
from app.config import get_settings
from app.schemas import PotentialSpec, Verdict
from app.utils.errors import InvariantViolation
from app.utils.io import dumps_json, load_bvp_config, read_grid_csv, write_green_csv, write_matrix_csv

logger = logging.getLogger(__name__)

EXIT_CERTIFIED = 10


def _potential(args: argparse.Namespace) -> PotentialSpec:
    if args.q_const is not None:
        return PotentialSpec.const(args.q_const)
    if args.q_poly is not None:
        return PotentialSpec.poly(args.q_poly)
    return PotentialSpec.tabulated(read_grid_csv(args.q_csv))


def cmd_green(args: argparse.Namespace) -> int:
    config = load_bvp_config(args.config)
    nodes, grid = green_grid(config, args.grid)
    rows = write_green_csv(args.out, nodes, grid) if args.out else 0
    report = check_properties(config, args.grid, strict=True)

    print(f"G on {args.grid + 1}x{args.grid + 1} grid: min {report.min_value:.6g}, max {report.max_value:.6g}")
    print(
        f"nonnegative={report.nonnegative} monotone={report.monotone} "
        f"bracketed={report.bracketed} violations={report.violations}"
    )
    if args.out:
        print(f"wrote {rows} rows to {args.out}")
    payload = report.model_dump()
    payload.update(denominator=denominator(config), amplification_factor=amplification_factor(config), rows=rows)
    print(dumps_json(payload))
    return 0


def cmd_hw(args: argparse.Namespace) -> int:
    config = load_bvp_config(args.config)
    report = hw_check(_potential(args), config)
    print(f"lhs {report.lhs:.12g}  rhs {report.rhs:.12g}  margin {report.margin:.6g}")
    print(f"verdict: {report.verdict.value}")
    print(dumps_json(report.model_dump()))
    return EXIT_CERTIFIED if report.verdict is Verdict.NO_NONTRIVIAL_SOLUTION_CERTIFIED else 0


def cmd_critical(args: argparse.Namespace) -> int:
    config = load_bvp_config(args.config)
    n = args.n if args.n is not None else get_settings().nystrom_nodes
    result = critical_constant(config, n)
    if args.matrix_out:
        write_matrix_csv(args.matrix_out, build_operator(config, PotentialSpec.const(1.0), n).matrix)
    print(f"lambda* = {result.lambda_star:.12g}  (mu_max {result.mu_max:.12g}, residual {result.residual:.2e}, n {n})")
    print(dumps_json(result.model_dump(include={"lambda_star", "mu_max", "residual", "n"})))
    return 0


def cmd_reduce_check(args: argparse.Namespace) -> int:
    checks = golden_checks()
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}: error {check.error:.3e} (tol {check.tol:.0e})")
    passed = all(c.passed for c in checks)
    payload = {"passed": passed, "checks": [dict(c.model_dump(), passed=c.passed) for c in checks]}
    print(dumps_json(payload))
    return 0 if passed else InvariantViolation.exit_code


def _add_config_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="JSON configuration (schema 1)")


def register(subparsers) -> None:
    green = subparsers.add_parser("green", help="Green's function grid and property battery")
    _add_config_flag(green)
    green.add_argument("--grid", type=int, default=100, help="grid intervals per axis")
    green.add_argument("--out", default=None, help="CSV output path (t, s, G)")
    green.set_defaults(handler=cmd_green)

    hw = subparsers.add_parser("hw", help="Hartman-Wintner type inequality check")
    _add_config_flag(hw)
    source = hw.add_mutually_exclusive_group(required=True)
    source.add_argument("--q-const", type=float)
    source.add_argument("--q-poly", type=parse_coefficients)
    source.add_argument("--q-csv")
    hw.set_defaults(handler=cmd_hw)

    critical = subparsers.add_parser("critical", help="critical constant potential")
    _add_config_flag(critical)
    critical.add_argument("--n", type=int, default=None, help="Nystrom nodes")
    critical.add_argument("--matrix-out", default=None, help="write the q = 1 operator as CSV")
    critical.set_defaults(handler=cmd_critical)

    reduce_check = subparsers.add_parser("reduce-check", help="run the k = 1, omega = 0 golden suite")
    reduce_check.set_defaults(handler=cmd_reduce_check)
