"""Point evaluations: ml, kernel, integral, derivative."""
import argparse
import logging

import numpy as np

from app.calculus.kspecial import ml_k
from app.calculus.operators import kernel_eval, kernel_jet, prabhakar_derivative, prabhakar_integral
from app.commands import add_param_flags, parse_coefficients
from app.schemas import MLParams, QuadratureRule
from app.utils.io import dumps_json, read_grid_csv

logger = logging.getLogger(__name__)


def _params(args: argparse.Namespace) -> MLParams:
    return MLParams(
        k=args.k, rho=args.rho, beta=args.beta, gamma=args.gamma, omega=getattr(args, "omega", 0.0)
    )


def _function_source(args: argparse.Namespace):
    if args.f_const is not None:
        return args.f_const
    if args.f_poly is not None:
        coefficients = args.f_poly
        return lambda t: np.polynomial.polynomial.polyval(t, coefficients)
    return read_grid_csv(args.f_csv)


def cmd_ml(args: argparse.Namespace) -> int:
    result = ml_k(args.z, _params(args), args.tol)
    print(f"E = {result.value:.17g}  ({result.terms_used} terms, tail <= {result.truncation_estimate:.3e})")
    print(dumps_json(result.model_dump()))
    return 0


def cmd_kernel(args: argparse.Namespace) -> int:
    params = _params(args)
    payload = {"t": args.t, "shift": args.shift, "value": kernel_eval(args.t, params, args.shift)}
    print(f"kernel(t={args.t:g}, shift={args.shift}) = {payload['value']:.17g}")
    if args.jet is not None:
        payload["jet"] = kernel_jet(args.t, params, args.jet)
        print(f"jet j={args.jet}: {payload['jet']:.17g}")
    print(dumps_json(payload))
    return 0


def cmd_integral(args: argparse.Namespace) -> int:
    rule = QuadratureRule(tol=args.tol) if args.tol is not None else QuadratureRule()
    value = prabhakar_integral(_function_source(args), args.x, _params(args), rule, base=args.a)
    print(f"P f({args.x:g}) = {value:.17g}")
    print(dumps_json({"x": args.x, "a": args.a, "value": value}))
    return 0


def cmd_derivative(args: argparse.Namespace) -> int:
    value = prabhakar_derivative(
        _function_source(args), args.x, _params(args), base=args.a, upper=args.b, h=args.h
    )
    print(f"D f({args.x:g}) = {value:.17g}")
    print(dumps_json({"x": args.x, "a": args.a, "value": value}))
    return 0


def _add_source_flags(parser: argparse.ArgumentParser, allow_csv: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--f-const", type=float, help="constant function")
    group.add_argument("--f-poly", type=parse_coefficients, help='polynomial "c0,c1,..."')
    if allow_csv:
        group.add_argument("--f-csv", help="two-column CSV of samples (node, value)")


def register(subparsers) -> None:
    ml = subparsers.add_parser("ml", help="k-Mittag-Leffler function")
    add_param_flags(ml, omega=False)
    ml.add_argument("--z", type=float, required=True, help="argument")
    ml.add_argument("--tol", type=float, default=1e-12, help="relative tail tolerance")
    ml.set_defaults(handler=cmd_ml)

    kernel = subparsers.add_parser("kernel", help="k-Prabhakar kernel and its jet")
    add_param_flags(kernel)
    kernel.add_argument("--t", type=float, required=True)
    kernel.add_argument("--shift", type=int, default=0, choices=(0, 1, 2))
    kernel.add_argument("--jet", type=int, default=None, help="also print the j-th derivative")
    kernel.set_defaults(handler=cmd_kernel)

    integral = subparsers.add_parser("integral", help="k-Prabhakar integral")
    add_param_flags(integral)
    integral.add_argument("--x", type=float, required=True)
    integral.add_argument("--a", type=float, default=0.0, help="base point")
    integral.add_argument("--tol", type=float, default=None)
    _add_source_flags(integral, allow_csv=True)
    integral.set_defaults(handler=cmd_integral)

    derivative = subparsers.add_parser("derivative", help="k-Prabhakar derivative")
    add_param_flags(derivative)
    derivative.add_argument("--x", type=float, required=True)
    derivative.add_argument("--a", type=float, default=0.0, help="base point")
    derivative.add_argument("--b", type=float, default=None, help="right end of the domain")
    derivative.add_argument("--h", type=float, default=None, help="finite difference step")
    _add_source_flags(derivative, allow_csv=False)
    derivative.set_defaults(handler=cmd_derivative, f_csv=None)
