import argparse
from typing import Tuple


def parse_coefficients(text: str) -> Tuple[float, ...]:
    """"c0,c1,..." -> (c0, c1, ...), lowest degree first."""
    try:
        coefficients = tuple(float(c) for c in text.split(",") if c.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid coefficient list: {text!r}")
    if not coefficients:
        raise argparse.ArgumentTypeError("coefficient list is empty")
    return coefficients


def add_param_flags(parser: argparse.ArgumentParser, omega: bool = True) -> None:
    """--k --rho --beta --gamma [--omega]; everything but beta defaults to the exponential case."""
    parser.add_argument("--k", type=float, default=1.0, help="k-deformation parameter (default 1)")
    parser.add_argument("--rho", type=float, default=1.0, help="series step rho (default 1)")
    parser.add_argument("--beta", type=float, required=True, help="order parameter beta")
    parser.add_argument("--gamma", type=float, default=1.0, help="Prabhakar exponent gamma (default 1)")
    if omega:
        parser.add_argument("--omega", type=float, default=0.0, help="kernel frequency omega (default 0)")
