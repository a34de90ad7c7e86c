"""Golden values of the Riemann-Liouville reduction (k = 1, omega = 0).

Every quantity of the k-Prabhakar problem collapses to a classical closed
form in this case; ``golden_checks`` compares the two.
"""
import logging
import math
from typing import List

import numpy as np
from scipy.special import gamma as gamma_fn

from app.bvp.green import amplification_factor, denominator, green_grid, reference_green
from app.bvp.inequality import cabrera_rhs, classical_bounds, hw_lhs, hw_rhs, lyapunov_threshold
from app.calculus.kspecial import ml_k
from app.calculus.operators import power_integral, prabhakar_integral
from app.schemas import BVPConfig, GoldenCheck, MLParams, PotentialSpec

logger = logging.getLogger(__name__)

CABRERA_CASES = ((2.5, 0.5, 0.3), (2.2, 0.3, 0.5), (2.9, 0.7, 0.2), (3.0, 0.4, 0.8), (2.05, 0.6, 0.1))


def reduction_config(
    order: float = 2.5, xi: float = 0.5, eta: float = 0.3, a: float = 0.0, b: float = 1.0, gamma_p: float = 0.0
) -> BVPConfig:
    """Configuration with k = 1 and omega = 0; gamma is then irrelevant."""
    params = MLParams(k=1.0, rho=1.0, beta=order, gamma=gamma_p, omega=0.0)
    return BVPConfig(a=a, b=b, xi=xi, eta=eta, params=params)


def _check(name: str, value: float, expected: float, tol: float, relative: bool = True) -> GoldenCheck:
    diff = abs(value - expected)
    error = diff / abs(expected) if relative and expected != 0 else diff
    if not math.isfinite(error):
        error = math.inf
    return GoldenCheck(name=name, value=value, expected=expected, error=error, tol=tol)


def golden_checks() -> List[GoldenCheck]:
    checks = []

    exponential = MLParams(k=1.0, rho=1.0, beta=1.0, gamma=1.0)
    for z in (-2.0, -0.5, 0.0, 0.5, 1.0, 3.0):
        checks.append(_check(f"ml_exp[z={z:g}]", ml_k(z, exponential).value, math.exp(z), 1e-10))

    config = reduction_config()
    order, length = config.params.beta, config.length
    g_order = float(gamma_fn(order))
    nodes, grid = green_grid(config, 100)
    reference = reference_green(nodes, nodes, config.a, config.b, order)
    checks.append(
        _check("green_rl_max_abs", float(np.max(np.abs(grid - reference))) * g_order, 0.0, 1e-9, relative=False)
    )

    delta = 1.0 / gamma_fn(1.5) - 0.3 * 0.5**1.5 / g_order
    checks.append(_check("denominator", denominator(config), delta, 1e-12))
    checks.append(_check("amplification_factor", amplification_factor(config), 1.0 + 0.3 / (g_order * delta), 1e-12))

    for beta, xi, eta in CABRERA_CASES:
        case = reduction_config(order=beta, xi=xi, eta=eta)
        checks.append(
            _check(
                f"cabrera[beta={beta:g},xi={xi:g},eta={eta:g}]",
                hw_rhs(case) * float(gamma_fn(beta)),
                cabrera_rhs(beta, case.a, case.b, xi, eta),
                1e-10,
            )
        )

    checks.append(_check("hw_lhs[q=1]", hw_lhs(PotentialSpec.const(1.0), config), (4.0 / 15.0) / g_order, 1e-8))

    hartman_wintner, lyapunov = classical_bounds(0.0, 1.0, PotentialSpec.const(1.0))
    checks.append(_check("classical_hartman_wintner", hartman_wintner, 1.0 / 6.0, 1e-10, relative=False))
    checks.append(_check("classical_lyapunov", lyapunov, 1.0, 1e-10, relative=False))

    peak = (length * (order - 2.0) / (order - 1.0)) ** (order - 2.0) * length / (order - 1.0)
    checks.append(_check("lyapunov_peak", lyapunov_threshold(config).peak_value * g_order, peak, 1e-8))

    params = MLParams(k=1.5, rho=1.0, beta=2.4, gamma=0.7, omega=0.0)
    checks.append(
        _check("integral_of_one", prabhakar_integral(1.0, 1.0, params), power_integral(0.0, 1.0, params), 1e-7)
    )

    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.warning("reduction checks failed: %s", ", ".join(failed))
    return checks
