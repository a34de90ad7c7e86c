"""Green's function of the nonlocal boundary value problem.

With K0 and K1 the kernels at shift 0 and 1,

    G(t, s) = K0(t - a) K1(b - s) / K1(b - a) - K0(t - s),

the subtracted term vanishing for t <= s.  The boundary coupling only
enters through the denominator and the prefactor of the xi-correction.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.special import gamma as gamma_fn

from app.calculus.operators import kernel_eval, kernel_values
from app.schemas import BVPConfig, GreenPropertyReport
from app.utils.errors import DegenerateConfig, DomainError, InvariantViolation

logger = logging.getLogger(__name__)

_SQUARE_TOL = 1e-12


def denominator(config: BVPConfig) -> float:
    p = config.params
    delta = kernel_eval(config.length, p, 1) - config.eta * p.k * kernel_eval(config.xi - config.a, p, 0)
    if not delta > 0:
        raise DegenerateConfig(
            f"denominator {delta:.6g} <= 0: coupling eta = {config.eta:g} violates "
            f"eta (xi - a)^(beta/k - 1) E(...) < (b - a)^(beta/k - 2) E(...) / k"
        )
    return delta


def prefactor(t, config: BVPConfig) -> np.ndarray:
    """Coefficient A(t) of the xi-correction term."""
    p = config.params
    return config.eta * p.k * kernel_values(np.asarray(t, dtype=float) - config.a, p, 0) / denominator(config)


def amplification_factor(config: BVPConfig) -> float:
    p = config.params
    return 1.0 + config.eta * p.k * kernel_eval(config.length, p, 0) / denominator(config)


def green_matrix(t_nodes, s_nodes, config: BVPConfig) -> np.ndarray:
    t = np.asarray(t_nodes, dtype=float).ravel()
    s = np.asarray(s_nodes, dtype=float).ravel()
    p = config.params
    left = kernel_values(t - config.a, p, 0)
    right = kernel_values(config.b - s, p, 1) / kernel_eval(config.length, p, 1)
    return np.outer(left, right) - kernel_values(t[:, None] - s[None, :], p, 0)


def green(t: float, s: float, config: BVPConfig) -> float:
    span = _SQUARE_TOL * config.length
    for name, value in (("t", t), ("s", s)):
        if not config.a - span <= value <= config.b + span:
            raise DomainError(f"{name} = {value:g} lies outside [{config.a:g}, {config.b:g}]")
    t = min(max(t, config.a), config.b)
    s = min(max(s, config.a), config.b)
    return float(green_matrix([t], [s], config)[0, 0])


def reference_green(t, s, a: float, b: float, order: float) -> np.ndarray:
    """Riemann-Liouville Green's function (k = 1, omega = 0) in closed form."""
    scalar = np.ndim(t) == 0 and np.ndim(s) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
    s = np.atleast_1d(np.asarray(s, dtype=float))[None, :]
    first = (t - a) ** (order - 1) * (b - s) ** (order - 2) / (b - a) ** (order - 2)
    second = np.where(t > s, np.abs(t - s) ** (order - 1), 0.0)
    value = (first - second) / gamma_fn(order)
    return float(value[0, 0]) if scalar else value


def green_grid(config: BVPConfig, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform (n+1) x (n+1) grid; rows are t, columns are s."""
    if n < 1:
        raise DomainError(f"grid size must be positive, got {n}")
    nodes = np.linspace(config.a, config.b, n + 1)
    return nodes, green_matrix(nodes, nodes, config)


def check_properties(config: BVPConfig, n: int = 100, *, strict: bool = False) -> GreenPropertyReport:
    """Nonnegativity, monotonicity in t and bracketing on the uniform grid.

    Violations are hard (``InvariantViolation`` when ``strict``) only for
    omega >= 0 and gamma >= 0; otherwise they are logged.
    """
    nodes, grid = green_grid(config, n)
    scale = float(np.max(grid))
    if not scale > 0:
        scale = 1.0
    tol = 1e-12 * scale

    negative = int(np.count_nonzero(grid < -tol))
    suffix_min = np.minimum.accumulate(grid[::-1], axis=0)[::-1]
    decreasing = int(np.count_nonzero(grid > suffix_min + tol))
    bottom_off = np.abs(grid[0]) > tol
    top_short = grid[-1] < grid.max(axis=0) - tol
    unbracketed = int(np.count_nonzero(bottom_off | top_short))
    # Jump across t = s: the subtracted kernel just above the diagonal
    gap = abs(kernel_eval(_SQUARE_TOL * config.length, config.params, 0))
    discontinuous = int(gap > tol)

    p = config.params
    report = GreenPropertyReport(
        n=n,
        scale=scale,
        min_value=float(grid.min()),
        max_value=float(grid.max()),
        nonnegative=negative == 0,
        monotone=decreasing == 0,
        bracketed=unbracketed == 0,
        diagonal_gap=gap,
        continuous=not discontinuous,
        violations=negative + decreasing + unbracketed + discontinuous,
        hard=p.omega >= 0 and p.gamma_p >= 0,
    )
    if not report.passed:
        message = (
            f"Green's function properties violated at {report.violations} grid point(s) "
            f"(nonnegative={report.nonnegative}, monotone={report.monotone}, bracketed={report.bracketed}, "
            f"diagonal_gap={report.diagonal_gap:.3e})"
        )
        if report.hard and strict:
            raise InvariantViolation(message)
        logger.warning(message)
    return report
