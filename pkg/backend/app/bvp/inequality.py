"""Hartman-Wintner type inequality and its classical reference bounds.

A nontrivial solution forces  int_a^b G(b, s) |q(s)| ds >= 1 / C  with C the
amplification factor; failure of the inequality certifies that only the
trivial solution exists.
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gamma as gamma_fn

from app.bvp.green import amplification_factor
from app.calculus.operators import kernel_eval, kernel_values
from app.calculus.quadrature import endpoint_rule, interval_rule, refine
from app.config import get_settings
from app.schemas import (
    BVPConfig,
    ClassicalReport,
    InequalityReport,
    LyapunovBound,
    PotentialSpec,
    QuadratureRule,
)
from app.utils.errors import DegenerateConfig, DomainError, InvariantViolation

logger = logging.getLogger(__name__)


def _green_at_b(u: np.ndarray, config: BVPConfig) -> np.ndarray:
    """G(b, b - u) for u in (0, b - a)."""
    p = config.params
    length = config.length
    ratio = kernel_eval(length, p, 0) / kernel_eval(length, p, 1)
    return ratio * kernel_values(u, p, 1) - kernel_values(u, p, 0)


def hw_lhs(
    q: PotentialSpec,
    config: BVPConfig,
    rule: Optional[QuadratureRule] = None,
    tol: Optional[float] = None,
) -> float:
    q.check_covers(config.a, config.b)
    if q.is_zero:
        return 0.0
    rule = rule or QuadratureRule()
    tol = get_settings().hw_tol if tol is None else tol
    nu = config.params.order - 1.0

    def at_level(level: int) -> float:
        u, w = endpoint_rule(config.length, nu, rule, level)
        return float(np.sum(w * _green_at_b(u, config) * np.abs(q(config.b - u))))

    value, level = refine(at_level, tol, rule.max_refinements)
    if value < 0:
        logger.warning("hw_lhs came out negative (%.3e); G(b, s) changes sign for this config", value)
        value = 0.0
    logger.debug("hw_lhs = %.12g at level %d", value, level)
    return value


def hw_rhs(config: BVPConfig) -> float:
    return 1.0 / amplification_factor(config)


def hw_check(
    q: PotentialSpec, config: BVPConfig, rule: Optional[QuadratureRule] = None
) -> InequalityReport:
    report = InequalityReport.from_values(hw_lhs(q, config, rule), hw_rhs(config))
    logger.info("hw_check margin %.6g -> %s", report.margin, report.verdict.value)
    return report


def cabrera_rhs(alpha_order: float, a: float, b: float, xi: float, beta_c: float) -> float:
    """Riemann-Liouville bound Gamma(alpha) / (1 + beta (b-a)^(alpha-1) / D)."""
    length = b - a
    denom = (alpha_order - 1.0) * length ** (alpha_order - 2.0) - beta_c * (xi - a) ** (alpha_order - 1.0)
    if not denom > 0:
        raise DegenerateConfig(
            f"(alpha - 1)(b - a)^(alpha - 2) - beta (xi - a)^(alpha - 1) = {denom:.6g} must be positive"
        )
    return float(gamma_fn(alpha_order)) / (1.0 + beta_c * length ** (alpha_order - 1.0) / denom)


def kernel_peak(a: float, b: float, points: int = 1001) -> Tuple[float, float]:
    """Check (b - s)(s - a) <= (b - a)^2 / 4 on a grid; returns (argmax, max)."""
    s = np.linspace(a, b, points)
    values = (b - s) * (s - a)
    bound = (b - a) ** 2 / 4.0
    slack = 1e-12 * max(bound, 1.0)
    i = int(np.argmax(values))
    if np.any(values > bound + slack) or (points % 2 == 1 and abs(values[points // 2] - bound) > slack):
        raise InvariantViolation(f"kernel (b - s)(s - a) exceeds (b - a)^2/4 = {bound:g}")
    return float(s[i]), float(values[i])


def classical_bounds(
    a: float, b: float, q: PotentialSpec, rule: Optional[QuadratureRule] = None
) -> Tuple[float, float]:
    """(int (b-s)(s-a) q+(s) ds, int |q(s)| ds) over [a, b]."""
    if not b > a:
        raise DomainError(f"interval must satisfy b > a, got ({a}, {b})")
    kernel_peak(a, b)
    q.check_covers(a, b)
    if q.is_zero:
        return 0.0, 0.0
    rule = rule or QuadratureRule()

    def at_level(level: int) -> np.ndarray:
        s, w = interval_rule(a, b, rule, level)
        qs = q(s)
        return np.array([np.sum(w * (b - s) * (s - a) * np.maximum(qs, 0.0)), np.sum(w * np.abs(qs))])

    value, _ = refine(at_level, rule.tol, rule.max_refinements)
    return float(value[0]), float(value[1])


def classical_report(a: float, b: float, q: PotentialSpec) -> ClassicalReport:
    hartman_wintner, lyapunov = classical_bounds(a, b, q)
    _, peak = kernel_peak(a, b)
    return ClassicalReport(
        hartman_wintner=hartman_wintner,
        lyapunov=lyapunov,
        hw_threshold=b - a,
        lyapunov_threshold=4.0 / (b - a),
        kernel_peak=peak,
    )


def lyapunov_threshold(config: BVPConfig) -> LyapunovBound:
    """Bound int |q| >= hw_rhs / max_s G(b, s) implied by the inequality."""
    length = config.length
    result = minimize_scalar(
        lambda s: -float(_green_at_b(np.array([config.b - s]), config)[0]),
        bounds=(config.a, config.b),
        method="bounded",
        options={"xatol": 1e-10 * length},
    )
    peak = -float(result.fun)
    if not peak > 0:
        raise InvariantViolation(f"max of G(b, s) is not positive ({peak:.3e})")
    return LyapunovBound(peak_s=float(result.x), peak_value=peak, threshold=hw_rhs(config) / peak)
