"""Composite quadrature for integrands with an algebraic endpoint singularity.

All rules integrate over (0, L) with the singular point at u = 0, where
the integrand behaves like u**(nu - 1).  Panels are graded towards 0 with
edges L * (j / N)**grading.
"""
import logging
from typing import Callable, Tuple, TypeVar

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from app.schemas import QuadratureRule, QuadratureScheme
from app.utils.errors import DomainError, QuadratureError

logger = logging.getLogger(__name__)

Rule = Tuple[np.ndarray, np.ndarray]
T = TypeVar("T", float, np.ndarray)


def grading_exponent(nu: float) -> float:
    return max(1.0, 2.0 / nu)


def _panel_edges(length: float, n_panels: int, grading: float) -> np.ndarray:
    return length * (np.arange(n_panels + 1) / n_panels) ** grading


def _gauss_panels(edges: np.ndarray, order: int) -> Rule:
    x, w = leggauss(order)
    left, right = edges[:-1, None], edges[1:, None]
    half = 0.5 * (right - left)
    nodes = left + half * (x[None, :] + 1.0)
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def endpoint_rule(length: float, nu: float, rule: QuadratureRule, level: int = 0) -> Rule:
    """Nodes in (0, length) and positive weights for a u**(nu - 1) singularity at 0.

    ``level`` doubles the panel count that many times.  With the Jacobi
    scheme the first panel uses Gauss-Jacobi weights for (1 + x)**(nu - 1)
    divided back by u**(nu - 1), so callers always pass the full integrand.
    """
    if not length > 0:
        raise DomainError(f"integration length must be positive, got {length}")
    if not nu > 0:
        raise DomainError(f"singularity exponent nu must be positive, got {nu}")
    n_panels = rule.n_panels * 2**level
    grading = rule.grading if rule.grading is not None else grading_exponent(nu)
    edges = _panel_edges(length, n_panels, grading)

    if rule.scheme is QuadratureScheme.GRADED:
        return _gauss_panels(edges, rule.order)

    h = edges[1]
    x, w = roots_jacobi(rule.order, 0.0, nu - 1.0)
    first_nodes = 0.5 * h * (x + 1.0)
    first_weights = (0.5 * h) ** nu * w / first_nodes ** (nu - 1.0)
    rest_nodes, rest_weights = _gauss_panels(edges[1:], rule.order)
    return (
        np.concatenate([first_nodes, rest_nodes]),
        np.concatenate([first_weights, rest_weights]),
    )


def interval_rule(a: float, b: float, rule: QuadratureRule, level: int = 0) -> Rule:
    """Uniform composite Gauss-Legendre rule on (a, b) for smooth integrands."""
    if not b > a:
        raise DomainError(f"interval must satisfy b > a, got ({a}, {b})")
    n_panels = rule.n_panels * 2**level
    return _gauss_panels(np.linspace(a, b, n_panels + 1), rule.order)


def graded_trapezoid(a: float, b: float, n: int, grading: float) -> Rule:
    """Trapezoid rule in v for s = b - (b - a)(1 - v)**grading, clustered at b.

    The mapped weight at s = b vanishes for grading > 1, so that node is
    dropped: n nodes in [a, b), all weights positive.
    """
    if n < 2:
        raise DomainError(f"a trapezoid rule needs at least two nodes, got {n}")
    if not b > a:
        raise DomainError(f"interval must satisfy b > a, got ({a}, {b})")
    if not grading > 1:
        raise DomainError(f"grading must exceed 1, got {grading}")
    length = b - a
    v = np.arange(n) / n
    nodes = b - length * (1.0 - v) ** grading
    weights = length * grading * (1.0 - v) ** (grading - 1.0) / n
    weights[0] *= 0.5
    return nodes, weights


def refine(evaluate: Callable[[int], T], tol: float, max_refinements: int) -> Tuple[T, int]:
    """Double panels until two successive levels agree to ``tol`` (relative).

    With ``max_refinements == 0`` the level 0 result is returned unchecked,
    which keeps the node set fixed across calls.
    """
    previous = evaluate(0)
    if max_refinements == 0:
        return previous, 0
    for level in range(1, max_refinements + 1):
        current = evaluate(level)
        change = float(np.max(np.abs(np.asarray(current) - np.asarray(previous))))
        scale = float(np.max(np.abs(np.asarray(current))))
        if change <= tol * scale or change == 0.0:
            logger.debug("quadrature settled at level %d (change %.3e)", level, change)
            return current, level
        previous = current
    raise QuadratureError(
        f"quadrature did not settle within {max_refinements} panel doublings "
        f"(last relative change {change / scale if scale else change:.3e}, tol {tol:.1e})"
    )
