"""Square Nystrom discretisation of the fixed-point form of the BVP.

y(t) = int_a^b [G(t, s) + A(t) G(xi, s)] q(s) y(s) ds, collocated at the
quadrature nodes.  Nontrivial solutions correspond to the eigenvalue 1.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from app.bvp.green import green_matrix, prefactor
from app.calculus.quadrature import graded_trapezoid
from app.config import get_settings
from app.schemas import BVPConfig, CriticalConstant, NontrivialCheck, PotentialSpec, SpectralResult
from app.utils.errors import DomainError, SpectralFailure

logger = logging.getLogger(__name__)

MIN_NODES = 8


@dataclass(frozen=True)
class NystromOperator:
    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.nodes.size


def nystrom_nodes(config: BVPConfig, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Mapped trapezoid nodes graded towards b where (b - s)**(beta/k - 2) lives."""
    grading = max(1.5, 3.0 / (config.params.order - 1.0))
    return graded_trapezoid(config.a, config.b, n, grading)


def build_operator(config: BVPConfig, q: PotentialSpec, n: Optional[int] = None) -> NystromOperator:
    n = get_settings().nystrom_nodes if n is None else n
    if n < MIN_NODES:
        raise DomainError(f"Nystrom discretisation needs n >= {MIN_NODES}, got {n}")
    q.check_covers(config.a, config.b)
    nodes, weights = nystrom_nodes(config, n)
    kernel = green_matrix(nodes, nodes, config)
    if config.eta > 0:
        correction = green_matrix([config.xi], nodes, config)[0]
        kernel = kernel + np.outer(prefactor(nodes, config), correction)
    matrix = kernel * (q(nodes) * weights)[None, :]
    logger.debug("assembled %d x %d Nystrom operator", n, n)
    return NystromOperator(nodes=nodes, weights=weights, matrix=matrix)


def _iterate(matrix: np.ndarray, tol: float, max_iter: int, window: int, shift: float):
    n = matrix.shape[0]
    x = np.full(n, 1.0 / math.sqrt(n))
    best, best_at = math.inf, 0
    mu, residual = 0.0, math.inf
    for iteration in range(1, max_iter + 1):
        y = matrix @ x + shift * x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, 0.0, iteration, True
        x = y / norm
        ax = matrix @ x
        mu = float(x @ ax)
        residual = float(np.linalg.norm(ax - mu * x) / abs(mu)) if mu != 0.0 else math.inf
        if residual <= tol:
            return mu, residual, iteration, True
        if residual < 0.999 * best:
            best, best_at = residual, iteration
        elif iteration - best_at >= window:
            logger.debug("power iteration stalled at residual %.3e (shift %g)", residual, shift)
            break
    return mu, residual, iteration, False


def power_iteration(
    matrix: np.ndarray, tol: Optional[float] = None, max_iter: Optional[int] = None
) -> SpectralResult:
    """Dominant eigenvalue with relative residual ||A x - mu x|| / |mu| <= tol.

    Starts from the normalised ones vector.  A stalled iteration (e.g. an
    oscillating +-mu pair) is retried on A + sigma I with sigma = ||A||_inf.
    """
    settings = get_settings()
    tol = settings.power_tol if tol is None else tol
    max_iter = settings.power_max_iter if max_iter is None else max_iter
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"power iteration needs a square matrix, got shape {matrix.shape}")

    mu, residual, iterations, converged = _iterate(matrix, tol, max_iter, settings.power_stall_window, 0.0)
    if not converged:
        sigma = float(np.linalg.norm(matrix, np.inf))
        logger.info("retrying power iteration with spectral shift %.6g", sigma)
        mu, residual, extra, converged = _iterate(
            matrix, tol, max_iter, settings.power_stall_window, sigma
        )
        iterations += extra
    if not converged:
        raise SpectralFailure(
            f"power iteration stagnated after {iterations} iterations (residual {residual:.3e}, tol {tol:.1e})"
        )
    return SpectralResult(dominant_eigenvalue=mu, residual=residual, iterations=iterations)


def has_nontrivial_solution(
    config: BVPConfig, q: PotentialSpec, n: Optional[int] = None, tol: float = 1e-6
) -> NontrivialCheck:
    """I - K singular to within tol: sigma_min(I - K) <= tol * ||K||_2."""
    matrix = build_operator(config, q, n).matrix
    sigma_min = float(np.linalg.svd(np.eye(matrix.shape[0]) - matrix, compute_uv=False)[-1])
    norm = float(np.linalg.norm(matrix, 2))
    if norm == 0.0:
        return NontrivialCheck(exists=False, margin=math.inf, sigma_min=sigma_min, norm=0.0)
    margin = sigma_min / norm
    return NontrivialCheck(exists=margin <= tol, margin=margin, sigma_min=sigma_min, norm=norm)


def critical_constant(config: BVPConfig, n: Optional[int] = None) -> CriticalConstant:
    n = get_settings().nystrom_nodes if n is None else n
    operator = build_operator(config, PotentialSpec.const(1.0), n)
    spectrum = power_iteration(operator.matrix)
    mu = spectrum.dominant_eigenvalue
    if not mu > 0:
        raise SpectralFailure(f"dominant eigenvalue {mu:.6g} of the q = 1 operator is not positive")
    logger.info("critical constant %.12g (n = %d, %d iterations)", 1.0 / mu, n, spectrum.iterations)
    return CriticalConstant(
        lambda_star=1.0 / mu,
        mu_max=mu,
        residual=spectrum.residual,
        n=n,
        iterations=spectrum.iterations,
    )


def critical_lambda(config: BVPConfig, n: Optional[int] = None) -> float:
    """Smallest constant potential admitting a nontrivial solution."""
    return critical_constant(config, n).lambda_star
