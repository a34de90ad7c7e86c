"""k-Prabhakar kernel, left-sided integral and derivative based at ``base``."""
import logging
import math
from numbers import Real
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import gamma as gamma_fn

from app.calculus.kspecial import ml_k, ml_k_values
from app.calculus.quadrature import endpoint_rule, refine
from app.config import get_settings
from app.schemas import GridFunction, MLParams, QuadratureRule
from app.utils.errors import DomainError, QuadratureError

logger = logging.getLogger(__name__)

Source = Union[GridFunction, Callable, float]


def kernel_eval(t: float, params: MLParams, shift: int = 0) -> float:
    """t**((beta - shift k)/k - 1) / k * E(omega t**(rho/k)) for t > 0, else 0."""
    if t <= 0:
        return 0.0
    beta = params.beta - shift * params.k
    series = ml_k(params.omega * t ** (params.rho / params.k), params, beta=beta)
    return t ** (beta / params.k - 1.0) / params.k * series.value


def kernel_values(t, params: MLParams, shift: int = 0) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    positive = t > 0
    if not np.any(positive):
        return out
    k = params.k
    beta = params.beta - shift * k
    tp = t[positive]
    series = ml_k_values(params.omega * tp ** (params.rho / k), params, beta=beta)
    out[positive] = tp ** (beta / k - 1.0) / k * series
    return out


def kernel_jet(x: float, params: MLParams, j: int) -> float:
    """j-th derivative of x**(beta/k - 1) E(omega x**(rho/k)); carries no 1/k factor."""
    if not x > 0:
        raise DomainError(f"kernel_jet needs x > 0, got {x}")
    if j < 0 or int(j) != j:
        raise DomainError(f"derivative index must be a nonnegative integer, got {j}")
    k = params.k
    series = ml_k(params.omega * x ** (params.rho / k), params, beta=params.beta - j * k)
    return x ** (params.beta / k - (j + 1)) / k**j * series.value


def power_integral(p: float, x, params: MLParams, base: float = 0.0):
    """Closed form of the k-Prabhakar integral of (t - base)**p.

    Gamma(p+1) k**p L**(beta/k + p) E_{k,rho,beta+(p+1)k}(omega L**(rho/k)), L = x - base.
    """
    if not p > -1:
        raise DomainError(f"power must exceed -1, got {p}")
    scalar = np.ndim(x) == 0
    length = np.atleast_1d(np.asarray(x, dtype=float)) - base
    if np.any(length < 0):
        raise DomainError("evaluation points must satisfy x >= base")
    k = params.k
    out = np.zeros(length.shape)
    positive = length > 0
    lp = length[positive]
    series = ml_k_values(
        params.omega * lp ** (params.rho / k), params, beta=params.beta + (p + 1.0) * k
    )
    out[positive] = gamma_fn(p + 1.0) * k**p * lp ** (params.order + p) * series
    return float(out[0]) if scalar else out


def derivative_order(params: MLParams) -> int:
    """m = floor(beta/k) + 1."""
    order = params.order
    m = math.floor(order) + 1
    if abs(order - round(order)) <= 1e-12:
        logger.warning("beta/k = %g is an integer; derivative uses m = %d", order, m)
    return m


def _as_callable(f: Source) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, Real):
        value = float(f)
        return lambda t: np.full(np.shape(t), value)
    if not callable(f):
        raise DomainError(f"cannot integrate object of type {type(f).__name__}")

    def evaluate(t: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(f(t), dtype=float), np.shape(t))

    return evaluate


def _integral_at_level(fn, xs: np.ndarray, params: MLParams, rule: QuadratureRule, base: float, level: int) -> np.ndarray:
    lengths = xs - base
    out = np.zeros(xs.shape)
    positive = lengths > 0
    if not np.any(positive):
        return out
    v, w = endpoint_rule(1.0, params.order, rule, level)
    lp = lengths[positive]
    u = lp[:, None] * v[None, :]
    integrand = kernel_values(u, params) * fn(xs[positive][:, None] - u)
    out[positive] = lp * (integrand @ w)
    return out


def prabhakar_integral(
    f: Source,
    x,
    params: MLParams,
    rule: Optional[QuadratureRule] = None,
    *,
    base: float = 0.0,
    tol: Optional[float] = None,
):
    """Left-sided k-Prabhakar integral of ``f`` from ``base`` to each ``x``.

    ``f`` may be a GridFunction, a vectorised callable or a constant.  All
    points of an array ``x`` share one refinement level.
    """
    rule = rule or QuadratureRule()
    tol = rule.tol if tol is None else tol
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < base):
        raise DomainError(f"evaluation points must satisfy x >= base = {base}")
    fn = _as_callable(f)

    value, level = refine(
        lambda lvl: _integral_at_level(fn, xs, params, rule, base, lvl), tol, rule.max_refinements
    )
    logger.debug("prabhakar_integral at %d point(s) used level %d", xs.size, level)
    return float(value[0]) if scalar else value


def complementary_params(params: MLParams, m: int) -> MLParams:
    """Parameters of the inner integral of the derivative: beta -> m k - beta, gamma -> -gamma."""
    return params.model_copy(update={"beta": m * params.k - params.beta, "gamma_p": -params.gamma_p})


def _stencil_weights(m: int) -> np.ndarray:
    offsets = np.arange(-m, m + 1, dtype=float)
    vander = np.vander(offsets, 2 * m + 1, increasing=True).T
    rhs = np.zeros(2 * m + 1)
    rhs[m] = math.factorial(m)
    return np.linalg.solve(vander, rhs)


def _noise_floor(weights: np.ndarray, magnitude: float, h: float, factor: float, noise: float) -> float:
    """Noise of the Richardson-combined stencil: 4 noise |g| ||w||_1 / (h/2)**m.

    ``noise`` is the relative accuracy of the integrated values: rounding,
    or the series tolerance when that is coarser.
    """
    m = (weights.size - 1) // 2
    amplification = (factor + 2.0**-m) / (factor - 1.0)
    return 4.0 * noise * magnitude * float(np.sum(np.abs(weights))) * amplification / (0.5 * h) ** m


def prabhakar_derivative(
    f: Source,
    x: float,
    params: MLParams,
    rule: Optional[QuadratureRule] = None,
    *,
    base: float = 0.0,
    upper: Optional[float] = None,
    h: Optional[float] = None,
) -> float:
    """m-th central difference of k**m times the complementary integral, Richardson at h and h/2."""
    rule = rule or QuadratureRule()
    settings = get_settings()
    m = derivative_order(params)
    if h is None:
        span = (upper if upper is not None else x) - base
        h = span * settings.fd_step_fraction
    if not h > 0:
        raise DomainError(f"finite difference step must be positive, got {h}")
    if x - m * h < base or (upper is not None and x + m * h > upper):
        raise DomainError(
            f"stencil [{x - m * h:g}, {x + m * h:g}] leaves the domain [{base:g}, {upper if upper is not None else x:g}]"
        )

    inner = complementary_params(params, m)
    fn = _as_callable(f)
    weights = _stencil_weights(m)
    offsets = np.arange(-m, m + 1, dtype=float)
    points = np.concatenate([x + offsets * h, x + offsets * (0.5 * h)])
    accuracy = m + 1 + (m + 1) % 2
    factor = 2.0**accuracy

    estimates = []
    magnitude = 0.0
    for level in (0, 1):
        g = params.k**m * _integral_at_level(fn, points, inner, rule, base, level)
        magnitude = max(magnitude, float(np.max(np.abs(g))))
        coarse = weights @ g[: 2 * m + 1] / h**m
        fine = weights @ g[2 * m + 1:] / (0.5 * h) ** m
        estimates.append((factor * fine - coarse) / (factor - 1.0))

    change = abs(estimates[1] - estimates[0])
    noise = max(float(np.finfo(float).eps), settings.ml_tol)
    threshold = max(settings.fd_tol * max(abs(estimates[1]), 1.0), _noise_floor(weights, magnitude, h, factor, noise))
    if change > threshold:
        raise QuadratureError(
            f"derivative changed by {change:.3e} between quadrature levels at x = {x:g} (allowed {threshold:.3e})"
        )
    logger.debug("prabhakar_derivative(x=%g) m=%d h=%.3e", x, m, h)
    return float(estimates[1])
