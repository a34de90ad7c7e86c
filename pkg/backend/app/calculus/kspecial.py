"""k-Gamma function, Pochhammer k-symbol and the k-Mittag-Leffler series.

Everything reduces to the classical gamma family through
Gamma_k(x) = k**(x/k - 1) * Gamma(x/k).  Series terms are carried as
(log|term|, sign) pairs so that gamma ratios never overflow.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import special

from app.config import get_settings
from app.schemas import MLParams, SeriesResult
from app.utils.errors import DomainError, NonConvergence, PoleError

logger = logging.getLogger(__name__)

LOG_DOUBLE_MAX = math.log(np.finfo(float).max)
_EPS = np.finfo(float).eps


def _check_k(k: float) -> None:
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"k must be positive and finite, got {k}")


def is_pole(x: float, k: float) -> bool:
    """True when x/k is a non-positive integer."""
    r = x / k
    return r <= 0 and abs(r - round(r)) <= 8 * _EPS * max(1.0, abs(r))


def _vanishes(g: float, n: int, k: float) -> bool:
    """g + n k == 0 up to the rounding of the sum."""
    return abs(g + n * k) <= 8 * _EPS * max(abs(g), n * k)


def _gamma_sign(r: float) -> float:
    if r > 0:
        return 1.0
    return -1.0 if math.floor(r) % 2 else 1.0


def _log_reciprocal(x: float, k: float) -> Tuple[float, float]:
    """(log|1/Gamma_k(x)|, sign); sign 0 marks a pole where 1/Gamma_k vanishes."""
    if is_pole(x, k):
        return -math.inf, 0.0
    r = x / k
    return -((r - 1.0) * math.log(k) + math.lgamma(r)), _gamma_sign(r)


def k_gamma(x: float, k: float) -> float:
    _check_k(k)
    if is_pole(x, k):
        raise PoleError(f"Gamma_k has a pole at x = {x:g} (x/k = {x / k:g})")
    r = x / k
    log_abs = (r - 1.0) * math.log(k) + math.lgamma(r)
    if log_abs > LOG_DOUBLE_MAX:
        raise OverflowError(f"Gamma_k({x:g}) exceeds double range; use log_k_gamma")
    value = float(special.gamma(r)) * k ** (r - 1.0)
    if not math.isfinite(value) or value == 0.0:
        value = _gamma_sign(r) * math.exp(log_abs)
    return value


def log_k_gamma(x: float, k: float) -> float:
    """ln Gamma_k(x) for positive x."""
    _check_k(k)
    if not x > 0:
        raise DomainError(f"log_k_gamma needs x > 0, got {x}")
    r = x / k
    return (r - 1.0) * math.log(k) + float(special.gammaln(r))


def reciprocal_k_gamma(x: float, k: float) -> float:
    """1/Gamma_k(x), zero at the poles."""
    _check_k(k)
    log_abs, sign = _log_reciprocal(x, k)
    if sign == 0.0:
        return 0.0
    return sign * math.exp(log_abs)


def pochhammer_k(g: float, n: int, k: float) -> float:
    """Rising k-product g (g + k) ... (g + (n - 1) k)."""
    _check_k(k)
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    if any(_vanishes(g, j, k) for j in range(int(n))):
        return 0.0
    return float(math.prod(g + j * k for j in range(int(n))))


def _resolve(tol: Optional[float], max_terms: Optional[int]) -> Tuple[float, int]:
    settings = get_settings()
    tol = settings.ml_tol if tol is None else tol
    max_terms = settings.ml_max_terms if max_terms is None else max_terms
    if not 0 < tol < 1:
        raise DomainError(f"tolerance must lie in (0, 1), got {tol}")
    return tol, max_terms


def ml_k(
    z: float,
    params: MLParams,
    tol: Optional[float] = None,
    *,
    beta: Optional[float] = None,
    max_terms: Optional[int] = None,
) -> SeriesResult:
    """Sum E^gamma_{k,rho,beta}(z) until the relative tail drops below ``tol``.

    ``beta`` overrides ``params.beta`` (shifted series beta - j k may sit on
    poles of Gamma_k; those terms contribute 0). ``params.omega`` is ignored.
    """
    tol, max_terms = _resolve(tol, max_terms)
    beta = params.beta if beta is None else beta
    k, rho, g = params.k, params.rho, params.gamma_p
    if not math.isfinite(z):
        raise DomainError(f"argument must be finite, got {z}")

    log_rg, rg_sign = _log_reciprocal(beta, k)
    if z == 0.0:
        value = rg_sign * math.exp(log_rg) if rg_sign else 0.0
        return SeriesResult(value=value, terms_used=1, truncation_estimate=0.0)

    log_abs_z = math.log(abs(z))
    z_sign = 1.0 if z > 0 else -1.0
    log_poch, poch_sign = 0.0, 1.0
    total = 0.0
    quiet = 0
    log_term = -math.inf if rg_sign == 0.0 else log_rg

    for n in range(max_terms):
        if log_term > LOG_DOUBLE_MAX:
            raise NonConvergence(f"k-Mittag-Leffler terms overflow at n = {n} for z = {z:g}")
        term = 0.0 if rg_sign == 0.0 else poch_sign * rg_sign * z_sign**n * math.exp(log_term)
        total += term

        factor = g + n * k
        if _vanishes(g, n, k):
            # (g)_{m,k} vanishes from here on, the series is a polynomial
            logger.debug("ml_k terminated exactly after %d terms", n + 1)
            return SeriesResult(value=total, terms_used=n + 1, truncation_estimate=0.0)
        log_poch += math.log(abs(factor))
        poch_sign *= 1.0 if factor > 0 else -1.0
        log_rg, rg_sign = _log_reciprocal(rho * (n + 1) + beta, k)
        next_log_term = (
            -math.inf
            if rg_sign == 0.0
            else log_poch + log_rg - math.lgamma(n + 2) + (n + 1) * log_abs_z
        )

        scale = abs(total)
        quiet = quiet + 1 if scale > 0 and abs(term) <= tol * scale else 0
        if quiet >= 2 and next_log_term < log_term:
            ratio = math.exp(next_log_term - log_term)
            estimate = math.exp(next_log_term) / (1.0 - ratio) / scale
            if estimate <= tol:
                logger.debug("ml_k(z=%g) converged with %d terms", z, n + 1)
                return SeriesResult(value=total, terms_used=n + 1, truncation_estimate=estimate)
        log_term = next_log_term

    raise NonConvergence(
        f"k-Mittag-Leffler series at z = {z:g} did not converge within {max_terms} terms"
    )


def _coefficients(
    params: MLParams, beta: float, log_zmax: float, tol: float, max_terms: int
) -> Tuple[np.ndarray, np.ndarray]:
    """log|c_n| and sign(c_n) for c_n = (gamma)_{n,k} / (Gamma_k(rho n + beta) n!).

    The count is fixed by running the stopping rule on the majorant
    sum of |c_n| zmax**n, which bounds every |z| <= zmax at once.
    """
    k, rho, g = params.k, params.rho, params.gamma_p
    logs, signs = [], []
    log_poch, poch_sign = 0.0, 1.0
    majorant = 0.0
    quiet = 0
    for n in range(max_terms):
        log_rg, rg_sign = _log_reciprocal(rho * n + beta, k)
        log_c = -math.inf if rg_sign == 0.0 else log_poch + log_rg - math.lgamma(n + 1)
        logs.append(log_c)
        signs.append(poch_sign * rg_sign)

        magnitude_log = log_c + n * log_zmax
        if magnitude_log > LOG_DOUBLE_MAX:
            raise NonConvergence(f"k-Mittag-Leffler terms overflow at n = {n}")
        magnitude = math.exp(magnitude_log)
        majorant += magnitude

        factor = g + n * k
        if _vanishes(g, n, k):
            break
        log_poch += math.log(abs(factor))
        poch_sign *= 1.0 if factor > 0 else -1.0

        quiet = quiet + 1 if majorant > 0 and magnitude <= tol * majorant else 0
        if quiet >= 2:
            next_log_rg, next_sign = _log_reciprocal(rho * (n + 1) + beta, k)
            next_log = (
                -math.inf
                if next_sign == 0.0
                else log_poch + next_log_rg - math.lgamma(n + 2) + (n + 1) * log_zmax
            )
            if next_log < magnitude_log:
                ratio = math.exp(next_log - magnitude_log)
                if math.exp(next_log) / (1.0 - ratio) <= tol * majorant:
                    break
    else:
        raise NonConvergence(
            f"k-Mittag-Leffler series did not converge within {max_terms} terms "
            f"for |z| <= {math.exp(log_zmax):g}"
        )
    return np.array(logs), np.array(signs)


def ml_k_values(
    z,
    params: MLParams,
    tol: Optional[float] = None,
    *,
    beta: Optional[float] = None,
    max_terms: Optional[int] = None,
) -> np.ndarray:
    """Vectorised ml_k: one coefficient sequence shared by every argument.

    The sequence is long enough for ``tol`` relative to the smallest nonzero
    value, unless cancellation pushes that below rounding.
    """
    tol, max_terms = _resolve(tol, max_terms)
    beta = params.beta if beta is None else beta
    z = np.asarray(z, dtype=float)
    flat = z.ravel()
    if flat.size == 0:
        return np.zeros(z.shape)
    if not np.all(np.isfinite(flat)):
        raise DomainError("arguments must be finite")
    zmax = float(np.max(np.abs(flat)))
    if zmax == 0.0:
        return np.full(z.shape, reciprocal_k_gamma(beta, params.k))

    log_zmax = math.log(zmax)
    log_c, sign_c = _coefficients(params, beta, log_zmax, tol, max_terms)
    out = _sum_series(flat, log_c, sign_c)

    # The count bounds the absolute error by tol * majorant(zmax); tighten it
    # where cancellation leaves a sum far below the majorant.
    majorant = float(np.sum(np.exp(log_c + np.arange(log_c.size) * log_zmax)))
    nonzero = np.abs(out[out != 0.0])
    if nonzero.size and majorant > 0:
        tighter = max(tol * float(np.min(nonzero)) / majorant, float(_EPS))
        if tighter < tol:
            log_c, sign_c = _coefficients(params, beta, log_zmax, tighter, max_terms)
            out = _sum_series(flat, log_c, sign_c)
    return out.reshape(z.shape)


def _sum_series(flat: np.ndarray, log_c: np.ndarray, sign_c: np.ndarray) -> np.ndarray:
    powers = np.arange(log_c.size)
    alternating = np.where(powers % 2 == 0, 1.0, -1.0)
    chunk = get_settings().ml_chunk_size
    out = np.empty(flat.size)
    for start in range(0, flat.size, chunk):
        zc = flat[start:start + chunk]
        with np.errstate(divide="ignore", invalid="ignore"):
            exponents = log_c[None, :] + powers[None, :] * np.log(np.abs(zc))[:, None]
        exponents[:, 0] = log_c[0]
        signs = np.where(zc[:, None] < 0, alternating[None, :], 1.0) * sign_c[None, :]
        out[start:start + chunk] = np.sum(signs * np.exp(exponents), axis=1)
    return out
