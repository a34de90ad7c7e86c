import logging
from enum import Enum
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import get_settings
from app.utils.errors import DomainError

logger = logging.getLogger(__name__)

# beta/k = 3 is admissible; k = 0.7, beta = 2.1 gives 3.0000000000000004
_ORDER_SLACK = 4.0 * np.finfo(float).eps


# --- Special function schemas ---
class MLParams(BaseModel):
    """The five real parameters (k, rho, beta, gamma, omega) of the k-Prabhakar family."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, allow_inf_nan=False)

    k: float = Field(..., gt=0)
    rho: float = Field(..., gt=0)
    beta: float = Field(..., gt=0)
    gamma_p: float = Field(..., alias="gamma")
    omega: float = 0.0

    @property
    def order(self) -> float:
        """Effective order beta/k; every exponent of the kernels is built from it."""
        return self.beta / self.k

    def with_gamma(self, gamma_p: float) -> "MLParams":
        return self.model_copy(update={"gamma_p": gamma_p})


class SeriesResult(BaseModel):
    value: float
    terms_used: int = Field(..., ge=0)
    truncation_estimate: float = Field(..., ge=0)


# --- Quadrature schemas ---
class QuadratureScheme(str, Enum):
    GRADED = "graded"
    JACOBI = "jacobi"


class QuadratureRule(BaseModel):
    """Graded composite rule; ``grading=None`` picks max(1, 2/nu) from the kernel."""

    model_config = ConfigDict(frozen=True)

    scheme: QuadratureScheme = Field(
        default_factory=lambda: QuadratureScheme(get_settings().quad_scheme)
    )
    n_panels: int = Field(default_factory=lambda: get_settings().quad_panels, ge=1)
    order: int = Field(default_factory=lambda: get_settings().quad_order, ge=1, le=200)
    grading: Optional[float] = Field(None, ge=1)
    tol: float = Field(default_factory=lambda: get_settings().quad_tol, gt=0)
    max_refinements: int = Field(
        default_factory=lambda: get_settings().quad_max_refinements, ge=0
    )


class GridFunction(BaseModel):
    """Sampled function, linearly interpolated between nodes."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    nodes: Tuple[float, ...]
    values: Tuple[float, ...]

    @model_validator(mode="after")
    def check_grid(self) -> "GridFunction":
        if len(self.nodes) != len(self.values):
            raise ValueError("nodes and values must have the same length")
        if len(self.nodes) < 2:
            raise ValueError("a grid function needs at least two nodes")
        if any(b <= a for a, b in zip(self.nodes, self.nodes[1:])):
            raise ValueError("nodes must be strictly increasing")
        return self

    def __call__(self, t):
        return np.interp(t, self.nodes, self.values)


# --- Boundary value problem schemas ---
class PotentialKind(str, Enum):
    CONSTANT = "constant"
    POLYNOMIAL = "polynomial"
    SAMPLES = "samples"


class PotentialSpec(BaseModel):
    """The coefficient q of the boundary value problem."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kind: PotentialKind
    constant: Optional[float] = None
    coefficients: Optional[Tuple[float, ...]] = None
    samples: Optional[GridFunction] = None

    @model_validator(mode="after")
    def check_payload(self) -> "PotentialSpec":
        payload = {
            PotentialKind.CONSTANT: self.constant,
            PotentialKind.POLYNOMIAL: self.coefficients,
            PotentialKind.SAMPLES: self.samples,
        }
        if payload[self.kind] is None:
            raise ValueError(f"potential of kind '{self.kind.value}' needs its payload")
        if sum(value is not None for value in payload.values()) != 1:
            raise ValueError("exactly one potential payload may be given")
        if self.kind is PotentialKind.POLYNOMIAL and not self.coefficients:
            raise ValueError("polynomial potential needs at least one coefficient")
        return self

    @classmethod
    def const(cls, c: float) -> "PotentialSpec":
        return cls(kind=PotentialKind.CONSTANT, constant=c)

    @classmethod
    def poly(cls, coefficients) -> "PotentialSpec":
        return cls(kind=PotentialKind.POLYNOMIAL, coefficients=tuple(coefficients))

    @classmethod
    def tabulated(cls, samples: GridFunction) -> "PotentialSpec":
        return cls(kind=PotentialKind.SAMPLES, samples=samples)

    @property
    def is_zero(self) -> bool:
        if self.kind is PotentialKind.CONSTANT:
            return self.constant == 0.0
        if self.kind is PotentialKind.POLYNOMIAL:
            return all(c == 0.0 for c in self.coefficients)
        return all(v == 0.0 for v in self.samples.values)

    def scaled(self, c: float) -> "PotentialSpec":
        if self.kind is PotentialKind.CONSTANT:
            return PotentialSpec.const(c * self.constant)
        if self.kind is PotentialKind.POLYNOMIAL:
            return PotentialSpec.poly(c * v for v in self.coefficients)
        grid = GridFunction(
            nodes=self.samples.nodes, values=tuple(c * v for v in self.samples.values)
        )
        return PotentialSpec.tabulated(grid)

    def check_covers(self, a: float, b: float) -> None:
        """Samples are interpolated, never extrapolated: they must span [a, b]."""
        if self.kind is not PotentialKind.SAMPLES:
            return
        nodes = self.samples.nodes
        slack = 1e-12 * (b - a)
        if nodes[0] > a + slack or nodes[-1] < b - slack:
            raise DomainError(
                f"tabulated potential covers [{nodes[0]:g}, {nodes[-1]:g}], not the interval [{a:g}, {b:g}]"
            )

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.kind is PotentialKind.CONSTANT:
            return np.full(s.shape, self.constant)
        if self.kind is PotentialKind.POLYNOMIAL:
            return np.polynomial.polynomial.polyval(s, self.coefficients)
        return self.samples(s)


class BVPConfig(BaseModel):
    """Interval, nonlocal point, boundary coupling and kernel parameters.

    ``eta`` is the coupling of the boundary condition y'(b) = eta * y(xi).
    Validation also requires a strictly positive Green's function denominator.
    """

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    a: float
    b: float
    xi: float
    eta: float = Field(0.0, ge=0)
    params: MLParams

    @model_validator(mode="after")
    def check_problem(self) -> "BVPConfig":
        if not self.b > self.a:
            raise ValueError("interval must satisfy b > a")
        if not self.a < self.xi < self.b:
            raise ValueError("nonlocal point must satisfy a < xi < b")
        order = self.params.order
        if not 2.0 < order <= 3.0 * (1.0 + _ORDER_SLACK):
            raise ValueError(f"effective order beta/k = {order:g} must lie in (2, 3]")
        if not 2.0 < self.params.beta <= 3.0:
            logger.warning(
                "beta = %g lies outside (2, 3]; accepted because beta/k = %g does not",
                self.params.beta,
                order,
            )
        if abs(order - round(order)) <= _ORDER_SLACK * order:
            logger.warning("beta/k = %g is an integer; derivative order m jumps to %d", order, round(order) + 1)

        from app.bvp.green import denominator  # Late import to avoid a cycle

        denominator(self)
        return self

    @property
    def length(self) -> float:
        return self.b - self.a


class BVPDocument(BaseModel):
    """Flat JSON layout of a configuration file (schema version 1)."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_version: Literal[1] = Field(1, alias="schema")
    a: float
    b: float
    xi: float
    eta: float = 0.0
    k: float
    rho: float
    beta: float
    gamma: float
    omega: float = 0.0

    @classmethod
    def from_config(cls, config: BVPConfig) -> "BVPDocument":
        p = config.params
        return cls(
            a=config.a, b=config.b, xi=config.xi, eta=config.eta,
            k=p.k, rho=p.rho, beta=p.beta, gamma=p.gamma_p, omega=p.omega,
        )

    def to_config(self) -> BVPConfig:
        params = MLParams(k=self.k, rho=self.rho, beta=self.beta, gamma=self.gamma, omega=self.omega)
        return BVPConfig(a=self.a, b=self.b, xi=self.xi, eta=self.eta, params=params)


class GreenPropertyReport(BaseModel):
    n: int
    scale: float
    min_value: float
    max_value: float
    nonnegative: bool
    monotone: bool
    bracketed: bool
    diagonal_gap: float
    continuous: bool = True
    violations: int = Field(..., ge=0)
    hard: bool  # omega >= 0 and gamma >= 0: failures are errors, not warnings

    @property
    def passed(self) -> bool:
        return self.nonnegative and self.monotone and self.bracketed and self.continuous


# --- Inequality schemas ---
class Verdict(str, Enum):
    NECESSARY_CONDITION_HOLDS = "NecessaryConditionHolds"
    NO_NONTRIVIAL_SOLUTION_CERTIFIED = "NoNontrivialSolutionCertified"


class InequalityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    lhs: float = Field(..., ge=0)
    rhs: float = Field(..., gt=0, le=1)
    margin: float
    verdict: Verdict

    @model_validator(mode="after")
    def check_verdict(self) -> "InequalityReport":
        certified = self.verdict is Verdict.NO_NONTRIVIAL_SOLUTION_CERTIFIED
        if certified != (self.margin < 0):
            raise ValueError("verdict must certify nonexistence exactly when margin < 0")
        return self

    @classmethod
    def from_values(cls, lhs: float, rhs: float) -> "InequalityReport":
        margin = lhs - rhs
        verdict = (
            Verdict.NO_NONTRIVIAL_SOLUTION_CERTIFIED if margin < 0 else Verdict.NECESSARY_CONDITION_HOLDS
        )
        return cls(lhs=lhs, rhs=rhs, margin=margin, verdict=verdict)


class ClassicalReport(BaseModel):
    hartman_wintner: float
    lyapunov: float
    hw_threshold: float
    lyapunov_threshold: float
    kernel_peak: float


class LyapunovBound(BaseModel):
    peak_s: float
    peak_value: float = Field(..., gt=0)
    threshold: float = Field(..., gt=0)


# --- Spectral schemas ---
class SpectralResult(BaseModel):
    dominant_eigenvalue: float
    residual: float = Field(..., ge=0)
    iterations: int = Field(..., ge=0)


class CriticalConstant(BaseModel):
    lambda_star: float = Field(..., gt=0)
    mu_max: float = Field(..., gt=0)
    residual: float = Field(..., ge=0)
    n: int
    iterations: int


class GoldenCheck(BaseModel):
    """One comparison of the k = 1, omega = 0 reduction suite."""

    name: str
    value: float
    expected: float
    error: float = Field(..., ge=0)
    tol: float = Field(..., gt=0)

    @property
    def passed(self) -> bool:
        return self.error <= self.tol


class NontrivialCheck(BaseModel):
    exists: bool
    margin: float
    sigma_min: float
    norm: float

    @field_validator("sigma_min", "norm")
    @classmethod
    def check_nonnegative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("singular values are nonnegative")
        return v
