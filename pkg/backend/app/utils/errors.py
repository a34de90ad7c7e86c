from typing import Optional


class KPrabhakarError(Exception):
    """Base class for every numerical failure raised by the package.

    ``exit_code`` is what the command line front end returns when the error
    reaches it unhandled.
    """

    exit_code: int = 1

    def __init__(self, detail: str, *, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class DomainError(KPrabhakarError, ValueError):
    """Argument outside the domain of an operation."""

    exit_code = 1


class PoleError(DomainError):
    """Argument sits on a pole of the k-Gamma function."""


class NonConvergence(KPrabhakarError):
    """A series did not meet its stopping rule within the term budget."""

    exit_code = 2


class QuadratureError(KPrabhakarError):
    """Panel doubling did not settle within the configured refinements."""

    exit_code = 2


class DegenerateConfig(KPrabhakarError):
    """The boundary coupling leaves no valid Green's function representation."""

    exit_code = 3


class SpectralFailure(KPrabhakarError):
    """Power iteration stagnated or found no positive dominant eigenvalue."""

    exit_code = 4


class InvariantViolation(KPrabhakarError):
    """An internal identity check failed."""

    exit_code = 5
