"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ConegraphError(Exception):
    """Base class for every error raised by this package."""


class InputError(ConegraphError, ValueError):
    """Raised when user-supplied data is malformed or inconsistent."""


class EllipticityViolation(InputError):
    def __init__(self, message: str, s: float | None = None) -> None:
        super().__init__(message)
        self.s = s


class DimensionMismatch(InputError):
    pass


class AllZeroParameters(InputError):
    pass


class NonpositiveRho(InputError):
    pass


class InvalidInput(InputError):
    """Wraps a list of graph or coupling violations found before analysis."""

    def __init__(self, message: str, violations: list | None = None) -> None:
        super().__init__(message)
        self.violations = list(violations or [])


class ProblemFileError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class OnBackgroundRay(ConegraphError, ValueError):
    """The spectral parameter lies on a ray a*[0, inf) of the background spectrum."""


class InvalidSector(ConegraphError, ValueError):
    pass


class SectorHitsBackgroundSpectrum(InvalidSector):
    pass


class TargetTooLarge(InputError):
    pass


class VerificationFailed(ConegraphError):
    pass


class RankDeficient(ConegraphError):
    pass


class SingularPotentialUnsupported(InputError):
    pass


class TooFewSamples(ConegraphError, ValueError):
    pass
