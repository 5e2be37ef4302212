"""Numerical thresholds used across the package.

Every decision that compares a floating point quantity against zero goes
through one of these fields, so a report can state exactly which thresholds
were in effect.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    rank: float = 1e-10  # relative singular value cut-off
    det: float = 1e-9  # relative to the Hadamard bound of the matrix
    angle: float = 1e-12  # radians; ray membership
    zero: float = 1e-12  # |a(s)| below this counts as a zero of the leading coefficient
    equivalence: float = 1e-10  # projector distance for row-space equality
    samples_per_sector: int = 25
    ellipticity_samples: int = 2048
    newton_iterations: int = 50
    newton_residual: float = 1e-12

    def with_overrides(self, **kwargs) -> "Tolerances":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
