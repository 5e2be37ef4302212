"""Closed and open sectors of the complex plane."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def arg2pi(z: complex) -> float:
    """Argument of ``z`` normalized to [0, 2*pi)."""
    phi = math.atan2(z.imag, z.real) % TWO_PI
    return 0.0 if phi >= TWO_PI else phi


def wrap_angle(phi: float) -> float:
    """Map an angle to (-pi, pi]."""
    w = math.remainder(phi, TWO_PI)
    return math.pi if w == -math.pi else w


def angular_distance(z: complex, w: complex) -> float:
    return abs(wrap_angle(math.atan2(z.imag, z.real) - math.atan2(w.imag, w.real)))


@dataclass(frozen=True)
class Sector:
    """Closed sector {r e^{i phi}: r >= 0, |phi - bisector| <= half_angle}."""

    bisector: float
    half_angle: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.half_angle < math.pi):
            raise ValueError(f"half angle must lie in [0, pi), got {self.half_angle}")
        object.__setattr__(self, "bisector", self.bisector % TWO_PI)

    @classmethod
    def from_degrees(cls, bisector_deg: float, half_angle_deg: float) -> "Sector":
        return cls(math.radians(bisector_deg), math.radians(half_angle_deg))

    @property
    def direction(self) -> complex:
        return complex(math.cos(self.bisector), math.sin(self.bisector))

    def edge_directions(self) -> tuple[complex, complex]:
        lo, hi = self.bisector - self.half_angle, self.bisector + self.half_angle
        return complex(math.cos(lo), math.sin(lo)), complex(math.cos(hi), math.sin(hi))

    def contains(self, z: complex) -> bool:
        if z == 0:
            return True
        return abs(wrap_angle(math.atan2(z.imag, z.real) - self.bisector)) <= self.half_angle

    def shrink(self, factor: float) -> "Sector":
        return Sector(self.bisector, self.half_angle * factor)

    def inside(self, open_sector: "OpenSector") -> bool:
        """True if the sector minus the origin lies in ``open_sector``."""
        d = (self.bisector - self.half_angle - open_sector.low) % TWO_PI
        return d > 0.0 and d + 2.0 * self.half_angle < open_sector.width


@dataclass(frozen=True)
class OpenSector:
    """Open sector {r e^{i phi}: r > 0, low < phi < high}, high - low <= 2 pi.

    ``index`` is the 1-based position in the enumeration of background
    resolvent components at a vertex.
    """

    low: float
    high: float
    index: int = 0

    def __post_init__(self) -> None:
        if not (self.low < self.high <= self.low + TWO_PI + 1e-15):
            raise ValueError(f"invalid open sector ({self.low}, {self.high})")

    @property
    def width(self) -> float:
        return self.high - self.low

    @property
    def bisector(self) -> float:
        return 0.5 * (self.low + self.high)

    @property
    def direction(self) -> complex:
        b = self.bisector
        return complex(math.cos(b), math.sin(b))

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        if z == 0:
            return False
        d = (math.atan2(z.imag, z.real) - self.low) % TWO_PI
        return tol < d < self.width - tol

    def sample(self, count: int, radii: tuple[float, float] = (0.1, 10.0)) -> np.ndarray:
        """Deterministic interior points spread in both angle and modulus."""
        t = (np.arange(count) + 0.5) / count
        angles = self.low + self.width * t
        # golden-ratio scrambling decorrelates radius from angle
        u = (np.arange(count) * 0.6180339887498949 + 0.5) % 1.0
        r = radii[0] * (radii[1] / radii[0]) ** u
        return r * np.exp(1j * angles)

    def as_degrees(self) -> tuple[float, float]:
        return math.degrees(self.low), math.degrees(self.high)
