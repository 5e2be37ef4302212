"""Dilation flow on coupling conditions and the per-vertex growth criterion.

The unitary dilation u(x) -> rho^(1/2) u(rho x) sends the domain of (C | C')
to that of (C | C'/rho). As rho -> 0 the condition converges to a
dilation-invariant one whose top rows only involve beta and whose remaining
rows only involve alpha; a determinant built from it decides whether a
closed sector is a sector of minimal growth for the model operator.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .coupling import CouplingCondition, admissible, numerical_rank, projector_distance
from .errors import NonpositiveRho, RankDeficient, SectorHitsBackgroundSpectrum
from .model import ModelVertexData, hadamard_scale, principal_root
from .sectors import Sector, angular_distance
from .tolerances import DEFAULT_TOLERANCES, Tolerances


def kappa_act(cc: CouplingCondition, rho: float) -> CouplingCondition:
    if not rho > 0:
        raise NonpositiveRho(f"rho must be positive, got {rho}")
    return CouplingCondition(cc.vertex, cc.C, cc.Cprime / rho)


@dataclass(frozen=True)
class LimitingDomain:
    """(0 | C1' ; C2 | 0) with C1' of full row rank ``ell``."""

    ell: int
    matrix: np.ndarray
    vertex: int = 0

    @property
    def k(self) -> int:
        return self.matrix.shape[0]

    @property
    def beta_rows(self) -> np.ndarray:
        return self.matrix[: self.ell, self.k :]

    @property
    def alpha_rows(self) -> np.ndarray:
        return self.matrix[self.ell :, : self.k]

    def as_coupling(self) -> CouplingCondition:
        return CouplingCondition.from_matrix(self.vertex, self.matrix)


def limiting_domain(cc: CouplingCondition, tol: Tolerances = DEFAULT_TOLERANCES) -> LimitingDomain:
    k = cc.k
    # rank of C' is judged against the size of the whole condition, so that
    # rounding noise in a vanishing C' block is not promoted to rank
    scale = np.linalg.norm(cc.matrix, 2)
    ell = numerical_rank(cc.Cprime, tol.rank, reference=scale)
    u, _, vh = np.linalg.svd(cc.Cprime)
    rotated_C = u.conj().T @ cc.C
    out = np.zeros((k, 2 * k), dtype=complex)
    out[:ell, k:] = vh[:ell]
    c2 = rotated_C[ell:]
    if k - ell:
        # orthonormal rows for the alpha block; same row space
        _, _, vh2 = np.linalg.svd(c2, full_matrices=False)
        if numerical_rank(c2, tol.rank, reference=scale) < k - ell:
            raise RankDeficient("alpha block of the reduced condition lost rank; input not admissible")
        out[ell:, :k] = vh2
    ld = LimitingDomain(ell, out, cc.vertex)
    if not admissible(ld.as_coupling(), tol):
        raise RankDeficient("limiting condition is not admissible")
    return ld


def grassmann_distance(cc1: CouplingCondition, cc2: CouplingCondition, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Spectral norm of the difference of the projectors onto the two row spaces."""
    return projector_distance(cc1, cc2, tol)


@dataclass(frozen=True)
class SMatrix:
    matrix: np.ndarray
    sqrt_a: np.ndarray
    anchor: complex
    anchor_root: complex

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    @property
    def scale(self) -> float:
        return hadamard_scale(self.matrix)


def sector_avoids_rays(v: ModelVertexData, sector: Sector, tol: Tolerances = DEFAULT_TOLERANCES) -> list[complex]:
    """The leading coefficients whose rays meet the closed sector (empty when none do)."""
    return [a for a in v.a0 if angular_distance(a, sector.direction) <= sector.half_angle + tol.angle]


def build_smatrix(
    ld: LimitingDomain, v: ModelVertexData, sector: Sector, tol: Tolerances = DEFAULT_TOLERANCES
) -> SMatrix:
    hits = sector_avoids_rays(v, sector, tol)
    if hits:
        raise SectorHitsBackgroundSpectrum(f"sector meets the rays of {hits}")
    anchor = sector.direction
    anchor_root = cmath.sqrt(-anchor)
    # sqrt(a_j) chosen so that anchor_root / sqrt(a_j) has positive real part
    sqrt_a = np.array([anchor_root / principal_root(anchor, a, tol) for a in v.a0])
    S = np.vstack([ld.beta_rows / sqrt_a[None, :], ld.alpha_rows])
    return SMatrix(S, sqrt_a, anchor, anchor_root)


@dataclass(frozen=True)
class VertexVerdict:
    vertex: int
    certified: bool
    reason: str = ""
    det: complex | None = None
    scale: float | None = None
    limiting: LimitingDomain | None = None
    smatrix: SMatrix | None = None


def vertex_minimal_growth(
    cc: CouplingCondition, v: ModelVertexData, sector: Sector, tol: Tolerances = DEFAULT_TOLERANCES
) -> VertexVerdict:
    ld = limiting_domain(cc, tol)
    hits = sector_avoids_rays(v, sector, tol)
    if hits:
        return VertexVerdict(v.vertex, False, "SectorHitsBackgroundSpectrum", limiting=ld)
    S = build_smatrix(ld, v, sector, tol)
    det, scale = S.det, S.scale
    if abs(det) > tol.det * scale:
        return VertexVerdict(v.vertex, True, "", det, scale, ld, S)
    return VertexVerdict(v.vertex, False, "DeterminantNearZero", det, scale, ld, S)


# -- dilation homogeneity on exponential functions ------------------------------


@dataclass(frozen=True)
class Exponential:
    """coef * exp(-rate * x), closed under dilation and differentiation."""

    coef: complex
    rate: complex

    def __call__(self, x):
        return self.coef * np.exp(-self.rate * np.asarray(x))

    def second_derivative(self) -> "Exponential":
        return Exponential(self.coef * self.rate**2, self.rate)

    def dilate(self, rho: float) -> "Exponential":
        return Exponential(self.coef * np.sqrt(rho), self.rate * rho)

    def scale(self, factor: complex) -> "Exponential":
        return Exponential(self.coef * factor, self.rate)


def model_shifted(a: complex, lam: complex, u: Exponential) -> Exponential:
    """(a D_x^2 - lam) u, with D_x^2 = -d^2/dx^2."""
    return Exponential(-a * u.second_derivative().coef - lam * u.coef, u.rate)


def kappa_homogeneity_residual(a: complex, lam: complex, mu: complex, rho: float, x: float) -> float:
    """Relative mismatch of (A - rho^2 lam) kappa_rho u and rho^2 kappa_rho (A - lam) u at x."""
    u = Exponential(1.0, mu)
    lhs = model_shifted(a, rho**2 * lam, u.dilate(rho))(x)
    rhs = (rho**2) * model_shifted(a, lam, u).dilate(rho)(x)
    return float(abs(lhs - rhs) / max(abs(lhs), abs(rhs), np.finfo(float).tiny))
