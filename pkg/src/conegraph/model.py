"""Model operator at a vertex: the diagonal half-line operator sum_q a_q(0) D_x^2.

For lambda off the rays a_q(0) * [0, inf) the kernel of the maximal
extension is spanned by exp(-w_q x) with w_q = sqrt(-lambda / a_q(0)),
Re w_q > 0, whose (alpha, beta) coordinates are (1, -w_q). So lambda is an
eigenvalue for the domain of (C | C') iff det(C - C' Delta(lambda)) = 0 with
Delta = diag(w_q).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .coupling import CouplingCondition, delta_type
from .errors import InvalidSector, OnBackgroundRay, TargetTooLarge, VerificationFailed
from .graph import Graph, SingularCoordinates, vertex_local_data
from .sectors import TWO_PI, OpenSector, angular_distance, arg2pi
from .tolerances import DEFAULT_TOLERANCES, Tolerances


def principal_root(lam: complex, a: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """The square root of -lam/a with positive real part."""
    lam, a = complex(lam), complex(a)
    if lam == 0 or angular_distance(lam, a) <= tol.angle:
        raise OnBackgroundRay(f"lambda={lam} lies on the ray {a}*[0, inf)")
    w = cmath.sqrt(-lam / a)
    if w.real < 0:
        w = -w
    return w


@dataclass(frozen=True)
class ModelVertexData:
    vertex: int
    a0: tuple[complex, ...]
    directions: tuple[complex, ...]  # distinct a_q(0)/|a_q(0)|, increasing argument in [0, 2pi)
    angles: tuple[float, ...]
    group_of: tuple[int, ...]  # endpoint index -> direction index

    @classmethod
    def from_coefficients(
        cls, a0: Sequence[complex], vertex: int = 0, tol: Tolerances = DEFAULT_TOLERANCES
    ) -> "ModelVertexData":
        a0 = tuple(complex(a) for a in a0)
        if not a0 or any(a == 0 for a in a0):
            raise ValueError("leading coefficients must be nonzero")
        raw = [arg2pi(a) for a in a0]
        angles: list[float] = []
        for phi in sorted(raw):
            if not angles or phi - angles[-1] > tol.angle:
                angles.append(phi)
        if len(angles) > 1 and angles[0] + TWO_PI - angles[-1] <= tol.angle:
            angles.pop()

        def group(phi: float) -> int:
            d = [abs(math.remainder(phi - t, TWO_PI)) for t in angles]
            return int(np.argmin(d))

        return cls(
            vertex=vertex,
            a0=a0,
            directions=tuple(cmath.exp(1j * t) for t in angles),
            angles=tuple(angles),
            group_of=tuple(group(phi) for phi in raw),
        )

    @property
    def k(self) -> int:
        return len(self.a0)

    @property
    def n_directions(self) -> int:
        return len(self.directions)

    def members(self, j: int) -> list[int]:
        return [q for q, g in enumerate(self.group_of) if g == j]


def model_vertex_data(g: Graph, vertex_id: int, tol: Tolerances = DEFAULT_TOLERANCES) -> ModelVertexData:
    v = g.vertex(vertex_id)
    return ModelVertexData.from_coefficients([d.a0 for d in vertex_local_data(g, v)], vertex_id, tol)


def background_spectrum(v: ModelVertexData) -> list[complex]:
    return list(v.directions)


def on_background_ray(v: ModelVertexData, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    if lam == 0:
        return True
    return any(angular_distance(lam, d) <= tol.angle for d in v.directions)


def bgres_sectors(v: ModelVertexData) -> list[OpenSector]:
    phi = list(v.angles)
    n = len(phi)
    out = [OpenSector(phi[j], phi[j + 1], j + 1) for j in range(n - 1)]
    out.append(OpenSector(phi[-1], phi[0] + TWO_PI, n))
    return out


def sector_of(v: ModelVertexData, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> OpenSector | None:
    if on_background_ray(v, lam, tol):
        return None
    for sec in bgres_sectors(v):
        if sec.contains(lam):
            return sec
    return None


def delta_matrix(v: ModelVertexData, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    return np.diag([principal_root(lam, a, tol) for a in v.a0])


def model_matrix(v: ModelVertexData, cc: CouplingCondition, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    return cc.C - cc.Cprime @ delta_matrix(v, lam, tol)


def hadamard_scale(M: np.ndarray) -> float:
    return float(np.prod(np.maximum(1.0, np.linalg.norm(M, axis=1))))


def determinant(
    v: ModelVertexData, cc: CouplingCondition, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[complex, float]:
    """det(C - C' Delta(lam)) together with the scale it is compared against."""
    M = model_matrix(v, cc, lam, tol)
    return complex(np.linalg.det(M)), hadamard_scale(M)


class Membership(str, Enum):
    IN_BG_SPEC = "InBgSpec"
    EIGENVALUE = "Eigenvalue"
    RESOLVENT = "Resolvent"


def spectrum_membership(
    v: ModelVertexData, cc: CouplingCondition, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES
) -> Membership:
    if on_background_ray(v, lam, tol):
        return Membership.IN_BG_SPEC
    det, scale = determinant(v, cc, lam, tol)
    return Membership.EIGENVALUE if abs(det) <= tol.det * scale else Membership.RESOLVENT


def eigenfunction_witness(
    v: ModelVertexData, cc: CouplingCondition, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[np.ndarray, SingularCoordinates]:
    """Null vector alpha of C - C' Delta(lam) and the (alpha, beta) of sum_q alpha_q exp(-w_q x)."""
    D = delta_matrix(v, lam, tol)
    M = cc.C - cc.Cprime @ D
    _, _, vh = np.linalg.svd(M)
    alpha = vh[-1].conj()
    return alpha, SingularCoordinates(alpha, -np.diag(D) * alpha)


def theta_p(u: SingularCoordinates) -> SingularCoordinates:
    """Map alpha(1 + (c/a) x log x) + beta x to alpha + beta x.

    In quotient coordinates this is the identity, which is why the graph
    coupling matrices serve unchanged as model couplings.
    """
    return SingularCoordinates(u.alpha.copy(), u.beta.copy())


# -- square-root branches over a background resolvent component --------------


@dataclass(frozen=True)
class SectorBranch:
    """Holomorphic w(-lambda) on an open sector together with matching sqrt(a_q(0)).

    On the sector, sqrt(-lambda/a_q(0)) (positive real part) equals
    ``w(-lambda) / sqrt_a[q]``.
    """

    sector: OpenSector
    anchor: complex
    anchor_root: complex
    sqrt_a: np.ndarray

    def w(self, lam: complex) -> complex:
        return self.anchor_root * cmath.sqrt(complex(lam) / self.anchor)


def sector_branch(v: ModelVertexData, sector: OpenSector, tol: Tolerances = DEFAULT_TOLERANCES) -> SectorBranch:
    for d in v.directions:
        if sector.contains(d, tol.angle):
            raise InvalidSector(f"sector {sector.as_degrees()} deg meets the background ray {d}")
    anchor = sector.direction
    anchor_root = cmath.sqrt(-anchor)
    sqrt_a = np.array([anchor_root / principal_root(anchor, a, tol) for a in v.a0])
    return SectorBranch(sector, anchor, anchor_root, sqrt_a)


@dataclass(frozen=True)
class SectorSpectrum:
    kind: str  # "Empty", "Point", "Whole" or "Unknown"
    points: tuple[complex, ...] = ()
    note: str = ""


def delta_spectrum(
    v: ModelVertexData,
    nu: complex,
    cprime: Sequence[complex],
    sector: OpenSector,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SectorSpectrum:
    """Spectrum of a delta-type condition over one background resolvent component.

    On the sector the eigenvalue equation sum_j c'_j sqrt(-lambda/a_j) = nu
    becomes w(-lambda) * S = nu with S = sum_j c'_j / sqrt(a_j).
    """
    cprime = np.asarray(cprime, dtype=complex)
    nu = complex(nu)
    if cprime.shape != (v.k,):
        raise ValueError(f"need {v.k} values of c'")
    if nu == 0 and not np.any(cprime):
        raise ValueError("(nu, c') must not vanish")
    br = sector_branch(v, sector, tol)
    terms = cprime / br.sqrt_a
    S = complex(terms.sum())
    size = float(np.abs(terms).sum())
    s_zero = abs(S) <= tol.det * size if size > 0 else True
    if s_zero:
        return SectorSpectrum("Whole") if abs(nu) <= tol.det * max(size, 1.0) else SectorSpectrum("Empty")
    if nu == 0:
        return SectorSpectrum("Empty", note="only solution lambda = 0")
    target = nu / S
    lam_p = -target * target
    if not sector.contains(lam_p, tol.angle):
        return SectorSpectrum("Empty", note=f"lambda_p={lam_p} outside the sector")
    w = br.w(lam_p)
    if abs(w - target) > abs(w + target):
        return SectorSpectrum("Empty", note=f"lambda_p={lam_p} solves the equation on the other sheet")
    return SectorSpectrum("Point", (lam_p,))


# -- sign functions and sector placement ---------------------------------------


def direction_roots(v: ModelVertexData, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """sqrt(a_j^0) for each direction, normalized so that the sign function of j is 1 on sector j."""
    sectors = bgres_sectors(v)
    d = v.directions
    root1 = cmath.sqrt(d[0])
    out = [root1]
    for j in range(1, len(d)):
        lam = sectors[j].direction
        out.append(root1 * principal_root(lam, d[0], tol) / principal_root(lam, d[j], tol))
    return np.array(out)


def sign_function(v: ModelVertexData, j: int, lam: complex, roots: np.ndarray | None = None,
                  tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """eps_j(lam) = sqrt(a_j) sqrt(-lam/a_j) / (sqrt(a_1) sqrt(-lam/a_1)), 0-based ``j``."""
    if roots is None:
        roots = direction_roots(v, tol)
    d = v.directions
    return roots[j] * principal_root(lam, d[j], tol) / (roots[0] * principal_root(lam, d[0], tol))


def epsilon_matrix(v: ModelVertexData, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Entry (l, j) is the value of eps_j on sector l, evaluated at the sector bisector."""
    roots = direction_roots(v, tol)
    sectors = bgres_sectors(v)
    n = v.n_directions
    E = np.empty((n, n), dtype=int)
    for l, sec in enumerate(sectors):
        for j in range(n):
            E[l, j] = 1 if sign_function(v, j, sec.direction, roots, tol).real > 0 else -1
    return E


def _verify_pattern(
    v: ModelVertexData, cc: CouplingCondition, whole: set[int], points_per_sector: int, tol: Tolerances
) -> list[str]:
    problems = []
    for sec in bgres_sectors(v):
        expected = Membership.EIGENVALUE if sec.index in whole else Membership.RESOLVENT
        for lam in sec.sample(points_per_sector):
            got = spectrum_membership(v, cc, lam, tol)
            if got is not expected:
                problems.append(f"sector {sec.index}: {got.value} at lambda={lam:.4g}, expected {expected.value}")
    return problems


def design_coupling(
    v: ModelVertexData,
    target: Iterable[int],
    tol: Tolerances = DEFAULT_TOLERANCES,
    verify_points: int = 5,
) -> CouplingCondition:
    """A delta-type condition with nu = 0 whose spectrum is the background spectrum plus
    exactly the sectors numbered in ``target`` (1-based, as returned by bgres_sectors).
    """
    target = set(int(t) for t in target)
    n, k = v.n_directions, v.k
    if any(t < 1 or t > n for t in target):
        raise ValueError(f"sector numbers must lie in 1..{n}, got {sorted(target)}")
    if len(target) >= k:
        raise TargetTooLarge(f"{len(target)} sectors requested but the vertex has only {k} endpoints")

    rhs = np.array([0.0 if l + 1 in target else 1.0 for l in range(n)])
    cprime = np.zeros(k, dtype=complex)
    if rhs.any():
        E = epsilon_matrix(v, tol).astype(float)
        y = np.linalg.solve(E, rhs)
        roots = direction_roots(v, tol)
        for j in range(n):
            q = v.members(j)[0]
            d_j = y[j] * roots[j]
            cprime[q] = d_j * math.sqrt(abs(v.a0[q]))
    else:
        # every sector requested (possible only when two endpoints share a direction):
        # cancel the contributions of two endpoints in the same direction group
        j = next(j for j in range(n) if len(v.members(j)) >= 2)
        q1, q2 = v.members(j)[:2]
        cprime[q1] = math.sqrt(abs(v.a0[q1]))
        cprime[q2] = -math.sqrt(abs(v.a0[q2]))

    cc = delta_type(k, 0.0, cprime, v.vertex)
    problems = _verify_pattern(v, cc, target, verify_points, tol)
    if problems:
        raise VerificationFailed("; ".join(problems[:5]))
    return cc
