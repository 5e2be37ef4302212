"""Finite-difference checks of resolvent decay and model-operator eigenvalues.

Each edge [-1, 1] carries a uniform grid of n points including both ends.
Interior grid points get the central-difference rows of a D_s^2 + b D_s;
the 2N coupling conditions act on alpha = u(end) and beta = du/dx, with
x = 1 - s at s = +1 and x = 1 + s at s = -1, using one-sided second-order
differences. The resolvent norm of the constrained problem is
1 / sigma_min((L - lam S) Z), where Z is an orthonormal basis of the grid
functions satisfying the coupling rows.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import minimize_scalar

from .coupling import CouplingCondition, GraphCoupling, require_valid
from .errors import SingularPotentialUnsupported, TooFewSamples
from .graph import Graph, Side
from .model import ModelVertexData
from .tolerances import DEFAULT_TOLERANCES, Tolerances

MIN_POINTS = 16
BLOWUP = 1e7  # max(1, |lam|) * |R| at or above this marks a point of (discrete) spectrum
NEAR_RAY = 0.1  # radians; discrete eigenvalues this close to a swept ray are sampled explicitly


@dataclass(frozen=True)
class Discretization:
    n_per_edge: int
    h: float
    offsets: dict[int, int]  # edge id -> first unknown
    interior: np.ndarray  # L: (n_int x n_tot), rows of A at interior points
    selection: np.ndarray  # S: picks the interior unknowns
    constraints: np.ndarray  # K: (2N x n_tot), unit-norm coupling rows
    null_basis: np.ndarray  # Z: orthonormal basis of ker K

    @property
    def size(self) -> int:
        return self.interior.shape[1]

    def matrix(self, lam: complex = 0.0) -> np.ndarray:
        """Square system: shifted interior rows stacked on the constraint rows."""
        return np.vstack([self.interior - lam * self.selection, self.constraints])

    def reduced(self, lam: complex = 0.0) -> np.ndarray:
        return (self.interior - lam * self.selection) @ self.null_basis

    def sigma_min(self, lam: complex) -> float:
        return float(np.linalg.svd(self.reduced(lam), compute_uv=False)[-1])

    def eigenvalues(self) -> np.ndarray:
        return scipy.linalg.eigvals(self.interior @ self.null_basis, self.selection @ self.null_basis)


def _boundary_stencil(side: Side, h: float) -> tuple[list[int], list[float]]:
    """Local offsets and weights giving beta = du/dx at an endpoint."""
    if side is Side.MINUS:
        return [0, 1, 2], [-1.5 / h, 2.0 / h, -0.5 / h]
    # x = 1 - s, so du/dx = -du/ds
    return [-1, -2, -3], [-1.5 / h, 2.0 / h, -0.5 / h]


def discretize(g: Graph, gc: GraphCoupling, n_per_edge: int, tol: Tolerances = DEFAULT_TOLERANCES) -> Discretization:
    require_valid(g, gc, tol)
    if n_per_edge < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} points per edge, got {n_per_edge}")
    for e in g.edges:
        if not e.c.is_zero():
            raise SingularPotentialUnsupported(f"edge {e.id} has a Coulomb term; only c = 0 is discretized")
    n = n_per_edge
    h = 2.0 / (n - 1)
    s = np.linspace(-1.0, 1.0, n)
    offsets = {e.id: i * n for i, e in enumerate(g.edges)}
    n_tot = n * len(g.edges)
    n_int = (n - 2) * len(g.edges)

    L = np.zeros((n_int, n_tot), dtype=complex)
    S = np.zeros((n_int, n_tot))
    row = 0
    for e in g.edges:
        a, b = np.asarray(e.a(s[1:-1])), np.asarray(e.b(s[1:-1]))
        o = offsets[e.id]
        for i in range(1, n - 1):
            ai, bi = a[i - 1], b[i - 1]
            # a D_s^2 + b D_s with D_s = -i d/ds
            L[row, o + i - 1] = -ai / h**2 + 1j * bi / (2 * h)
            L[row, o + i] = 2 * ai / h**2
            L[row, o + i + 1] = -ai / h**2 - 1j * bi / (2 * h)
            S[row, o + i] = 1.0
            row += 1

    K = np.zeros((gc.total_rows(), n_tot), dtype=complex)
    row = 0
    for vx in g.vertices:
        cc = gc.at(vx.id)
        for j, q in enumerate(vx.endpoints):
            end = offsets[q.edge] + (0 if q.side is Side.MINUS else n - 1)
            K[row : row + cc.k, end] += cc.C[:, j]
            base = offsets[q.edge] + (0 if q.side is Side.MINUS else n)
            for off, w in zip(*_boundary_stencil(q.side, h)):
                K[row : row + cc.k, base + off] += w * cc.Cprime[:, j]
        row += cc.k
    K /= np.linalg.norm(K, axis=1, keepdims=True)
    Z = scipy.linalg.null_space(K)
    if Z.shape[1] != n_int:
        raise ValueError("coupling rows are degenerate on this grid")
    return Discretization(n, h, offsets, L, S, K, Z)


@dataclass(frozen=True)
class SweepPoint:
    r: float
    lam: complex
    sigma_min: float

    @property
    def resolvent_norm(self) -> float:
        return math.inf if self.sigma_min == 0 else 1.0 / self.sigma_min

    @property
    def scaled(self) -> float:
        return self.r * self.resolvent_norm


@dataclass(frozen=True)
class SweepResult:
    theta: float
    points: tuple[SweepPoint, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "re_lambda", "im_lambda", "sigma_min", "r_times_resnorm"])
        for p in self.points:
            w.writerow([f"{p.r:.12g}", f"{p.lam.real:.12g}", f"{p.lam.imag:.12g}", f"{p.sigma_min:.12g}", f"{p.scaled:.12g}"])
        return buf.getvalue()


def sweep_ray(d: Discretization, theta: float, r_values: Sequence[float], refine: bool = True) -> SweepResult:
    """sigma_min along lam = r e^{i theta}.

    With ``refine`` two kinds of points are added so that eigenvalues on or
    near the ray show up as resolvent peaks instead of being stepped over:
    the projections onto the ray of discrete eigenvalues within ``NEAR_RAY``
    radians of it, and the refined position of every interior local minimum
    of sigma_min on the grid.
    """
    r = np.asarray(r_values, dtype=float)
    if r.ndim != 1 or r.size == 0 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise ValueError("r values must be positive and strictly increasing")
    direction = complex(math.cos(theta), math.sin(theta))
    sig = {float(ri): d.sigma_min(ri * direction) for ri in r}
    if refine:
        for mu in d.eigenvalues():
            if not np.isfinite(mu) or mu == 0:
                continue
            x = float((mu * direction.conjugate()).real)
            if r[0] < x < r[-1] and abs(cmath.phase(mu * direction.conjugate())) <= NEAR_RAY and x not in sig:
                sig[x] = d.sigma_min(x * direction)
        s = np.array([sig[float(ri)] for ri in r])
        for i in range(1, len(r) - 1):
            if s[i] < s[i - 1] and s[i] < s[i + 1]:
                res = minimize_scalar(
                    lambda x: d.sigma_min(x * direction),
                    bounds=(r[i - 1], r[i + 1]),
                    method="bounded",
                    options={"xatol": 1e-12 * r[i], "maxiter": 200},
                )
                x = float(res.x)
                if x not in sig and r[i - 1] < x < r[i + 1]:
                    sig[x] = float(res.fun)
    pts = tuple(SweepPoint(ri, ri * direction, sig[ri]) for ri in sorted(sig))
    return SweepResult(theta, pts)


class Decay(str, Enum):
    DECAY = "Decay"
    NO_DECAY = "NoDecay"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DecayVerdict:
    verdict: Decay
    slope: float
    spread: float  # max / min of r * |R| over the top two decades


def decay_verdict(sr: SweepResult) -> DecayVerdict:
    """Classify the tail of a sweep; thresholds are engineering choices, not theorems."""
    r = np.array([p.r for p in sr.points])
    if r.size < 2 or r[-1] / r[0] < 100.0 * (1 - 1e-12):
        raise TooFewSamples("need samples spanning at least two decades of |lambda|")
    top = r >= r[-1] / 100.0 * (1 - 1e-12)
    sigma = np.array([p.sigma_min for p in sr.points])[top]
    norms = np.array([p.resolvent_norm for p in sr.points])[top]
    scaled = r[top] * norms
    slope = float(np.polyfit(np.log(r[top]), np.log(norms), 1)[0]) if np.all(np.isfinite(norms)) else math.inf
    spread = float(scaled.max() / scaled.min())
    # the ray runs through (discrete) spectrum in the tail: no bound of the form C/|lam|
    if np.any(np.maximum(1.0, r[top]) >= BLOWUP * sigma):
        return DecayVerdict(Decay.NO_DECAY, slope, spread)
    if spread <= 10.0 and -1.3 <= slope <= -0.7:
        return DecayVerdict(Decay.DECAY, slope, spread)
    if slope >= -0.3:
        return DecayVerdict(Decay.NO_DECAY, slope, spread)
    return DecayVerdict(Decay.INCONCLUSIVE, slope, spread)


def _model_operator(v: ModelVertexData, cc: CouplingCondition, L: float, n: int) -> sp.csr_matrix:
    """Reduced sparse matrix on interior unknowns of [0, L]^k, boundary values eliminated."""
    k = v.k
    h = L / (n - 1)
    m = n - 2  # interior points per half-line
    blocks = []
    for q in range(k):
        a = v.a0[q]
        main = np.full(m, 2 * a / h**2, dtype=complex)
        off = np.full(m - 1, -a / h**2, dtype=complex)
        blocks.append(sp.diags([off, main, off], [-1, 0, 1], format="csr"))
    A = sp.block_diag(blocks, format="lil")
    # coupling rows: (C - 1.5/h C') u_0 + C'(2 u_1 - 0.5 u_2)/h = 0; u_{n-1} = 0 (Dirichlet at L)
    KB = cc.C - 1.5 / h * cc.Cprime
    if abs(np.linalg.det(KB)) <= 1e-14 * max(1.0, np.linalg.norm(KB)) ** k:
        raise ValueError("coupling cannot be solved for boundary values on this grid")
    KB_inv = np.linalg.inv(KB)
    # u_0 = G1 u_1 + G2 u_2 (vectors over half-lines)
    G1 = -KB_inv @ cc.Cprime * (2.0 / h)
    G2 = -KB_inv @ cc.Cprime * (-0.5 / h)
    for q in range(k):
        row = q * m  # first interior point of line q, couples to u_0 of line q
        coef = -v.a0[q] / h**2
        for p in range(k):
            A[row, p * m] += coef * G1[q, p]
            A[row, p * m + 1] += coef * G2[q, p]
    return A.tocsr()


def truncated_model_eigenvalues(
    v: ModelVertexData,
    cc: CouplingCondition,
    L: float,
    n: int,
    near: complex | None = None,
    count: int = 6,
) -> np.ndarray:
    """Eigenvalues of the model operator on [0, L]^k with Dirichlet conditions at x = L.

    Without ``near`` all eigenvalues are computed densely; with ``near`` the
    ``count`` eigenvalues closest to it are found by shift-invert.
    """
    if L <= 0 or n < MIN_POINTS:
        raise ValueError("need L > 0 and at least 16 grid points")
    A = _model_operator(v, cc, L, n)
    if near is None:
        return np.linalg.eigvals(A.toarray())
    count = min(count, A.shape[0] - 2)
    vals = spla.eigs(A.astype(complex), k=count, sigma=complex(near), which="LM", return_eigenvectors=False)
    return vals[np.argsort(np.abs(vals - near))]


def off_ray_eigenvalues(v: ModelVertexData, values: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Eigenvalues farther than ``tol`` (relative) from every background ray."""
    keep = []
    for lam in values:
        dist = min(abs(lam - max(0.0, (lam * np.conj(d)).real) * d) for d in v.directions)
        if dist > tol * max(1.0, abs(lam)):
            keep.append(lam)
    return np.array(keep, dtype=complex)
