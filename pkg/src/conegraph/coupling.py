"""Vertex coupling conditions gamma_p = (C | C') acting on (alpha, beta).

A condition at a vertex with k endpoints is a k x 2k complex matrix; the
domain it selects is {u : C alpha + C' beta = 0}. Two conditions are
equivalent when they differ by left multiplication with an invertible
matrix, i.e. when their row spaces coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AllZeroParameters, DimensionMismatch, InvalidInput
from .graph import Graph, SingularCoordinates, validate_graph
from .tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True)
class DeltaParameters:
    nu: complex
    cprime: tuple[complex, ...]


@dataclass(frozen=True, eq=False)
class CouplingCondition:
    vertex: int
    C: np.ndarray
    Cprime: np.ndarray
    # set when built by delta_type(); lets callers use the closed-form spectrum
    delta: DeltaParameters | None = field(default=None)

    def __post_init__(self) -> None:
        C = np.atleast_2d(np.array(self.C, dtype=complex))
        Cp = np.atleast_2d(np.array(self.Cprime, dtype=complex))
        if C.ndim != 2 or C.shape != Cp.shape or C.shape[0] != C.shape[1]:
            raise DimensionMismatch(f"C and C' must both be k x k, got {C.shape} and {Cp.shape}")
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(Cp))):
            raise ValueError("coupling matrices must be finite")
        C.setflags(write=False)
        Cp.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "Cprime", Cp)

    @property
    def k(self) -> int:
        return self.C.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.hstack([self.C, self.Cprime])

    @classmethod
    def from_matrix(cls, vertex: int, gamma: np.ndarray) -> "CouplingCondition":
        gamma = np.atleast_2d(np.asarray(gamma, dtype=complex))
        k = gamma.shape[0]
        if gamma.shape != (k, 2 * k):
            raise DimensionMismatch(f"expected a k x 2k matrix, got {gamma.shape}")
        return cls(vertex, gamma[:, :k], gamma[:, k:])

    def left_multiply(self, M: np.ndarray) -> "CouplingCondition":
        M = np.asarray(M, dtype=complex)
        return CouplingCondition(self.vertex, M @ self.C, M @ self.Cprime)

    def permute(self, order) -> "CouplingCondition":
        """Reorder endpoints: new endpoint i is old endpoint ``order[i]``."""
        order = list(order)
        delta = None
        if self.delta is not None:
            # continuity rows make nu * alpha_1 equivalent to nu * alpha_j for any j
            delta = DeltaParameters(self.delta.nu, tuple(self.delta.cprime[i] for i in order))
        return CouplingCondition(self.vertex, self.C[:, order], self.Cprime[:, order], delta)


def numerical_rank(M: np.ndarray, rel_tol: float = DEFAULT_TOLERANCES.rank, reference: float | None = None) -> int:
    """Number of singular values above ``rel_tol`` times ``reference`` (default: the largest)."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    scale = sv[0] if reference is None else reference
    if scale == 0:
        return 0
    return int(np.sum(sv > rel_tol * scale))


def admissible(cc: CouplingCondition, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    return numerical_rank(cc.matrix, tol.rank) == cc.k


def row_space_projector(M: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Orthogonal projector onto the span of the (conjugated) rows of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    _, sv, vh = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(sv > tol.rank * sv[0])) if sv.size and sv[0] > 0 else 0
    basis = vh[:r]
    return basis.conj().T @ basis


def projector_distance(cc1: CouplingCondition, cc2: CouplingCondition, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    if cc1.k != cc2.k:
        raise DimensionMismatch(f"conditions have sizes {cc1.k} and {cc2.k}")
    diff = row_space_projector(cc1.matrix, tol) - row_space_projector(cc2.matrix, tol)
    return float(np.linalg.norm(diff, 2))


def equivalent(cc1: CouplingCondition, cc2: CouplingCondition, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    return projector_distance(cc1, cc2, tol) <= tol.equivalence


def apply(cc: CouplingCondition, u: SingularCoordinates) -> np.ndarray:
    """C alpha + C' beta; ``u`` lies in the domain iff this vanishes."""
    if len(u) != cc.k:
        raise DimensionMismatch(f"vertex has {cc.k} endpoints, coordinates have {len(u)}")
    return cc.C @ u.alpha + cc.Cprime @ u.beta


def delta_type(k: int, nu: complex, cprime, vertex: int = 0) -> CouplingCondition:
    """Continuity of alpha across the vertex plus nu*alpha_1 + sum_j c'_j beta_j = 0."""
    cprime = np.asarray(cprime, dtype=complex).ravel()
    if k < 1 or cprime.shape != (k,):
        raise DimensionMismatch(f"need {k} values of c', got {cprime.shape[0]}")
    nu = complex(nu)
    if nu == 0 and not np.any(cprime):
        raise AllZeroParameters("(nu, c'_1, ..., c'_k) must not all vanish")
    C = np.zeros((k, k), dtype=complex)
    Cp = np.zeros((k, k), dtype=complex)
    for i in range(k - 1):
        C[i, i] = 1.0
        C[i, i + 1] = -1.0
    C[k - 1, 0] = nu
    Cp[k - 1, :] = cprime
    return CouplingCondition(vertex, C, Cp, DeltaParameters(nu, tuple(complex(c) for c in cprime)))


def kirchhoff(k: int, vertex: int = 0) -> CouplingCondition:
    return delta_type(k, 0.0, np.ones(k), vertex)


def dirichlet(k: int, vertex: int = 0) -> CouplingCondition:
    return CouplingCondition(vertex, np.eye(k), np.zeros((k, k)))


@dataclass(frozen=True)
class GraphCoupling:
    conditions: tuple[CouplingCondition, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "conditions", tuple(self.conditions))

    def at(self, vertex_id: int) -> CouplingCondition:
        for cc in self.conditions:
            if cc.vertex == vertex_id:
                return cc
        raise KeyError(f"no coupling condition for vertex {vertex_id}")

    def total_rows(self) -> int:
        return sum(cc.k for cc in self.conditions)

    def replace(self, cc: CouplingCondition) -> "GraphCoupling":
        return GraphCoupling(tuple(cc if c.vertex == cc.vertex else c for c in self.conditions))

    def block_matrix(self, g: Graph) -> np.ndarray:
        """The assembled 2N x 4N map in the (alpha, beta) coordinates of ``g.endpoints()``.

        Columns are ordered alpha_q for all endpoints, then beta_q.
        """
        endpoints = g.endpoints()
        col = {q: i for i, q in enumerate(endpoints)}
        n = len(endpoints)
        out = np.zeros((self.total_rows(), 2 * n), dtype=complex)
        row = 0
        for v in g.vertices:
            cc = self.at(v.id)
            for j, q in enumerate(v.endpoints):
                out[row : row + cc.k, col[q]] = cc.C[:, j]
                out[row : row + cc.k, n + col[q]] = cc.Cprime[:, j]
            row += cc.k
        return out


def check_graph_coupling(g: Graph, gc: GraphCoupling, tol: Tolerances = DEFAULT_TOLERANCES) -> list[str]:
    problems = []
    ids = [cc.vertex for cc in gc.conditions]
    for v in g.vertices:
        n = ids.count(v.id)
        if n != 1:
            problems.append(f"vertex {v.id} has {n} coupling conditions, expected 1")
            continue
        cc = gc.at(v.id)
        if cc.k != v.degree:
            problems.append(f"vertex {v.id} has {v.degree} endpoints but its condition is {cc.k} x {2 * cc.k}")
        elif not admissible(cc, tol):
            problems.append(f"coupling at vertex {v.id} is not surjective (rank < {cc.k})")
    known = {v.id for v in g.vertices}
    for vid in ids:
        if vid not in known:
            problems.append(f"coupling given for unknown vertex {vid}")
    if not problems and gc.total_rows() != 2 * len(g.edges):
        problems.append(f"{gc.total_rows()} coupling rows for {len(g.edges)} edges, expected {2 * len(g.edges)}")
    return problems


def require_valid(g: Graph, gc: GraphCoupling, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
    violations = validate_graph(g, tol)
    problems = [f"{v.kind}: {v.message}" for v in violations]
    if not violations:
        problems += check_graph_coupling(g, gc, tol)
    if problems:
        raise InvalidInput("; ".join(problems), violations)
