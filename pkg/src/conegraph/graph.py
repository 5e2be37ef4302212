"""Edges, vertices and endpoint-local data of a metric graph.

Each edge is the interval [-1, 1] carrying

    A_j = a(s) D_s^2 + b(s) D_s + c(s) / ((1 - s)(1 + s)),   D_s = -i d/ds,

with polynomial coefficients. Near an endpoint the linear chart
``x = 1 - s`` (at s = +1) or ``x = 1 + s`` (at s = -1) is used, so the
operator reads ``a_q D_x^2 + b_q D_x + c_q / x`` with ``a_q(0) = a(+-1)`` and
``c_q(0) = c(+-1) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
import numpy as np
from numpy.polynomial import polynomial as P

from .errors import EllipticityViolation
from .sectors import Sector
from .tolerances import DEFAULT_TOLERANCES, Tolerances


class Side(str, Enum):
    MINUS = "-"
    PLUS = "+"

    @property
    def s(self) -> float:
        return -1.0 if self is Side.MINUS else 1.0


@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial in the monomial basis; ``coeffs[k]`` multiplies s**k."""

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, value: complex) -> "Polynomial":
        return cls((value,))

    def __call__(self, s):
        if not self.coeffs:
            return np.zeros_like(np.asarray(s, dtype=float), dtype=complex) if np.ndim(s) else 0j
        return P.polyval(s, np.asarray(self.coeffs, dtype=complex))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) <= 1:
            return Polynomial()
        return Polynomial(tuple(P.polyder(np.asarray(self.coeffs, dtype=complex))))


@dataclass(frozen=True)
class Edge:
    id: int
    a: Polynomial
    b: Polynomial = field(default_factory=Polynomial)
    c: Polynomial = field(default_factory=Polynomial)


@dataclass(frozen=True)
class EndpointId:
    edge: int
    side: Side

    def __str__(self) -> str:
        return f"e{self.edge}{self.side.value}"

    @classmethod
    def parse(cls, text: str) -> "EndpointId":
        text = text.strip()
        if len(text) < 3 or text[0] != "e" or text[-1] not in "+-":
            raise ValueError(f"endpoint must look like 'e<id>+' or 'e<id>-', got {text!r}")
        return cls(int(text[1:-1]), Side(text[-1]))


@dataclass(frozen=True)
class Vertex:
    id: int
    endpoints: tuple[EndpointId, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "endpoints", tuple(self.endpoints))

    @property
    def degree(self) -> int:
        return len(self.endpoints)


@dataclass(frozen=True)
class Graph:
    edges: tuple[Edge, ...]
    vertices: tuple[Vertex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "vertices", tuple(self.vertices))

    def edge(self, edge_id: int) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(f"no edge with id {edge_id}")

    def vertex(self, vertex_id: int) -> Vertex:
        for v in self.vertices:
            if v.id == vertex_id:
                return v
        raise KeyError(f"no vertex with id {vertex_id}")

    def endpoints(self) -> list[EndpointId]:
        return [EndpointId(e.id, side) for e in self.edges for side in (Side.MINUS, Side.PLUS)]


@dataclass(frozen=True)
class EndpointLocalData:
    a0: complex
    c0: complex
    log_slope: complex


@dataclass(frozen=True)
class SingularCoordinates:
    """Quotient coordinates (alpha_q, beta_q) of D_max / D_min at some endpoints.

    The x log x coefficient is not stored: it equals ``log_slope * alpha``.
    """

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self) -> None:
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=complex))
        beta = np.atleast_1d(np.asarray(self.beta, dtype=complex))
        if alpha.shape != beta.shape or alpha.ndim != 1:
            raise ValueError("alpha and beta must be 1-D arrays of equal length")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __len__(self) -> int:
        return len(self.alpha)

    def dimension(self) -> int:
        return 2 * len(self.alpha)


def endpoint_local_data(edge: Edge, side: Side) -> EndpointLocalData:
    side = Side(side)
    a0 = complex(edge.a(side.s))
    if a0 == 0:
        raise EllipticityViolation(f"a vanishes at endpoint {EndpointId(edge.id, side)}", side.s)
    # (1 - s)(1 + s) = x (2 - x) in either linear chart
    c0 = complex(edge.c(side.s)) / 2.0
    return EndpointLocalData(a0=a0, c0=c0, log_slope=c0 / a0)


def chebyshev_points(n: int) -> np.ndarray:
    """Chebyshev-Lobatto points on [-1, 1] in increasing order, endpoints included."""
    if n < 2:
        return np.array([-1.0, 1.0])
    return -np.cos(np.pi * np.arange(n) / (n - 1))


@dataclass(frozen=True)
class EllipticityResult:
    passed: bool
    witness: float | None = None
    value: complex | None = None
    reason: str = ""


def _real_zeros(p: Polynomial, tol: Tolerances) -> np.ndarray:
    """Roots of ``p`` on [-1, 1], found from the companion matrix rather than by sampling."""
    coeffs = np.trim_zeros(np.asarray(p.coeffs, dtype=complex), "b")
    if coeffs.size == 0:
        return np.array([0.0])
    if coeffs.size == 1:
        return np.array([])
    roots = P.polyroots(coeffs)
    slack = math.sqrt(tol.zero)
    hits = roots[(np.abs(roots.imag) <= slack) & (np.abs(roots.real) <= 1 + slack)]
    hits = np.clip(hits.real, -1.0, 1.0)
    # keep genuine zeros only: the polynomial must be small there relative to its size
    size = max(1.0, float(np.max(np.abs(p(chebyshev_points(33))))))
    return np.sort(hits[np.abs(p(hits)) <= slack * size])


def ellipticity_check(
    edge: Edge,
    sector: Sector | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> EllipticityResult:
    """Sample a(s) on a Chebyshev grid; fail on a zero or on a value inside ``sector``.

    This is a sampling check, not a proof. The witness is the sample where the
    violation is deepest (smallest |a|, or closest to the sector bisector).
    """
    zeros = _real_zeros(edge.a, tol)
    if zeros.size:
        return EllipticityResult(False, float(zeros[0]), complex(edge.a(zeros[0])), "zero of leading coefficient")
    s = chebyshev_points(tol.ellipticity_samples)
    values = np.asarray(edge.a(s), dtype=complex)
    mags = np.abs(values)
    if mags.min() <= tol.zero:
        i = int(np.argmin(mags))
        return EllipticityResult(False, float(s[i]), complex(values[i]), "zero of leading coefficient")
    if sector is not None:
        offsets = np.abs(np.angle(values * np.exp(-1j * sector.bisector)))
        inside = offsets <= sector.half_angle
        if inside.any():
            i = int(np.argmin(np.where(inside, offsets, np.inf)))
            return EllipticityResult(False, float(s[i]), complex(values[i]), "leading coefficient inside sector")
    return EllipticityResult(True)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    where: str = ""


def validate_graph(g: Graph, tol: Tolerances = DEFAULT_TOLERANCES) -> list[Violation]:
    """Structural and ellipticity problems of ``g``; empty when the graph is usable."""
    out: list[Violation] = []
    edge_ids = [e.id for e in g.edges]
    if not g.edges:
        out.append(Violation("EmptyGraph", "graph has no edges"))
    for eid in {i for i in edge_ids if edge_ids.count(i) > 1}:
        out.append(Violation("DuplicateEdgeId", f"edge id {eid} used more than once", f"e{eid}"))
    vertex_ids = [v.id for v in g.vertices]
    for vid in {i for i in vertex_ids if vertex_ids.count(i) > 1}:
        out.append(Violation("DuplicateVertexId", f"vertex id {vid} used more than once", f"v{vid}"))

    seen: dict[EndpointId, int] = {}
    known = set(edge_ids)
    for v in g.vertices:
        if not v.endpoints:
            out.append(Violation("EmptyVertex", f"vertex {v.id} has no endpoints", f"v{v.id}"))
        for q in v.endpoints:
            if q.edge not in known:
                out.append(Violation("UnknownEdge", f"vertex {v.id} references missing edge {q.edge}", str(q)))
            elif q in seen:
                out.append(Violation("DuplicateEndpoint", f"{q} listed at vertices {seen[q]} and {v.id}", str(q)))
            else:
                seen[q] = v.id
    for q in g.endpoints():
        if q not in seen:
            out.append(Violation("MissingEndpoint", f"{q} belongs to no vertex", str(q)))

    for e in g.edges:
        res = ellipticity_check(e, None, tol)
        if not res.passed:
            out.append(
                Violation("EllipticityViolation", f"a(s) vanishes near s={res.witness:.6g} on edge {e.id}", f"e{e.id}")
            )
    return out


def vertex_local_data(g: Graph, vertex: Vertex) -> list[EndpointLocalData]:
    return [endpoint_local_data(g.edge(q.edge), q.side) for q in vertex.endpoints]


def quotient_dimension(g: Graph) -> int:
    """dim D_max / D_min, two coordinates per endpoint."""
    return 4 * len(g.edges)


def relabel_edges(g: Graph, mapping: dict[int, int]) -> Graph:
    edges = tuple(Edge(mapping[e.id], e.a, e.b, e.c) for e in g.edges)
    vertices = tuple(
        Vertex(v.id, tuple(EndpointId(mapping[q.edge], q.side) for q in v.endpoints)) for v in g.vertices
    )
    return Graph(edges, vertices)
