"""Graph-level verdict: parameter ellipticity on every edge plus the
limiting-domain determinant at every vertex."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .coupling import CouplingCondition, GraphCoupling, require_valid
from .graph import EllipticityResult, Graph, ellipticity_check
from .kappa import VertexVerdict, vertex_minimal_growth
from .model import (
    Membership,
    ModelVertexData,
    SectorSpectrum,
    bgres_sectors,
    delta_spectrum,
    determinant,
    model_matrix,
    model_vertex_data,
    principal_root,
    sector_branch,
    spectrum_membership,
)
from .sectors import OpenSector, Sector
from .tolerances import DEFAULT_TOLERANCES, Tolerances

SAMPLE_RADII = (1e-2, 1e2)


def polish_eigenvalue(
    v: ModelVertexData, cc: CouplingCondition, lam0: complex, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[complex, bool]:
    """Newton iteration on f(lam) = det(C - C' Delta(lam)).

    Uses f'/f = tr(M^{-1} dM/dlam), dw_q/dlam = -1/(2 a_q w_q). Returns the
    final iterate and whether the residual test was met.
    """
    a = np.asarray(v.a0)
    lam = complex(lam0)
    for _ in range(tol.newton_iterations):
        det, scale = determinant(v, cc, lam, tol)
        if abs(det) <= tol.newton_residual * scale:
            return lam, True
        M = model_matrix(v, cc, lam, tol)
        w = np.array([principal_root(lam, aq, tol) for aq in a])
        dM = -cc.Cprime * (-1.0 / (2.0 * a * w))[None, :]
        try:
            trace = np.trace(np.linalg.solve(M, dM))
        except np.linalg.LinAlgError:
            return lam, True
        if trace == 0:
            break
        step = 1.0 / trace
        lam -= step
        if abs(step) <= 1e-15 * abs(lam):
            break
    det, scale = determinant(v, cc, lam, tol)
    return lam, abs(det) <= tol.newton_residual * scale


def candidate_eigenvalues(
    v: ModelVertexData, cc: CouplingCondition, sector: OpenSector, tol: Tolerances = DEFAULT_TOLERANCES
) -> list[complex]:
    """Roots of det(C - w C' diag(1/sqrt a)) in w, mapped to lambda = -w^2 on the sector sheet."""
    br = sector_branch(v, sector, tol)
    B = cc.Cprime / br.sqrt_a[None, :]
    with np.errstate(all="ignore"):
        ws = scipy.linalg.eigvals(cc.C, B)
    out = []
    for w in ws:
        if not np.isfinite(w) or w == 0:
            continue
        lam = -complex(w) ** 2
        if not sector.contains(lam, tol.angle):
            continue
        wl = br.w(lam)
        if abs(wl - w) <= abs(wl + w):
            out.append(lam)
    return out


def classify_sector(
    v: ModelVertexData, cc: CouplingCondition, sector: OpenSector, tol: Tolerances = DEFAULT_TOLERANCES
) -> SectorSpectrum:
    if cc.delta is not None:
        return delta_spectrum(v, cc.delta.nu, cc.delta.cprime, sector, tol)
    samples = sector.sample(tol.samples_per_sector, SAMPLE_RADII)
    verdicts = [spectrum_membership(v, cc, lam, tol) for lam in samples]
    if all(m is Membership.EIGENVALUE for m in verdicts):
        return SectorSpectrum("Whole")
    points = []
    for lam0 in candidate_eigenvalues(v, cc, sector, tol):
        lam, ok = polish_eigenvalue(v, cc, lam0, tol)
        if ok and sector.contains(lam, tol.angle) and spectrum_membership(v, cc, lam, tol) is Membership.EIGENVALUE:
            if all(abs(lam - p) > 1e-9 * max(1.0, abs(p)) for p in points):
                points.append(lam)
    unexplained = [
        lam
        for lam, m in zip(samples, verdicts)
        if m is Membership.EIGENVALUE and all(abs(lam - p) > 1e-6 * max(1.0, abs(p)) for p in points)
    ]
    if unexplained:
        return SectorSpectrum("Unknown", tuple(points), note=f"{len(unexplained)} sampled eigenvalue verdicts unexplained")
    if points:
        return SectorSpectrum("Point", tuple(sorted(points, key=abs)))
    return SectorSpectrum("Empty")


@dataclass(frozen=True)
class VertexClassification:
    vertex: int
    model: ModelVertexData
    sectors: tuple[tuple[OpenSector, SectorSpectrum], ...]


def classify_vertex(v: ModelVertexData, cc: CouplingCondition, tol: Tolerances = DEFAULT_TOLERANCES) -> VertexClassification:
    return VertexClassification(v.vertex, v, tuple((s, classify_sector(v, cc, s, tol)) for s in bgres_sectors(v)))


def classify_sectors(g: Graph, gc: GraphCoupling, tol: Tolerances = DEFAULT_TOLERANCES) -> list[VertexClassification]:
    require_valid(g, gc, tol)
    return [classify_vertex(model_vertex_data(g, vx.id, tol), gc.at(vx.id), tol) for vx in g.vertices]


@dataclass(frozen=True)
class EdgeReport:
    edge: int
    ellipticity: EllipticityResult


@dataclass(frozen=True)
class VertexReport:
    vertex: int
    model: ModelVertexData
    verdict: VertexVerdict
    classification: VertexClassification | None = None


@dataclass(frozen=True)
class AnalysisReport:
    sector: Sector
    edges: tuple[EdgeReport, ...]
    vertices: tuple[VertexReport, ...]
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES)

    @property
    def certified(self) -> bool:
        return all(e.ellipticity.passed for e in self.edges) and all(v.verdict.certified for v in self.vertices)

    @property
    def reasons(self) -> list[str]:
        out = []
        for e in self.edges:
            if not e.ellipticity.passed:
                out.append(f"edge {e.edge}: {e.ellipticity.reason} at s={e.ellipticity.witness:.6g}")
        for v in self.vertices:
            if not v.verdict.certified:
                detail = "" if v.verdict.det is None else f" (det S = {v.verdict.det:.3e})"
                out.append(f"vertex {v.vertex}: {v.verdict.reason}{detail}")
        return out


def analyze(
    g: Graph,
    gc: GraphCoupling,
    sector: Sector,
    tol: Tolerances = DEFAULT_TOLERANCES,
    classify: bool = True,
) -> AnalysisReport:
    require_valid(g, gc, tol)
    edges = tuple(EdgeReport(e.id, ellipticity_check(e, sector, tol)) for e in g.edges)
    vertices = []
    for vx in g.vertices:
        v = model_vertex_data(g, vx.id, tol)
        cc = gc.at(vx.id)
        verdict = vertex_minimal_growth(cc, v, sector, tol)
        vertices.append(VertexReport(vx.id, v, verdict, classify_vertex(v, cc, tol) if classify else None))
    return AnalysisReport(sector, edges, tuple(vertices), tol)
