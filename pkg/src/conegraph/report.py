"""JSON-ready rendering of analysis results."""

from __future__ import annotations

import math

from . import __version__
from .analysis import AnalysisReport, VertexClassification
from .kappa import LimitingDomain, VertexVerdict
from .model import SectorSpectrum
from .problem import complex_pair, matrix_pairs
from .sectors import OpenSector


def _deg(x: float) -> float:
    return round(math.degrees(x), 12)


def open_sector_dict(s: OpenSector) -> dict:
    return {"index": s.index, "low_deg": _deg(s.low), "high_deg": _deg(s.high)}


def spectrum_dict(sp: SectorSpectrum) -> dict:
    out = {"kind": sp.kind, "points": [complex_pair(z) for z in sp.points]}
    if sp.note:
        out["note"] = sp.note
    return out


def limiting_dict(ld: LimitingDomain) -> dict:
    return {"ell": ld.ell, "matrix": matrix_pairs(ld.matrix)}


def verdict_dict(v: VertexVerdict) -> dict:
    out = {"certified": v.certified, "reason": v.reason}
    if v.det is not None:
        out["det_S"] = complex_pair(v.det)
        out["det_scale"] = v.scale
    if v.limiting is not None:
        out["limiting_domain"] = limiting_dict(v.limiting)
    if v.smatrix is not None:
        out["S"] = matrix_pairs(v.smatrix.matrix)
    return out


def classification_dict(vc: VertexClassification) -> list[dict]:
    return [{"sector": open_sector_dict(s), "spectrum": spectrum_dict(sp)} for s, sp in vc.sectors]


def report_to_dict(rep: AnalysisReport) -> dict:
    return {
        "tool": "conegraph",
        "version": __version__,
        "tolerances": rep.tolerances.as_dict(),
        "sector": {"bisector_deg": _deg(rep.sector.bisector), "half_angle_deg": _deg(rep.sector.half_angle)},
        "verdict": "MinimalGrowthCertified" if rep.certified else "NotCertified",
        "reasons": rep.reasons,
        "edges": [
            {
                "edge": e.edge,
                "elliptic_in_sector": e.ellipticity.passed,
                "witness_s": e.ellipticity.witness,
                "reason": e.ellipticity.reason,
            }
            for e in rep.edges
        ],
        "vertices": [
            {
                "vertex": v.vertex,
                "a0": [complex_pair(a) for a in v.model.a0],
                "background_rays_deg": [_deg(t) for t in v.model.angles],
                "verdict": verdict_dict(v.verdict),
                "sectors": classification_dict(v.classification) if v.classification else None,
            }
            for v in rep.vertices
        ],
    }
