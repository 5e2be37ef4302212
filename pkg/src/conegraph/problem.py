"""JSON problem descriptions and report serialization.

Complex numbers are written as ``[re, im]`` pairs; bare real numbers are
accepted on input. Angles are in degrees in files and radians in code.

    {
      "edges": [{"id": 0, "a": [[1, 0]], "b": [], "c": []}],
      "vertices": [{"id": 0, "endpoints": ["e0-"]}, {"id": 1, "endpoints": ["e0+"]}],
      "couplings": [
        {"vertex": 0, "C": [[[1, 0]]], "Cprime": [[[0, 0]]]},
        {"vertex": 1, "delta": {"nu": [0, 0], "cprime": [[1, 0]]}}
      ],
      "sector": {"bisector_deg": 180, "half_angle_deg": 60}
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coupling import CouplingCondition, GraphCoupling, delta_type
from .errors import ProblemFileError
from .graph import Edge, EndpointId, Graph, Polynomial, Vertex
from .sectors import Sector


@dataclass(frozen=True)
class Problem:
    graph: Graph
    coupling: GraphCoupling
    sector: Sector | None = None


def _complex(value, where: str) -> complex:
    if isinstance(value, bool):
        raise ProblemFileError(f"{where}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        z = complex(value[0], value[1])
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ProblemFileError(f"{where}: non-finite number")
        return z
    raise ProblemFileError(f"{where}: expected a number or [re, im], got {value!r}")


def _vector(value, where: str) -> list[complex]:
    if not isinstance(value, list):
        raise ProblemFileError(f"{where}: expected a list of complex numbers")
    return [_complex(x, f"{where}[{i}]") for i, x in enumerate(value)]


def _matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ProblemFileError(f"{where}: expected a non-empty 2-D array")
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(value)]
    if len({len(r) for r in rows}) != 1:
        raise ProblemFileError(f"{where}: rows have different lengths")
    return np.array(rows, dtype=complex)


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ProblemFileError(f"{where}: expected an object")
    if key not in obj:
        raise ProblemFileError(f"{where}: missing key {key!r}")
    return obj[key]


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(f"{where}: expected an integer, got {value!r}")
    return value


def problem_from_dict(doc: dict) -> Problem:
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be an object")
    edges = []
    for i, e in enumerate(_require(doc, "edges", "document")):
        where = f"edges[{i}]"
        edges.append(
            Edge(
                _int(_require(e, "id", where), f"{where}.id"),
                Polynomial(tuple(_vector(_require(e, "a", where), f"{where}.a"))),
                Polynomial(tuple(_vector(e.get("b", []), f"{where}.b"))),
                Polynomial(tuple(_vector(e.get("c", []), f"{where}.c"))),
            )
        )
    vertices = []
    for i, v in enumerate(_require(doc, "vertices", "document")):
        where = f"vertices[{i}]"
        eps = _require(v, "endpoints", where)
        if not isinstance(eps, list):
            raise ProblemFileError(f"{where}.endpoints: expected a list")
        try:
            endpoints = tuple(EndpointId.parse(str(q)) for q in eps)
        except ValueError as exc:
            raise ProblemFileError(f"{where}.endpoints: {exc}") from None
        vertices.append(Vertex(_int(_require(v, "id", where), f"{where}.id"), endpoints))

    conditions = []
    raw = _require(doc, "couplings", "document")
    if not isinstance(raw, list):
        raise ProblemFileError("couplings: expected a list")
    for i, c in enumerate(raw):
        where = f"couplings[{i}]"
        vid = _int(_require(c, "vertex", where), f"{where}.vertex")
        try:
            if "delta" in c:
                d = c["delta"]
                cprime = _vector(_require(d, "cprime", f"{where}.delta"), f"{where}.delta.cprime")
                nu = _complex(_require(d, "nu", f"{where}.delta"), f"{where}.delta.nu")
                conditions.append(delta_type(len(cprime), nu, cprime, vid))
            else:
                C = _matrix(_require(c, "C", where), f"{where}.C")
                Cp = _matrix(_require(c, "Cprime", where), f"{where}.Cprime")
                conditions.append(CouplingCondition(vid, C, Cp))
        except ProblemFileError:
            raise
        except ValueError as exc:
            raise ProblemFileError(f"{where}: {exc}") from None

    sector = None
    if doc.get("sector") is not None:
        s = doc["sector"]
        try:
            sector = Sector.from_degrees(
                float(_require(s, "bisector_deg", "sector")), float(_require(s, "half_angle_deg", "sector"))
            )
        except (TypeError, ValueError) as exc:
            raise ProblemFileError(f"sector: {exc}") from None
    return Problem(Graph(tuple(edges), tuple(vertices)), GraphCoupling(tuple(conditions)), sector)


def parse_problem(text: str) -> Problem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return problem_from_dict(doc)


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text)


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def matrix_pairs(M: np.ndarray) -> list[list[list[float]]]:
    return [[complex_pair(z) for z in row] for row in np.asarray(M)]


def coupling_to_dict(cc: CouplingCondition) -> dict:
    if cc.delta is not None:
        return {"vertex": cc.vertex, "delta": {"nu": complex_pair(cc.delta.nu), "cprime": [complex_pair(c) for c in cc.delta.cprime]}}
    return {"vertex": cc.vertex, "C": matrix_pairs(cc.C), "Cprime": matrix_pairs(cc.Cprime)}


def problem_to_dict(p: Problem) -> dict:
    doc = {
        "edges": [
            {
                "id": e.id,
                "a": [complex_pair(z) for z in e.a.coeffs],
                "b": [complex_pair(z) for z in e.b.coeffs],
                "c": [complex_pair(z) for z in e.c.coeffs],
            }
            for e in p.graph.edges
        ],
        "vertices": [{"id": v.id, "endpoints": [str(q) for q in v.endpoints]} for v in p.graph.vertices],
        "couplings": [coupling_to_dict(cc) for cc in p.coupling.conditions],
    }
    if p.sector is not None:
        doc["sector"] = {
            "bisector_deg": math.degrees(p.sector.bisector),
            "half_angle_deg": math.degrees(p.sector.half_angle),
        }
    return doc


def dump_problem(p: Problem) -> str:
    return json.dumps(problem_to_dict(p), indent=2)
