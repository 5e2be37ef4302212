"""Command line front end: ``conegraph analyze|spectrum|design|sweep|limit``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import analyze, classify_vertex
from .coupling import GraphCoupling, require_valid
from .errors import ConegraphError, ProblemFileError
from .kappa import vertex_minimal_growth
from .model import design_coupling, model_vertex_data
from .problem import Problem, dump_problem, load_problem
from .report import report_to_dict
from .resolvent import decay_verdict, discretize, sweep_ray
from .sectors import Sector
from .tolerances import DEFAULT_TOLERANCES, Tolerances

EXIT_OK = 0
EXIT_NOT_CERTIFIED = 1
EXIT_INPUT = 2


def _tolerances(args) -> Tolerances:
    return DEFAULT_TOLERANCES.with_overrides(
        det=args.tol_det, rank=args.tol_rank, samples_per_sector=args.samples_per_sector
    )


def _sector(args, problem: Problem) -> Sector:
    base = problem.sector
    bis = getattr(args, "bisector_deg", None)
    half = getattr(args, "half_angle_deg", None)
    if base is None and (bis is None or half is None):
        raise ProblemFileError("no sector in the problem file; pass --bisector-deg and --half-angle-deg")
    if bis is None:
        bis = math.degrees(base.bisector)
    if half is None:
        half = math.degrees(base.half_angle)
    return Sector.from_degrees(bis, half)


def _fmt(z: complex) -> str:
    z = complex(z) + 0.0  # drop negative zeros
    return f"{z.real:.10g}{z.imag:+.10g}j"


def _print_matrix(M: np.ndarray, out) -> None:
    for row in np.asarray(M):
        print("  [" + ", ".join(_fmt(z) for z in row) + "]", file=out)


def _vertex_id(args, problem: Problem) -> int:
    if args.vertex is not None:
        return args.vertex
    if len(problem.graph.vertices) == 1:
        return problem.graph.vertices[0].id
    raise ProblemFileError("--vertex is required when the graph has more than one vertex")


def cmd_analyze(args) -> int:
    tol = _tolerances(args)
    problem = load_problem(args.path)
    sector = _sector(args, problem)
    rep = analyze(problem.graph, problem.coupling, sector, tol, classify=not args.no_classify)
    text = json.dumps(report_to_dict(rep), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    for reason in rep.reasons:
        print(f"not certified: {reason}", file=sys.stderr)
    return EXIT_OK if rep.certified else EXIT_NOT_CERTIFIED


def cmd_spectrum(args) -> int:
    tol = _tolerances(args)
    problem = load_problem(args.path)
    require_valid(problem.graph, problem.coupling, tol)
    ids = [args.vertex] if args.vertex is not None else [v.id for v in problem.graph.vertices]
    print("vertex,sector,low_deg,high_deg,verdict,points")
    for vid in ids:
        v = model_vertex_data(problem.graph, vid, tol)
        vc = classify_vertex(v, problem.coupling.at(vid), tol)
        for s, sp in vc.sectors:
            low, high = s.as_degrees()
            pts = " ".join(_fmt(z) for z in sp.points)
            print(f"{vid},{s.index},{low:.6f},{high:.6f},{sp.kind},{pts}")
    return EXIT_OK


def _parse_sectors(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise ProblemFileError(f"--sectors expects a comma separated list of integers, got {text!r}") from None


def cmd_design(args) -> int:
    tol = _tolerances(args)
    problem = load_problem(args.path)
    require_valid(problem.graph, problem.coupling, tol)
    vid = _vertex_id(args, problem)
    v = model_vertex_data(problem.graph, vid, tol)
    target = _parse_sectors(args.sectors)
    cc = design_coupling(v, target, tol)
    print(f"vertex {vid}: target sectors {target or 'none'}")
    if cc.delta is not None:
        print(f"nu = {_fmt(cc.delta.nu)}")
        print("cprime = [" + ", ".join(_fmt(c) for c in cc.delta.cprime) + "]")
    print("C =")
    _print_matrix(cc.C, sys.stdout)
    print("Cprime =")
    _print_matrix(cc.Cprime, sys.stdout)
    if args.write:
        patched = replace(problem, coupling=problem.coupling.replace(cc))
        Path(args.write).write_text(dump_problem(patched) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_sweep(args) -> int:
    tol = _tolerances(args)
    problem = load_problem(args.path)
    d = discretize(problem.graph, problem.coupling, args.n, tol)
    r = np.logspace(math.log10(args.rmin), math.log10(args.rmax), args.points)
    sr = sweep_ray(d, math.radians(args.theta), r)
    verdict = decay_verdict(sr)
    line = f"verdict={verdict.verdict.value} slope={verdict.slope:.4f} spread={verdict.spread:.4g}"
    if args.out:
        Path(args.out).write_text(sr.to_csv(), encoding="utf-8")
        print(line)
    else:
        sys.stdout.write(sr.to_csv())
        print(line, file=sys.stderr)
    return EXIT_OK


def cmd_limit(args) -> int:
    tol = _tolerances(args)
    problem = load_problem(args.path)
    require_valid(problem.graph, problem.coupling, tol)
    sector = _sector(args, problem)
    vid = _vertex_id(args, problem)
    v = model_vertex_data(problem.graph, vid, tol)
    verdict = vertex_minimal_growth(problem.coupling.at(vid), v, sector, tol)
    ld = verdict.limiting
    print(f"vertex {vid}: limiting domain, {ld.ell} scaled rows")
    _print_matrix(ld.matrix, sys.stdout)
    if verdict.smatrix is not None:
        print("S =")
        _print_matrix(verdict.smatrix.matrix, sys.stdout)
        print(f"det S = {_fmt(verdict.det)}  (scale {verdict.scale:.6g})")
    print("certified" if verdict.certified else f"not certified: {verdict.reason}")
    return EXIT_OK if verdict.certified else EXIT_NOT_CERTIFIED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-det", type=float, default=None, help="relative determinant threshold")
    common.add_argument("--tol-rank", type=float, default=None, help="relative rank threshold")
    common.add_argument("--samples-per-sector", type=int, default=None)

    sector = argparse.ArgumentParser(add_help=False)
    sector.add_argument("--bisector-deg", type=float, default=None, help="override the file's sector bisector")
    sector.add_argument("--half-angle-deg", type=float, default=None, help="override the file's half angle")

    p = argparse.ArgumentParser(prog="conegraph", description=__doc__)
    p.add_argument("--version", action="version", version=f"conegraph {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common, sector], help="decide minimal growth on a sector")
    a.add_argument("path")
    a.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    a.add_argument("--no-classify", action="store_true", help="skip the per-sector spectrum table")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("spectrum", parents=[common], help="classify the model spectrum per sector")
    s.add_argument("path")
    s.add_argument("--vertex", type=int, default=None)
    s.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("design", parents=[common], help="build a coupling with eigenvalues on chosen sectors")
    d.add_argument("path")
    d.add_argument("--vertex", type=int, default=None)
    d.add_argument("--sectors", default="", help="1-based sector numbers, e.g. 1,3")
    d.add_argument("--write", default=None, help="write the patched problem file here")
    d.set_defaults(func=cmd_design)

    w = sub.add_parser("sweep", parents=[common], help="resolvent norm along a ray")
    w.add_argument("path")
    w.add_argument("--theta", type=float, required=True, help="ray angle in degrees")
    w.add_argument("--rmin", type=float, default=10.0)
    w.add_argument("--rmax", type=float, default=1e4)
    w.add_argument("--points", type=int, default=25)
    w.add_argument("--n", type=int, default=256, help="grid points per edge")
    w.add_argument("--out", default=None, help="write the CSV here")
    w.set_defaults(func=cmd_sweep)

    m = sub.add_parser("limit", parents=[common, sector], help="limiting domain and S-matrix at a vertex")
    m.add_argument("path")
    m.add_argument("--vertex", type=int, default=None)
    m.set_defaults(func=cmd_limit)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConegraphError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
