"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

from __future__ import annotations

import cmath
import math
import time
from itertools import combinations

import numpy as np

from conegraph.analysis import analyze, candidate_eigenvalues, classify_sector, polish_eigenvalue
from conegraph.coupling import CouplingCondition, GraphCoupling, delta_type, dirichlet, kirchhoff
from conegraph.graph import Edge, Graph, Polynomial, Vertex
from conegraph.kappa import grassmann_distance, kappa_act, kappa_homogeneity_residual, limiting_domain
from conegraph.model import (
    Membership,
    ModelVertexData,
    bgres_sectors,
    design_coupling,
    epsilon_matrix,
    on_background_ray,
    principal_root,
    sector_branch,
    sector_of,
    spectrum_membership,
)
from conegraph.resolvent import Decay, decay_verdict, discretize, sweep_ray, truncated_model_eigenvalues
from conegraph.sectors import Sector, angular_distance

from conftest import ACCEPTANCE_LINES, dirichlet_edge, ep, two_edge_kirchhoff

mvd = ModelVertexData.from_coefficients
AROUND_PI = Sector(math.pi, math.pi / 3)


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_unit(rng) -> complex:
    return cmath.exp(1j * rng.uniform(0, 2 * math.pi))


def off_ray_lambda(rng, a0, margin=0.05) -> complex:
    while True:
        lam = 10 ** rng.uniform(-2, 2) * random_unit(rng)
        if all(angular_distance(lam, a) > margin for a in a0):
            return lam


def test_criterion_1_kirchhoff_emptiness():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        k = int(rng.integers(1, 6))
        a0 = [rng.uniform(0.5, 2.0) * random_unit(rng) for _ in range(k)]
        v = mvd(a0)
        lam = off_ray_lambda(rng, a0, 1e-3)
        if spectrum_membership(v, kirchhoff(k), lam) is not Membership.RESOLVENT:
            bad += 1
    dt = time.perf_counter() - t0
    report(1, "Kirchhoff emptiness", bad == 0 and dt < 1.0, f"{bad} of 100 not Resolvent, {dt:.2f}s")


def test_criterion_2_delta_point_spectrum():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    failures = 0
    for _ in range(50):
        k = int(rng.integers(1, 6))
        a0 = [rng.uniform(0.5, 2.0) * random_unit(rng) for _ in range(k)]
        v = mvd(a0)
        lam_star = off_ray_lambda(rng, a0)
        cprime = rng.normal(size=k) + 1j * rng.normal(size=k)
        nu = complex(sum(c * principal_root(lam_star, a) for c, a in zip(cprime, a0)))
        sec = sector_of(v, lam_star)
        # sector branch: sum_j c'_j sqrt(-lam/a_j) = w(-lam) * sum_j c'_j / sqrt(a_j)
        br = sector_branch(v, sec)
        S = complex(np.sum(cprime / br.sqrt_a))
        lam_p = -nu**2 / S**2
        # general path: no delta metadata, so pencil roots plus Newton polishing
        cc = delta_type(k, nu, cprime)
        plain = CouplingCondition(0, cc.C, cc.Cprime)
        polished, ok = polish_eigenvalue(v, plain, lam_p * (1 + 0.01 * random_unit(rng)))
        sp = classify_sector(v, plain, sec)
        found = [p for p in sp.points if abs(p - lam_p) <= 1e-9 * abs(lam_p)]
        err = abs(polished - lam_p) / abs(lam_p)
        worst = max(worst, err)
        member = spectrum_membership(v, cc, lam_p)
        if not ok or err > 1e-9 or not found or member is not Membership.EIGENVALUE:
            failures += 1
    dt = time.perf_counter() - t0
    report(2, "delta-type point spectrum", failures == 0 and dt < 5.0,
           f"{failures} of 50 failed, worst relative error {worst:.1e}, {dt:.2f}s")


def test_criterion_3_epsilon_pattern():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    bad = 0
    trials = 0
    for n in range(2, 7):
        for _ in range(20):
            angles = np.sort(rng.uniform(0, 2 * math.pi, n))
            if np.min(np.diff(np.append(angles, angles[0] + 2 * math.pi))) < 1e-6:
                continue
            v = mvd([rng.uniform(0.5, 2.0) * cmath.exp(1j * t) for t in angles])
            want = np.where(np.arange(n)[:, None] >= np.arange(n)[None, :], 1, -1)
            trials += 1
            if not np.array_equal(epsilon_matrix(v), want):
                bad += 1
    dt = time.perf_counter() - t0
    report(3, "epsilon pattern", bad == 0 and dt < 1.0, f"{bad} of {trials} mismatched, {dt:.2f}s")


def test_criterion_4_sector_placement():
    t0 = time.perf_counter()
    v = mvd([1, 1j, -1])
    mismatches = []
    subsets = [set(c) for m in range(3) for c in combinations((1, 2, 3), m)]
    for target in subsets:
        cc = design_coupling(v, target)
        for sec in bgres_sectors(v):
            want = Membership.EIGENVALUE if sec.index in target else Membership.RESOLVENT
            got = {spectrum_membership(v, cc, lam) for lam in sec.sample(15)}
            if got != {want}:
                mismatches.append((sorted(target), sec.index))
    dt = time.perf_counter() - t0
    report(4, "sector placement", not mismatches and dt < 5.0,
           f"{len(subsets)} targets, mismatches {mismatches}, {dt:.2f}s")


def test_criterion_5_limiting_domain_convergence():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    bad = 0
    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(1, 6))
        r = int(rng.integers(0, k + 1))
        C = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        Cp = (rng.normal(size=(k, r)) + 1j * rng.normal(size=(k, r))) @ (rng.normal(size=(r, k)) + 1j * rng.normal(size=(r, k)))
        cc = CouplingCondition(0, C, Cp)
        lim = limiting_domain(cc).as_coupling()
        d = [grassmann_distance(kappa_act(cc, rho), lim) for rho in (1e-2, 1e-4, 1e-6, 1e-8)]
        worst = max(worst, d[-1])
        if not (d[-1] < 1e-6 and all(b <= a for a, b in zip(d, d[1:]))):
            bad += 1
    dt = time.perf_counter() - t0
    report(5, "limiting-domain convergence", bad == 0 and dt < 5.0,
           f"{bad} of 100 failed, worst distance at 1e-8 {worst:.1e}, {dt:.2f}s")


def test_criterion_6_kappa_homogeneity():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        a = rng.uniform(0.5, 2.0) * random_unit(rng)
        x = rng.uniform(0, 5)
        rho = 10 ** rng.uniform(-3, 3)
        lam = 10 ** rng.uniform(-2, 2) * random_unit(rng)
        mu = complex(rng.uniform(0.1, 3), rng.uniform(-3, 3))
        worst = max(worst, kappa_homogeneity_residual(a, lam, mu, rho, x))
    dt = time.perf_counter() - t0
    report(6, "kappa homogeneity", worst <= 1e-12 and dt < 1.0, f"worst residual {worst:.1e}, {dt:.2f}s")


def test_criterion_7_truncated_model_eigenvalue():
    t0 = time.perf_counter()
    v = mvd([1])
    cc = CouplingCondition(0, np.array([[1]], complex), np.array([[1]], complex))
    e1 = abs(truncated_model_eigenvalues(v, cc, 40.0, 4000, near=-0.9)[0] + 1)
    e2 = abs(truncated_model_eigenvalues(v, cc, 40.0, 8000, near=-0.9)[0] + 1)
    dt = time.perf_counter() - t0
    ratio = e1 / e2
    report(7, "truncated model eigenvalue", e1 < 1e-3 and ratio >= 3 and dt < 30,
           f"error {e1:.2e} at n=4000, {e2:.2e} at n=8000, ratio {ratio:.2f}, {dt:.2f}s")


def test_criterion_8_graph_level_decay():
    t0 = time.perf_counter()
    r = np.logspace(1, 4, 25)
    g, gc = dirichlet_edge()
    certified = analyze(g, gc, AROUND_PI, classify=False).certified
    d = discretize(g, gc, 256)
    neg = sweep_ray(d, math.pi, r)
    scaled = [p.scaled for p in neg.points]
    in_band = all(0.5 <= s <= 2.0 for s in scaled)
    pos = decay_verdict(sweep_ray(d, 0.0, r)).verdict
    g2, gc2 = two_edge_kirchhoff(1.0, 2.0)
    certified2 = analyze(g2, gc2, AROUND_PI, classify=False).certified
    two = decay_verdict(sweep_ray(discretize(g2, gc2, 256), AROUND_PI.bisector, r)).verdict
    dt = time.perf_counter() - t0
    ok = certified and in_band and pos is Decay.NO_DECAY and certified2 and two is Decay.DECAY and dt < 120
    report(8, "graph-level decay", ok,
           f"Dirichlet certified={certified}, r|R| in [{min(scaled):.3f}, {max(scaled):.3f}], theta=0 {pos.value}, "
           f"two-edge certified={certified2}, bisector {two.value}, {dt:.1f}s")


def random_star(rng, k):
    a = [rng.uniform(0.5, 2.0) * cmath.exp(1j * rng.uniform(-1.2, 1.2)) for _ in range(k)]
    edges = tuple(Edge(i, Polynomial((a[i],))) for i in range(k))
    centre = Vertex(0, tuple(ep(f"e{i}-") for i in range(k)))
    outer = tuple(Vertex(i + 1, (ep(f"e{i}+"),)) for i in range(k))
    C = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    Cp = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    if rng.uniform() < 0.3:
        Cp[:, 0] = 0  # rank-deficient C' exercises the mixed limiting domain
    conds = (CouplingCondition(0, C, Cp),) + tuple(dirichlet(1, i + 1) for i in range(k))
    return Graph(edges, (centre,) + outer), GraphCoupling(conds)


def test_criterion_9_invariance():
    rng = np.random.default_rng(9)
    t0 = time.perf_counter()
    changes = []
    certified_count = 0
    for trial in range(40):
        k = int(rng.integers(1, 5))
        g, gc = random_star(rng, k)
        # half the sectors sit opposite the coefficients, the rest anywhere
        centre_angle = math.pi + rng.uniform(-0.3, 0.3) if trial % 2 else rng.uniform(0, 2 * math.pi)
        sector = Sector(centre_angle, rng.uniform(0.2, 1.4))
        base = analyze(g, gc, sector, classify=False).certified
        certified_count += base
        # left GL action on every vertex condition
        gl = GraphCoupling(
            tuple(c.left_multiply(rng.normal(size=(c.k, c.k)) + 1j * rng.normal(size=(c.k, c.k))) for c in gc.conditions)
        )
        if analyze(g, gl, sector, classify=False).certified != base:
            changes.append((trial, "GL"))
        # endpoint permutation at the centre with matching column permutation
        order = list(rng.permutation(k))
        centre = g.vertex(0)
        pg = Graph(g.edges, (Vertex(0, tuple(centre.endpoints[i] for i in order)),) + g.vertices[1:])
        pgc = gc.replace(gc.at(0).permute(order))
        if analyze(pg, pgc, sector, classify=False).certified != base:
            changes.append((trial, "permutation"))
        # closed subsectors of a certified sector stay certified
        if base:
            for f in (0.9, 0.5, 0.1):
                if not analyze(g, gc, sector.shrink(f), classify=False).certified:
                    changes.append((trial, f"shrink {f}"))
    dt = time.perf_counter() - t0
    report(9, "invariance suite", not changes and 0 < certified_count < 40 and dt < 10,
           f"40 graphs, {certified_count} certified, changes {changes}, {dt:.2f}s")
