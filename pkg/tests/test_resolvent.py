from __future__ import annotations

import math

import numpy as np
import pytest

from conegraph.coupling import CouplingCondition, GraphCoupling, delta_type, dirichlet, kirchhoff
from conegraph.errors import SingularPotentialUnsupported, TooFewSamples
from conegraph.graph import Edge, Graph, Polynomial, Vertex
from conegraph.model import ModelVertexData
from conegraph.resolvent import (
    Decay,
    SweepPoint,
    SweepResult,
    decay_verdict,
    discretize,
    off_ray_eigenvalues,
    sweep_ray,
    truncated_model_eigenvalues,
)

from conftest import dirichlet_edge, ep, two_edge_kirchhoff

mvd = ModelVertexData.from_coefficients


def test_discretization_bookkeeping():
    g, gc = dirichlet_edge()
    d = discretize(g, gc, 128)
    assert d.interior.shape == (126, 128)
    assert d.constraints.shape == (2, 128)
    g, gc = two_edge_kirchhoff()
    d = discretize(g, gc, 64)
    assert d.interior.shape == (124, 128)
    assert d.constraints.shape == (4, 128)


def test_coulomb_term_rejected():
    g = Graph((Edge(0, Polynomial((1,)), c=Polynomial((1,))),), (Vertex(0, (ep("e0-"),)), Vertex(1, (ep("e0+"),))))
    gc = GraphCoupling((dirichlet(1, 0), dirichlet(1, 1)))
    with pytest.raises(SingularPotentialUnsupported):
        discretize(g, gc, 64)


def test_dirichlet_eigenvalues():
    g, gc = dirichlet_edge()
    ev = np.sort(discretize(g, gc, 256).eigenvalues().real)
    exact = (np.arange(1, 4) * math.pi / 2) ** 2
    assert ev[:3] == pytest.approx(exact, rel=1e-3)


def test_sweep_negative_axis_selfadjoint_bound():
    g, gc = dirichlet_edge()
    d = discretize(g, gc, 256)
    sr = sweep_ray(d, math.pi, [10.0, 100.0, 1000.0], refine=False)
    for p in sr.points:
        # selfadjoint: |R| = 1 / dist(-r, spectrum), so r |R| = r / (r + pi^2 / 4)
        assert p.scaled == pytest.approx(p.r / (p.r + (math.pi / 2) ** 2), rel=1e-3)
        if p.r >= 100:
            assert 0.9 <= p.scaled <= 1.1


def test_sweep_positive_axis_between_eigenvalues():
    g, gc = dirichlet_edge()
    d = discretize(g, gc, 256)
    ev = np.sort(d.eigenvalues().real)
    r = 0.5 * (ev[3] + ev[4])
    (p,) = sweep_ray(d, 0.0, [r], refine=False).points
    assert p.sigma_min == pytest.approx(0.5 * (ev[4] - ev[3]), rel=1e-6)


def test_sigma_min_vanishes_at_discrete_eigenvalue():
    g, gc = dirichlet_edge()
    d = discretize(g, gc, 128)
    lam = np.sort(d.eigenvalues().real)[2]
    assert d.sigma_min(lam) < 1e-8 * max(1.0, lam)


def test_decay_verdicts():
    g, gc = dirichlet_edge()
    d = discretize(g, gc, 256)
    r = np.logspace(1, 4, 13)
    assert decay_verdict(sweep_ray(d, math.pi, r)).verdict is Decay.DECAY
    assert decay_verdict(sweep_ray(d, 0.0, r)).verdict is Decay.NO_DECAY


def test_too_few_samples():
    with pytest.raises(TooFewSamples):
        decay_verdict(SweepResult(math.pi, (SweepPoint(10.0, -10.0, 10.0),)))


def test_csv_columns():
    g, gc = dirichlet_edge()
    text = sweep_ray(discretize(g, gc, 32), math.pi, [10.0, 20.0]).to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "r,re_lambda,im_lambda,sigma_min,r_times_resnorm"
    assert len(lines) == 3


def test_truncated_model_robin_eigenvalue():
    v = mvd([1])
    cc = CouplingCondition(0, np.array([[1]], complex), np.array([[1]], complex))
    vals = truncated_model_eigenvalues(v, cc, 40.0, 4000, near=-0.9)
    assert abs(vals[0] + 1) < 1e-3


def test_truncated_model_kirchhoff_has_no_off_ray_eigenvalue():
    v = mvd([1, 1])
    vals = truncated_model_eigenvalues(v, kirchhoff(2), 40.0, 400)
    assert off_ray_eigenvalues(v, vals).size == 0


def test_truncated_model_delta_point():
    v = mvd([1, 1])
    vals = truncated_model_eigenvalues(v, delta_type(2, 2.0, [1.0, 1.0]), 40.0, 2000, near=-0.9)
    assert abs(vals[0] + 1) < 1e-3
