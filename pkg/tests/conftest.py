from __future__ import annotations

import math
from pathlib import Path

import pytest

from conegraph.coupling import GraphCoupling, delta_type, dirichlet
from conegraph.graph import Edge, EndpointId, Graph, Polynomial, Vertex

DATA = Path(__file__).parent / "data"


def ep(text: str) -> EndpointId:
    return EndpointId.parse(text)


def dirichlet_edge(a: complex = 1.0) -> tuple[Graph, GraphCoupling]:
    g = Graph((Edge(0, Polynomial((a,))),), (Vertex(0, (ep("e0-"),)), Vertex(1, (ep("e0+"),))))
    return g, GraphCoupling((dirichlet(1, 0), dirichlet(1, 1)))


def two_edge_kirchhoff(a1: complex = 1.0, a2: complex = 2.0) -> tuple[Graph, GraphCoupling]:
    g = Graph(
        (Edge(0, Polynomial((a1,))), Edge(1, Polynomial((a2,)))),
        (Vertex(0, (ep("e0-"),)), Vertex(1, (ep("e0+"), ep("e1-"))), Vertex(2, (ep("e1+"),))),
    )
    gc = GraphCoupling((dirichlet(1, 0), delta_type(2, 0.0, [1.0, 1.0], 1), dirichlet(1, 2)))
    return g, gc


@pytest.fixture
def data_dir() -> Path:
    return DATA


AROUND_PI = (math.pi, math.pi / 3)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
