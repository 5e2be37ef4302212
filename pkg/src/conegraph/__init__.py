"""Sectors of minimal growth for second-order regular singular operators on metric graphs."""

__version__ = "0.1.0"

from .analysis import AnalysisReport, analyze, classify_sectors
from .coupling import CouplingCondition, GraphCoupling, delta_type, dirichlet, kirchhoff
from .graph import Edge, EndpointId, Graph, Polynomial, Side, Vertex
from .kappa import limiting_domain, vertex_minimal_growth
from .model import ModelVertexData, design_coupling, epsilon_matrix, spectrum_membership
from .problem import Problem, load_problem, parse_problem
from .resolvent import decay_verdict, discretize, sweep_ray
from .sectors import OpenSector, Sector
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    "AnalysisReport",
    "CouplingCondition",
    "DEFAULT_TOLERANCES",
    "Edge",
    "EndpointId",
    "Graph",
    "GraphCoupling",
    "ModelVertexData",
    "OpenSector",
    "Polynomial",
    "Problem",
    "Sector",
    "Side",
    "Tolerances",
    "Vertex",
    "analyze",
    "classify_sectors",
    "decay_verdict",
    "delta_type",
    "design_coupling",
    "dirichlet",
    "discretize",
    "epsilon_matrix",
    "kirchhoff",
    "limiting_domain",
    "load_problem",
    "parse_problem",
    "spectrum_membership",
    "sweep_ray",
    "vertex_minimal_growth",
]
