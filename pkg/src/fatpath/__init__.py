"""Hamiltonicity and Long Path solvers for fat-object intersection graphs."""

from .certificates import Certificate
from .geometry import (
    GeometricInstance,
    generate_instance,
    intersection_graph,
)
from .graphs import Graph, read_graph, write_graph
from .hamilton import solve_hamiltonian_cycle, solve_hamiltonian_path
from .longpath import solve_long_path
from .partition import Partition, SolverConfig, kappa_partition, refine_to_linked
from .treewidth import TreeDecomposition, heuristic_decomposition

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "GeometricInstance",
    "Graph",
    "Partition",
    "SolverConfig",
    "TreeDecomposition",
    "generate_instance",
    "heuristic_decomposition",
    "intersection_graph",
    "kappa_partition",
    "read_graph",
    "refine_to_linked",
    "solve_hamiltonian_cycle",
    "solve_hamiltonian_path",
    "solve_long_path",
    "write_graph",
]
