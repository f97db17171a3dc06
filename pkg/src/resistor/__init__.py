"""Effective resistance (resistance distance) on weighted graphs, computed many independent ways."""

from .graph import (
    EXACT,
    FLOAT,
    DisconnectedError,
    GraphError,
    ModeError,
    WeightedMultigraph,
    build_laplacian,
    check_connected,
    contract_pair,
    read_edge_list,
    write_edge_list,
)
from .report import ResistanceReport
from .linalg import resistance_matrix, resistance_pseudoinverse
from .backends import BACKENDS, compare, compute
from .estimators import ResistanceDistance, SketchResistance, SpectralResistance, CommuteTimeResistance

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "CommuteTimeResistance",
    "ResistanceDistance",
    "SketchResistance",
    "SpectralResistance",
    "compare",
    "compute",
    "resistance_matrix",
    "resistance_pseudoinverse",
    "EXACT",
    "FLOAT",
    "DisconnectedError",
    "GraphError",
    "ModeError",
    "ResistanceReport",
    "WeightedMultigraph",
    "build_laplacian",
    "check_connected",
    "contract_pair",
    "read_edge_list",
    "write_edge_list",
]
