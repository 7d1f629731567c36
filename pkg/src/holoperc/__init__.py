"""Holonomy decomposition of non-monotone bootstrap percolation with forced inputs."""

from .analysis import ComplexityReport, complexity_report, limit_cycles, sweep
from .holonomy import Skeleton, build_skeleton, decompose, skeleton_to_dot
from .netmodel import Graph, PercParams, Scenario, Transformation, build_generators, build_t

__version__ = "0.1.0"

__all__ = [
    "ComplexityReport", "Graph", "PercParams", "Scenario", "Skeleton", "Transformation",
    "build_generators", "build_skeleton", "build_t", "complexity_report", "decompose",
    "limit_cycles", "skeleton_to_dot", "sweep",
]
