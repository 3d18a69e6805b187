"""Exact solvers for orientation, flow and domination problems on graphs of bounded treebreadth.

The main entry points are :func:`solve_oro` and :func:`solve_family` for
orientation and flow problems, :func:`solve_crbds` and :func:`solve_cds`
for capacitated domination, and :func:`morphism_to_tree_partition` for
turning a finite harmonic morphism into a tree partition.
"""
from .crbds import CrbdsResult, solve_cds, solve_crbds
from .graphs import (
    Arc,
    Edge,
    FlowNetwork,
    Multigraph,
    WeightedGraph,
    check_flow,
    max_flow,
    multigraph_to_weighted,
    weighted_outdegrees,
    weighted_to_multigraph,
)
from .ilp import IlpModel, IlpResult, ResourceLimitError, solve_ilp
from .oro import FamilyResult, InvariantViolation, OroResult, solve_family, solve_oro
from .problems import (
    AonfInstance,
    CdsInstance,
    CmoInstance,
    CoInstance,
    CrbdsInstance,
    DominationWitness,
    MmoInstance,
    OroInstance,
    TooInstance,
    UflbInstance,
    UflbWitness,
    witness_violations,
)
from .trees import (
    HarmonicMorphism,
    PathDecomposition,
    TreePartition,
    morphism_to_tree_partition,
    validate_harmonic_morphism,
    validate_path_decomposition,
    validate_tree_partition,
)

__all__ = [
    "CrbdsResult",
    "solve_cds",
    "solve_crbds",
    "Arc",
    "Edge",
    "FlowNetwork",
    "Multigraph",
    "WeightedGraph",
    "check_flow",
    "max_flow",
    "multigraph_to_weighted",
    "weighted_outdegrees",
    "weighted_to_multigraph",
    "IlpModel",
    "IlpResult",
    "ResourceLimitError",
    "solve_ilp",
    "FamilyResult",
    "InvariantViolation",
    "OroResult",
    "solve_family",
    "solve_oro",
    "AonfInstance",
    "CdsInstance",
    "CmoInstance",
    "CoInstance",
    "CrbdsInstance",
    "DominationWitness",
    "MmoInstance",
    "OroInstance",
    "TooInstance",
    "UflbInstance",
    "UflbWitness",
    "witness_violations",
    "HarmonicMorphism",
    "PathDecomposition",
    "TreePartition",
    "morphism_to_tree_partition",
    "validate_harmonic_morphism",
    "validate_path_decomposition",
    "validate_tree_partition",
]

__version__ = "0.1.0"
