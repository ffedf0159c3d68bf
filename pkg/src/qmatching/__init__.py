"""Maximum matching in the adjacency-matrix and adjacency-list query models."""

from .experiments import ExperimentConfig, ScalingFit, fit_scaling, generate_graph, run_experiment
from .graph import Graph, augment, edge, is_augmenting_path, symmetric_difference, validate_matching
from .guessing import InstrumentationReport, quantum_bound
from .matcher import MatchResult, maximum_matching
from .oracle import LIST, MATRIX, ListOracle, MatrixOracle, build_oracle
from .phase1 import run_phase1
from .phase2 import run_phase2
from .reference import brute_force_max_matching, check_sap_set, shortest_aug_path_length

__all__ = [
    "LIST",
    "MATRIX",
    "ExperimentConfig",
    "Graph",
    "InstrumentationReport",
    "ListOracle",
    "MatchResult",
    "MatrixOracle",
    "ScalingFit",
    "augment",
    "brute_force_max_matching",
    "build_oracle",
    "check_sap_set",
    "edge",
    "fit_scaling",
    "generate_graph",
    "is_augmenting_path",
    "maximum_matching",
    "quantum_bound",
    "run_experiment",
    "run_phase1",
    "run_phase2",
    "shortest_aug_path_length",
    "symmetric_difference",
    "validate_matching",
]
