"""Parameterized k-flip local search for generalized bin problems."""
from .core import (
    WORST,
    AggSpec,
    BPartition,
    Direction,
    ExtValue,
    Instance,
    Op,
    TypePartition,
    UsageError,
    better,
    flip_distance,
    flip_set,
    target_value,
)
from .adapters import (
    ClusterEditingProblem,
    MaxCCutProblem,
    MultiKnapsackProblem,
    NashProblem,
    PiDeletionProblem,
    VBPProblem,
    initial_solution,
)
from .dp import SearchResult, Strategy, best_improving_flip, enumerate_deltas
from .driver import RunTrace, run_local_search
from .oracle import OracleBudget, brute_force_best_flip, exhaustive_optimum
from .typepart import Graph, dedup_partition, neighborhood_classes, verify_target_equivalence

__all__ = [
    "ClusterEditingProblem", "MaxCCutProblem", "MultiKnapsackProblem", "NashProblem",
    "PiDeletionProblem", "VBPProblem", "initial_solution",
    "WORST", "AggSpec", "BPartition", "Direction", "ExtValue", "Instance", "Op",
    "TypePartition", "UsageError", "better", "flip_distance", "flip_set", "target_value",
    "SearchResult", "Strategy", "best_improving_flip", "enumerate_deltas",
    "RunTrace", "run_local_search", "OracleBudget", "brute_force_best_flip",
    "exhaustive_optimum", "Graph", "dedup_partition", "neighborhood_classes",
    "verify_target_equivalence",
]
