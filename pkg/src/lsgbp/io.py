"""JSON instance and solution files.

Instance files carry a ``problem`` tag plus problem-specific fields; graphs
are stored as ``n`` and a 0-indexed ``edges`` list. Solution files store
1-based bin indices and the value as a decimal string or ``"worst"``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .adapters import (
    PROBLEM_TYPES,
    ClusterEditingProblem,
    MaxCCutProblem,
    MultiKnapsackProblem,
    NashProblem,
    PiDeletionProblem,
    Problem,
    VBPProblem,
)
from .core import BPartition, ExtValue, UsageError, format_value, parse_value
from .typepart import Graph


class InstanceFormatError(UsageError):
    pass


def _require(data: dict, key: str, kind, path: str = ""):
    where = f"{path}{key}"
    if key not in data:
        raise InstanceFormatError(f"{where}: missing field")
    v = data[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise InstanceFormatError(f"{where}: expected an integer, got {v!r}")
    if kind is list and not isinstance(v, list):
        raise InstanceFormatError(f"{where}: expected an array, got {type(v).__name__}")
    if kind is str and not isinstance(v, str):
        raise InstanceFormatError(f"{where}: expected a string, got {v!r}")
    return v


def _graph(data: dict) -> Graph:
    n = _require(data, "n", int)
    edges = _require(data, "edges", list)
    try:
        return Graph(n, edges)
    except UsageError as e:
        raise InstanceFormatError(str(e)) from None
    except TypeError as e:
        raise InstanceFormatError(f"edges: {e}") from None


def load_instance(data: Any) -> Problem:
    """Build a validated problem object from decoded JSON."""
    if not isinstance(data, dict):
        raise InstanceFormatError("<root>: expected an object")
    tag = _require(data, "problem", str)
    if tag not in PROBLEM_TYPES:
        raise InstanceFormatError(f"problem: unknown tag {tag!r}; known: {sorted(PROBLEM_TYPES)}")
    try:
        if tag == "max-c-cut":
            return MaxCCutProblem(_graph(data), _require(data, "c", int))
        if tag == "cluster-editing":
            return ClusterEditingProblem(_graph(data))
        if tag == "vbp":
            return VBPProblem(
                _require(data, "b", int), _require(data, "d", int),
                _require(data, "vectors", list), _require(data, "bin_weights", list),
            )
        if tag == "multi-knapsack":
            return MultiKnapsackProblem(
                _require(data, "capacities", list), _require(data, "values", list),
                _require(data, "weights", list),
            )
        if tag == "nash":
            return NashProblem(_require(data, "utilities", list))
        return PiDeletionProblem(
            _graph(data), _require(data, "c", int), data.get("predicate", "edgeless")
        )
    except InstanceFormatError:
        raise
    except UsageError as e:
        raise InstanceFormatError(str(e)) from None


def dump_instance(problem: Problem) -> dict:
    tag = problem.tag
    if tag in ("max-c-cut", "cluster-editing", "pi-deletion"):
        out: dict[str, Any] = {"problem": tag, "n": problem.graph.n,
                               "edges": [list(e) for e in problem.graph.edges]}
        if tag != "cluster-editing":
            out["c"] = problem.c
        if tag == "pi-deletion":
            if not isinstance(problem.predicate, str):
                raise UsageError("only named predicates can be serialized")
            out["predicate"] = problem.predicate
        return out
    if tag == "vbp":
        return {"problem": tag, "b": problem.b, "d": problem.d,
                "vectors": [list(v) for v in problem.vectors],
                "bin_weights": [list(w) for w in problem.bin_weights]}
    if tag == "multi-knapsack":
        return {"problem": tag, "capacities": list(problem.capacities),
                "values": [list(r) for r in problem.values],
                "weights": [list(r) for r in problem.weights]}
    return {"problem": tag, "utilities": [list(r) for r in problem.utilities]}


def _read_json(path) -> Any:
    p = Path(path)
    if not p.is_file():
        raise InstanceFormatError(f"{path}: no such file")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"{path}: malformed JSON ({e})") from None


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_instance(path) -> Problem:
    return load_instance(_read_json(path))


def write_instance(problem: Problem, path) -> None:
    Path(path).write_text(_dumps(dump_instance(problem)))


@dataclass
class SolutionFile:
    assign: list[int]
    value: ExtValue | None
    meta: dict = field(default_factory=dict)

    @property
    def partition(self) -> BPartition:
        return BPartition(self.assign)

    def to_dict(self) -> dict:
        out = {"assign": list(self.assign), "meta": dict(self.meta)}
        if self.value is not None:
            out["value"] = format_value(self.value)
        return out

    def dumps(self) -> str:
        return _dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Any) -> "SolutionFile":
        if not isinstance(data, dict):
            raise InstanceFormatError("<root>: expected an object")
        assign = _require(data, "assign", list)
        for i, a in enumerate(assign):
            if isinstance(a, bool) or not isinstance(a, int):
                raise InstanceFormatError(f"assign[{i}]: expected an integer, got {a!r}")
        value = parse_value(str(data["value"])) if "value" in data else None
        meta = data.get("meta", {})
        if not isinstance(meta, dict):
            raise InstanceFormatError("meta: expected an object")
        return cls(list(assign), value, meta)


def read_solution(path) -> SolutionFile:
    return SolutionFile.from_dict(_read_json(path))


def write_solution(sol: SolutionFile, path) -> None:
    Path(path).write_text(sol.dumps())
