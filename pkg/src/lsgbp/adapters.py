"""Problem adapters: each problem becomes an :class:`Instance` with an IBE,
an aggregation spec and a type partition.

Every problem also carries an ``objective`` that recomputes the problem's
own score straight from its definition, without going through the IBE.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from .core import (
    WORST,
    AggSpec,
    BPartition,
    Direction,
    ExtValue,
    Instance,
    Op,
    UsageError,
    better,
)
from .typepart import Graph, dedup_partition, neighborhood_classes


def _check_nonneg_int(path: str, v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise UsageError(f"{path}: expected an integer, got {v!r}")
    if v < 0:
        raise UsageError(f"{path}: must be non-negative, got {v}")
    return v


def _int_matrix(path: str, rows, width: int | None = None) -> tuple[tuple[int, ...], ...]:
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, (list, tuple)):
            raise UsageError(f"{path}[{r}]: expected an array")
        if width is not None and len(row) != width:
            raise UsageError(f"{path}[{r}]: expected {width} entries, got {len(row)}")
        out.append(tuple(_check_nonneg_int(f"{path}[{r}][{c}]", v) for c, v in enumerate(row)))
    return tuple(out)


# --- Max c-Cut ---------------------------------------------------------------

@dataclass(frozen=True)
class MaxCCutProblem:
    graph: Graph
    c: int = 2
    tag = "max-c-cut"

    def __post_init__(self):
        if isinstance(self.c, bool) or not isinstance(self.c, int) or self.c < 2:
            raise UsageError(f"c: color count must be an integer >= 2, got {self.c!r}")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def b(self) -> int:
        return self.c

    def build(self) -> Instance:
        g = self.graph
        return Instance(
            n=g.n, b=self.c, agg=AggSpec(Op.SUM, Direction.MINIMIZE),
            ibe=lambda i, s: g.edges_within(s),
            types=neighborhood_classes(g), name=self.tag,
        )

    def objective(self, f: BPartition) -> ExtValue:
        """faults = |E| - properly colored edges."""
        f.validate(self.n, self.b)
        proper = sum(1 for u, v in self.graph.edges if f[u] != f[v])
        return self.graph.m - proper


# --- Cluster Editing ---------------------------------------------------------

@dataclass(frozen=True)
class ClusterEditingProblem:
    graph: Graph
    tag = "cluster-editing"

    def __post_init__(self):
        if self.graph.n < 1:
            raise UsageError("graph: cluster editing needs at least one vertex")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def b(self) -> int:
        return self.graph.n

    def build(self) -> Instance:
        g = self.graph

        def phi(i, s):
            e = g.edges_within(s)
            return e - (math.comb(len(s), 2) - e)

        return Instance(
            n=g.n, b=g.n, agg=AggSpec(Op.SUM, Direction.MAXIMIZE), ibe=phi,
            types=neighborhood_classes(g), name=self.tag,
        )

    def objective(self, f: BPartition) -> ExtValue:
        """+1 for every co-clustered adjacent pair, -1 for every co-clustered non-adjacent pair."""
        f.validate(self.n, self.b)
        score = 0
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if f[u] == f[v]:
                    score += 1 if self.graph.has_edge(u, v) else -1
        return score


# --- Vector Bin Packing ------------------------------------------------------

@dataclass(frozen=True)
class VBPProblem:
    b: int
    d: int
    vectors: tuple[tuple[int, ...], ...]
    bin_weights: tuple[tuple[int, ...], ...]
    tag = "vbp"

    def __post_init__(self):
        _check_nonneg_int("d", self.d)
        if isinstance(self.b, bool) or not isinstance(self.b, int) or self.b < 1:
            raise UsageError(f"b: bin count must be an integer >= 1, got {self.b!r}")
        object.__setattr__(self, "vectors", _int_matrix("vectors", self.vectors, self.d))
        object.__setattr__(self, "bin_weights", _int_matrix("bin_weights", self.bin_weights, self.d))
        if len(self.bin_weights) != self.b:
            raise UsageError(f"bin_weights: expected {self.b} weight vectors, got {len(self.bin_weights)}")

    @property
    def n(self) -> int:
        return len(self.vectors)

    def overload(self, i: int, items) -> int:
        w = self.bin_weights[i - 1]
        total = [0] * self.d
        for x in items:
            for j, v in enumerate(self.vectors[x]):
                total[j] += v
        return sum(max(0, t - wj) for t, wj in zip(total, w))

    def build(self) -> Instance:
        return Instance(
            n=self.n, b=self.b, agg=AggSpec(Op.SUM, Direction.MINIMIZE),
            ibe=self.overload, types=dedup_partition(self.vectors), name=self.tag,
        )

    def objective(self, f: BPartition) -> ExtValue:
        """Total overload, summed dimension by dimension over the bins."""
        f.validate(self.n, self.b)
        total = 0
        for i in range(1, self.b + 1):
            for j in range(self.d):
                load = sum(self.vectors[x][j] for x in range(self.n) if f[x] == i)
                total += max(0, load - self.bin_weights[i - 1][j])
        return total


# --- Multi Knapsack ----------------------------------------------------------

@dataclass(frozen=True)
class MultiKnapsackProblem:
    """``values[item][knapsack]`` and ``weights[item][knapsack]``; bin ``m+1``
    holds the unchosen items."""

    capacities: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[int, ...], ...]
    tag = "multi-knapsack"

    def __post_init__(self):
        caps = tuple(_check_nonneg_int(f"capacities[{i}]", c) for i, c in enumerate(self.capacities))
        if not caps:
            raise UsageError("capacities: at least one knapsack required")
        object.__setattr__(self, "capacities", caps)
        object.__setattr__(self, "values", _int_matrix("values", self.values, len(caps)))
        object.__setattr__(self, "weights", _int_matrix("weights", self.weights, len(caps)))
        if len(self.values) != len(self.weights):
            raise UsageError(f"weights: expected {len(self.values)} items, got {len(self.weights)}")

    @property
    def m(self) -> int:
        return len(self.capacities)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def b(self) -> int:
        return self.m + 1

    def _phi(self, i: int, items) -> ExtValue:
        if i == self.m + 1:
            return 0
        if sum(self.weights[x][i - 1] for x in items) > self.capacities[i - 1]:
            return WORST
        return sum(self.values[x][i - 1] for x in items)

    def build(self) -> Instance:
        profiles = [(self.values[x], self.weights[x]) for x in range(self.n)]
        return Instance(
            n=self.n, b=self.b, agg=AggSpec(Op.SUM, Direction.MAXIMIZE),
            ibe=self._phi, types=dedup_partition(profiles), name=self.tag,
        )

    def fits(self, f: BPartition) -> bool:
        load = [0] * self.m
        for x, i in enumerate(f.assign):
            if i <= self.m:
                load[i - 1] += self.weights[x][i - 1]
        return all(l <= c for l, c in zip(load, self.capacities))

    def score(self, f: BPartition) -> int:
        return sum(self.values[x][i - 1] for x, i in enumerate(f.assign) if i <= self.m)

    def objective(self, f: BPartition) -> ExtValue:
        f.validate(self.n, self.b)
        return self.score(f) if self.fits(f) else WORST


# --- Nash Social Welfare -----------------------------------------------------

@dataclass(frozen=True)
class NashProblem:
    """``utilities[agent][item]``; agents are the bins, items the elements."""

    utilities: tuple[tuple[int, ...], ...]
    tag = "nash"

    def __post_init__(self):
        if not self.utilities:
            raise UsageError("utilities: at least one agent required")
        width = len(self.utilities[0]) if isinstance(self.utilities[0], (list, tuple)) else None
        object.__setattr__(self, "utilities", _int_matrix("utilities", self.utilities, width))

    @property
    def n_agents(self) -> int:
        return len(self.utilities)

    @property
    def m_items(self) -> int:
        return len(self.utilities[0])

    n = m_items
    b = n_agents

    def build(self) -> Instance:
        u = self.utilities
        profiles = [tuple(u[a][s] for a in range(self.n_agents)) for s in range(self.m_items)]
        return Instance(
            n=self.m_items, b=self.n_agents, agg=AggSpec(Op.PRODUCT, Direction.MAXIMIZE),
            ibe=lambda i, s: sum(u[i - 1][x] for x in s),
            types=dedup_partition(profiles), name=self.tag,
        )

    def objective(self, f: BPartition) -> ExtValue:
        """Product over agents of the utility of their bundle."""
        f.validate(self.m_items, self.n_agents)
        return math.prod(
            sum(self.utilities[a][s] for s in range(self.m_items) if f[s] == a + 1)
            for a in range(self.n_agents)
        )


# --- Multi-Component Pi Deletion ---------------------------------------------

def edgeless(g: Graph, s) -> bool:
    return g.edges_within(s) == 0


def clique(g: Graph, s) -> bool:
    return g.edges_within(s) == math.comb(len(s), 2)


PREDICATES: dict[str, Callable[[Graph, frozenset], bool]] = {"edgeless": edgeless, "clique": clique}


@dataclass(frozen=True)
class PiDeletionProblem:
    """Bins ``1..c`` must each induce a subgraph with property ``predicate``;
    bin ``c+1`` holds the deleted vertices. ``c=1`` with ``edgeless`` is
    Vertex Cover."""

    graph: Graph
    c: int = 1
    predicate: Union[str, Callable[[Graph, frozenset], bool]] = "edgeless"
    tag = "pi-deletion"

    def __post_init__(self):
        if isinstance(self.c, bool) or not isinstance(self.c, int) or self.c < 1:
            raise UsageError(f"c: component count must be an integer >= 1, got {self.c!r}")
        if isinstance(self.predicate, str) and self.predicate not in PREDICATES:
            raise UsageError(f"predicate: unknown {self.predicate!r}; known: {sorted(PREDICATES)}")

    @property
    def pi(self) -> Callable[[Graph, frozenset], bool]:
        return PREDICATES[self.predicate] if isinstance(self.predicate, str) else self.predicate

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def b(self) -> int:
        return self.c + 1

    def build(self) -> Instance:
        g, c, pi = self.graph, self.c, self.pi

        # Worst on violation of pi, matching the claimed solution correspondence.
        def phi(i, s):
            if i == c + 1:
                return len(s)
            return 0 if pi(g, s) else WORST

        return Instance(
            n=g.n, b=c + 1, agg=AggSpec(Op.SUM, Direction.MINIMIZE), ibe=phi,
            types=neighborhood_classes(g), name=self.tag,
        )

    def feasible(self, f: BPartition) -> bool:
        if self.predicate == "edgeless":
            return all(not (f[u] == f[v] <= self.c) for u, v in self.graph.edges)
        if self.predicate == "clique":
            return all(
                self.graph.has_edge(u, v)
                for u in range(self.n) for v in range(u + 1, self.n)
                if f[u] == f[v] <= self.c
            )
        return all(self.pi(self.graph, frozenset(x for x in range(self.n) if f[x] == i))
                   for i in range(1, self.c + 1))

    def objective(self, f: BPartition) -> ExtValue:
        f.validate(self.n, self.b)
        if not self.feasible(f):
            return WORST
        return sum(1 for i in f.assign if i == self.c + 1)


Problem = Union[MaxCCutProblem, ClusterEditingProblem, VBPProblem,
                MultiKnapsackProblem, NashProblem, PiDeletionProblem]
PROBLEM_TYPES = {cls.tag: cls for cls in (MaxCCutProblem, ClusterEditingProblem, VBPProblem,
                                          MultiKnapsackProblem, NashProblem, PiDeletionProblem)}


def maxcut_build(problem: MaxCCutProblem) -> Instance:
    return problem.build()


def ce_build(problem: ClusterEditingProblem) -> Instance:
    return problem.build()


def vbp_build(problem: VBPProblem) -> Instance:
    return problem.build()


def mk_build(problem: MultiKnapsackProblem) -> Instance:
    return problem.build()


def nash_build(problem: NashProblem) -> Instance:
    return problem.build()


def pi_build(problem: PiDeletionProblem) -> Instance:
    return problem.build()


def build(problem: Problem) -> Instance:
    return problem.build()


def objective_crosscheck(problem: Problem, f: BPartition) -> ExtValue:
    return problem.objective(f)


def greedy_partition(inst: Instance) -> BPartition:
    """Single pass in element order; each element goes to the bin giving the
    best partial value, lowest bin index on ties."""
    contents: list[set[int]] = [set() for _ in range(inst.b)]
    vals = [inst.phi(i, ()) for i in range(1, inst.b + 1)]
    assign = []
    for x in range(inst.n):
        choice, choice_val, choice_phi = None, None, None
        for i in range(1, inst.b + 1):
            phi_new = inst.phi(i, contents[i - 1] | {x})
            total = inst.agg.fold(vals[:i - 1] + [phi_new] + vals[i:])
            if choice is None or better(total, choice_val, inst.direction):
                choice, choice_val, choice_phi = i, total, phi_new
        contents[choice - 1].add(x)
        vals[choice - 1] = choice_phi
        assign.append(choice)
    return BPartition(assign)


def random_partition(n: int, b: int, seed: int) -> BPartition:
    rng = random.Random(seed)
    return BPartition(rng.randint(1, b) for _ in range(n))


def initial_solution(problem: Problem, mode: str = "random", seed: int = 0) -> BPartition:
    """``mode`` is ``"random"`` (seeded uniform bins) or ``"greedy"``."""
    if mode == "random":
        return random_partition(problem.n, problem.b, seed)
    if mode == "greedy":
        return greedy_partition(problem.build())
    raise UsageError(f"unknown initial-solution mode {mode!r}")
