"""Type partitions: neighborhood classes, duplicate grouping and an
executable check of target equivalence."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .core import Instance, TypePartition, UsageError

EXHAUSTIVE_MAX_N = 12
EXHAUSTIVE_HARD_CAP = 16


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    def __init__(self, n: int, edges: Sequence[Sequence[int]] = ()):
        if n < 0:
            raise UsageError(f"vertex count must be non-negative, got {n}")
        seen = set()
        norm = []
        for idx, e in enumerate(edges):
            if len(e) != 2:
                raise UsageError(f"edges[{idx}]: expected a vertex pair, got {list(e)}")
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise UsageError(f"edges[{idx}]: vertex out of range [0,{n - 1}]")
            if u == v:
                raise UsageError(f"edges[{idx}]: self-loop on vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise UsageError(f"edges[{idx}]: duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_adj_sets", tuple(frozenset(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> frozenset:
        return self._adj_sets[u]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj_sets[u]

    def edges_within(self, s) -> int:
        """Number of edges with both endpoints in ``s``."""
        s = s if isinstance(s, (set, frozenset)) else set(s)
        return sum(len(self._adj_sets[u] & s) for u in s) // 2

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``u`` renamed to ``perm[u]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])


def same_neighborhood_class(g: Graph, u: int, v: int) -> bool:
    return g.neighbors(u) - {v} == g.neighbors(v) - {u}


def neighborhood_classes(g: Graph) -> TypePartition:
    """Group vertices with ``N(u) - {v} == N(v) - {u}``.

    False twins share open neighborhoods, true twins share closed ones; the
    two groupings are merged with a disjoint-set forest.
    """
    ds = DisjointSet(range(g.n))
    for key_of in (lambda u: g.neighbors(u), lambda u: g.neighbors(u) | {u}):
        first: dict[frozenset, int] = {}
        for u in range(g.n):
            rep = first.setdefault(key_of(u), u)
            if rep != u:
                ds.merge(rep, u)
    return TypePartition.from_labels([ds[u] for u in range(g.n)])


def dedup_partition(keys: Sequence[Hashable]) -> TypePartition:
    """One class per distinct key, numbered by first occurrence."""
    return TypePartition.from_labels([_canonical(k) for k in keys])


def _canonical(key):
    if isinstance(key, (list, tuple)):
        return tuple(_canonical(k) for k in key)
    return key


@dataclass
class EquivalenceReport:
    holds: bool
    witness: tuple[int, tuple[int, ...], int, int] | None = None
    checks_performed: int = 0


def _contexts(rest: Sequence[int], x: int, max_size: int) -> Iterator[frozenset]:
    for size in range(min(max_size, len(rest)) + 1):
        for extra in itertools.combinations(rest, size):
            yield frozenset(extra) | {x}


def _violates(inst: Instance, i: int, a: frozenset, x: int, y: int) -> bool:
    return inst.phi(i, (a - {x}) | {y}) != inst.phi(i, a)


def are_target_equivalent(inst: Instance, x: int, y: int, max_context: int | None = None) -> bool:
    """Exhaustive pairwise check of ``x ~ y`` over all bins and contexts."""
    if x == y:
        return True
    if inst.n > EXHAUSTIVE_HARD_CAP:
        raise UsageError(f"exhaustive equivalence check refused for n={inst.n} > {EXHAUSTIVE_HARD_CAP}")
    limit = inst.n if max_context is None else max_context
    rest = [z for z in range(inst.n) if z not in (x, y)]
    for i in range(1, inst.b + 1):
        for a in _contexts(rest, x, limit - 1):
            if _violates(inst, i, a, x, y):
                return False
    return True


def verify_target_equivalence(
    inst: Instance,
    max_context: int | None = None,
    *,
    exhaustive: bool | None = None,
    samples: int = 10_000,
    seed: int = 0,
) -> EquivalenceReport:
    """Check that every class of ``inst.types`` is pairwise target equivalent.

    Contexts ``A`` contain ``x`` but not ``y`` and have at most
    ``max_context`` elements (default: unbounded). With ``exhaustive=None``
    the check is exhaustive for ``n <= 12`` and otherwise draws ``samples``
    seeded random (class pair, bin, context) triples.
    """
    n = inst.n
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_MAX_N
    if exhaustive and n > EXHAUSTIVE_HARD_CAP:
        raise UsageError(f"exhaustive equivalence check refused for n={n} > {EXHAUSTIVE_HARD_CAP}")
    if not exhaustive and samples <= 0:
        raise UsageError(f"n={n} needs a positive sampling budget")
    limit = n if max_context is None else max_context
    if limit < 1:
        raise UsageError(f"max_context must be >= 1, got {max_context}")

    classes = [c for c in inst.types.members() if len(c) > 1]
    report = EquivalenceReport(holds=True)

    if exhaustive:
        for cls in classes:
            for x, y in itertools.permutations(cls, 2):
                rest = [z for z in range(n) if z not in (x, y)]
                for i in range(1, inst.b + 1):
                    for a in _contexts(rest, x, limit - 1):
                        report.checks_performed += 1
                        if _violates(inst, i, a, x, y):
                            report.holds = False
                            report.witness = (i, tuple(sorted(a)), x, y)
                            return report
        return report

    if not classes:
        return report
    rng = random.Random(seed)
    for _ in range(samples):
        cls = rng.choice(classes)
        x, y = rng.sample(cls, 2)
        i = rng.randint(1, inst.b)
        rest = [z for z in range(n) if z not in (x, y)]
        rng.shuffle(rest)
        size = rng.randint(0, min(limit - 1, len(rest)))
        a = frozenset(rest[:size]) | {x}
        report.checks_performed += 1
        if _violates(inst, i, a, x, y):
            report.holds = False
            report.witness = (i, tuple(sorted(a)), x, y)
            return report
    return report
