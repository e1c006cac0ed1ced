"""Improving-flip search over type specifications.

For each flip-count vector ``delta`` (how many elements of each type move),
a dynamic program over the bins computes the best aggregate obtainable by
removing ``p'`` and inserting ``q'`` elements of each type per bin, with the
totals of both equal to ``delta``. A traceback plus a per-type routing of
the removed elements yields the new partition.
"""
from __future__ import annotations

import itertools
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Sequence

from .core import (
    WORST,
    BPartition,
    ExtValue,
    Instance,
    TypePartition,
    UsageError,
    better,
)

TypeSpec = tuple[int, ...]


class Strategy(str, Enum):
    BEST = "best"
    FIRST = "first"


def enumerate_deltas(types: TypePartition, k: int) -> Iterator[TypeSpec]:
    """All ``delta`` with ``1 <= sum(delta) <= k`` and ``delta_j <= |X_j|``,
    each once, in ascending lexicographic order."""
    if k < 1:
        raise UsageError(f"search radius must be >= 1, got {k}")
    caps = types.class_sizes
    tau = len(caps)
    prefix = [0] * tau

    def rec(j: int, left: int) -> Iterator[TypeSpec]:
        if j == tau:
            if left < k:
                yield tuple(prefix)
            return
        for v in range(min(caps[j], left) + 1):
            prefix[j] = v
            yield from rec(j + 1, left - v)
        prefix[j] = 0

    yield from rec(0, k)


def is_compatible(p: TypeSpec, q: TypeSpec, bin_contents, types: TypePartition) -> bool:
    """``p`` fits inside the bin and ``q`` fits outside it, per type."""
    h = types.histogram(bin_contents)
    return all(pj <= hj and qj <= sj - hj for pj, qj, hj, sj in zip(p, q, h, types.class_sizes))


class PhiCache:
    """Memo of ``phi_i`` keyed by (bin, per-type histogram of the evaluated set).

    Sound only when ``inst.types`` really is a type partition.
    """

    def __init__(self, inst: Instance):
        self.inst = inst
        self._members = inst.types.members()
        self._values: dict[tuple[int, TypeSpec], ExtValue] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._values)

    def value(self, i: int, hist: TypeSpec) -> ExtValue:
        key = (i, hist)
        v = self._values.get(key)
        if v is not None:
            self.hits += 1
            return v
        subset = [x for j, c in enumerate(hist) for x in self._members[j][:c]]
        v = self.inst.phi(i, subset)
        with self._lock:
            self.misses += 1
            self._values[key] = v
        return v


def _lowest(candidates: list[int], count: int) -> list[int]:
    return candidates[:count]


def apply_type_op(
    inst: Instance,
    i: int,
    contents,
    p: TypeSpec,
    q: TypeSpec,
    *,
    choose: Callable[[list[int], int], list[int]] | None = None,
    cache: PhiCache | None = None,
) -> ExtValue:
    """Evaluate ``phi_i`` on ``contents`` minus ``p`` plus ``q`` elements per type.

    ``choose(candidates, count)`` picks the representatives from an
    ascending candidate list; the default takes the lowest indices. With a
    cache the concrete set is only built on a miss.
    """
    types = inst.types
    contents = set(contents)
    if not is_compatible(p, q, contents, types):
        raise UsageError(f"type specs p={p}, q={q} incompatible with bin {i}")
    h = types.histogram(contents)
    if cache is not None:
        return cache.value(i, tuple(hj - pj + qj for hj, pj, qj in zip(h, p, q)))
    choose = choose or _lowest
    members = types.members()
    result = set(contents)
    for j, cls in enumerate(members):
        inside = [x for x in cls if x in contents]
        outside = [x for x in cls if x not in contents]
        removed = choose(inside, p[j])
        added = choose(outside, q[j])
        if len(removed) != p[j] or len(added) != q[j]:
            raise UsageError("representative chooser returned the wrong number of elements")
        result.difference_update(removed)
        result.update(added)
    return inst.phi(i, result)


@dataclass
class DeltaResult:
    """Outcome of the DP for one ``delta``.

    ``removals[i-1]`` lists the elements taken out of bin ``i``;
    ``inserts[i-1]`` is the per-type count vector inserted into bin ``i``.
    """

    delta: TypeSpec
    value: ExtValue
    removals: list[list[int]] | None
    inserts: list[TypeSpec] | None
    table_entries: int
    table: list[dict] | None = None


def _box(delta: TypeSpec) -> list[TypeSpec]:
    return list(itertools.product(*(range(d + 1) for d in delta)))


def dp_best_for_delta(
    inst: Instance,
    f: BPartition,
    delta: TypeSpec,
    *,
    cache: PhiCache | None = None,
    keep_table: bool = False,
) -> DeltaResult:
    """Run the bin-by-bin DP for ``delta``.

    Vectors ``<= delta`` are coded in mixed radix ``(delta_j + 1)`` so that
    the code order is lexicographic and codes add linearly. A (p, q) pair is
    coded as ``p * N + q``. With ``keep_table`` every layer is returned as a
    dict ``{(p, q): value}`` (Worst cells included).
    """
    types = inst.types
    delta = tuple(delta)
    if len(delta) != types.tau or any(d < 0 or d > s for d, s in zip(delta, types.class_sizes)):
        raise UsageError(f"{delta} is not a type specification")
    if sum(delta) < 1:
        raise UsageError("delta must flip at least one element")
    cache = cache or PhiCache(inst)
    agg = inst.agg
    direction = agg.direction
    combine = agg.combine
    b = inst.b

    vecs = _box(delta)
    N = len(vecs)
    # fits[a][c]: vecs[a] + vecs[c] <= delta componentwise
    fits = [[all(x + y <= d for x, y, d in zip(va, vc, delta)) for vc in vecs] for va in vecs]

    bins = f.bin_contents(b)
    sizes = types.class_sizes
    layer: list[ExtValue | None] = [None] * (N * N)
    layer[0] = agg.identity
    backs: list[list[int]] = []
    tables: list[dict] = []

    for ell in range(1, b + 1):
        h = types.histogram(bins[ell - 1])
        outside = tuple(s - x for s, x in zip(sizes, h))
        p_ok = [a for a, v in enumerate(vecs) if all(x <= y for x, y in zip(v, h))]
        q_ok = [c for c, v in enumerate(vecs) if all(x <= y for x, y in zip(v, outside))]
        local = []
        for a in p_ok:
            va = vecs[a]
            for c in q_ok:
                vc = vecs[c]
                hist = tuple(x - y + z for x, y, z in zip(h, va, vc))
                val = cache.value(ell, hist)
                if val is not WORST:
                    local.append((a, c, a * N + c, val))

        prev = [(pc, divmod(pc, N), v) for pc, v in enumerate(layer) if v is not None]
        new: list[ExtValue | None] = [None] * (N * N)
        back = [-1] * (N * N)
        for a2, c2, lp, lv in local:
            fa = fits
            for pc, (a, c), pv in prev:
                if not (fa[a][a2] and fa[c][c2]):
                    continue
                t = pc + lp
                val = combine(pv, lv)
                if val is WORST:
                    continue
                cur = new[t]
                if cur is None or better(val, cur, direction):
                    new[t] = val
                    back[t] = lp
        layer = new
        backs.append(back)
        if keep_table:
            tables.append({
                (vecs[pc // N], vecs[pc % N]): (WORST if v is None else v)
                for pc, v in enumerate(layer)
            })

    table_entries = N * N * b
    final = layer[N * N - 1]
    if final is None:
        return DeltaResult(delta, WORST, None, None, table_entries, tables if keep_table else None)

    members_by_bin = [
        [[x for x in bins[i] if types.class_of[x] == j] for j in range(types.tau)] for i in range(b)
    ]
    removals: list[list[int]] = [[] for _ in range(b)]
    inserts: list[TypeSpec] = [tuple([0] * types.tau)] * b
    t = N * N - 1
    for ell in range(b, 0, -1):
        lp = backs[ell - 1][t]
        a2, c2 = divmod(lp, N)
        pv, qv = vecs[a2], vecs[c2]
        removals[ell - 1] = sorted(
            x for j, cnt in enumerate(pv) for x in members_by_bin[ell - 1][j][:cnt]
        )
        inserts[ell - 1] = qv
        t -= lp
    assert t == 0, "traceback did not return to the empty prefix"
    return DeltaResult(delta, final, removals, inserts, table_entries, tables if keep_table else None)


def reconstruct_partition(
    f: BPartition,
    removals: Sequence[Sequence[int]],
    inserts: Sequence[TypeSpec],
    types: TypePartition,
) -> BPartition:
    """Route removed elements to bins so that bin ``i`` receives exactly
    ``inserts[i-1][j]`` elements of type ``j``.

    Removed elements and target bins are both taken in ascending order, so
    an element can land back in its own bin.
    """
    assign = list(f.assign)
    pool: list[list[int]] = [[] for _ in range(types.tau)]
    for r in removals:
        for x in r:
            pool[types.class_of[x]].append(x)
    for j in range(types.tau):
        pool[j].sort()
        targets = [i + 1 for i, q in enumerate(inserts) for _ in range(q[j])]
        if len(targets) != len(pool[j]):
            raise RuntimeError(
                f"type {j}: {len(pool[j])} removals but {len(targets)} insertions"
            )
        for x, i in zip(pool[j], targets):
            assign[x] = i
    return BPartition(assign)


@dataclass
class SearchResult:
    improved: bool
    partition: BPartition | None
    value: ExtValue
    stats: dict = field(default_factory=dict)
    delta: TypeSpec | None = None


def partition_value(inst: Instance, f: BPartition, cache: PhiCache) -> ExtValue:
    """``val(f)`` routed through the histogram cache."""
    f.validate(inst.n, inst.b)
    bins = f.bin_contents(inst.b)
    return inst.agg.fold(cache.value(i, inst.types.histogram(bins[i - 1])) for i in range(1, inst.b + 1))


def best_improving_flip(
    inst: Instance,
    f: BPartition,
    k: int,
    strategy: Strategy | str = Strategy.BEST,
    *,
    cache: PhiCache | None = None,
    threads: int = 1,
) -> SearchResult:
    """Find a partition within flip distance ``k`` strictly better than ``f``.

    ``best`` returns the best such partition over all deltas (earliest delta
    on ties), ``first`` the first improving one in enumeration order. When
    nothing improves, ``improved`` is false and ``value`` is ``val(f)``.
    """
    strategy = Strategy(strategy)
    if k < 1:
        raise UsageError(f"search radius must be >= 1, got {k}")
    start = time.perf_counter()
    evals0 = inst.eval_count
    cache = cache or PhiCache(inst)
    base = partition_value(inst, f, cache)
    deltas = list(enumerate_deltas(inst.types, k))
    stats = {"deltas_enumerated": 0, "table_entries": 0}

    best: DeltaResult | None = None
    best_value = base

    def consider(res: DeltaResult) -> bool:
        nonlocal best, best_value
        stats["deltas_enumerated"] += 1
        stats["table_entries"] += res.table_entries
        if better(res.value, best_value, inst.direction):
            best, best_value = res, res.value
            return True
        return False

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda d: dp_best_for_delta(inst, f, d, cache=cache), deltas))
        for res in results:
            if consider(res) and strategy is Strategy.FIRST:
                break
    else:
        for d in deltas:
            if consider(dp_best_for_delta(inst, f, d, cache=cache)) and strategy is Strategy.FIRST:
                break

    stats["ibe_evals"] = inst.eval_count - evals0
    stats["wall_time"] = time.perf_counter() - start
    if best is None:
        return SearchResult(False, None, base, stats)
    g = reconstruct_partition(f, best.removals, best.inserts, inst.types)
    return SearchResult(True, g, best.value, stats, best.delta)


def table_bound(k: int, tau: int) -> int:
    """Per-delta cell bound ``min(4^k, (ceil(k/tau)+1)^(2 tau))`` without the ``b`` factor."""
    return min(4 ** k, (math.ceil(k / tau) + 1) ** (2 * tau))
