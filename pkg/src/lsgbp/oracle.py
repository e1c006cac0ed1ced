"""Brute-force references: literal k-flip neighborhood scan and global optimum."""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

from .core import BPartition, ExtValue, Instance, UsageError, better
from .dp import SearchResult

ENUMERATION_LIMIT = 10 ** 7


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 8
    max_b: int = 4
    max_k: int = 3


def neighborhood_size(n: int, b: int, k: int) -> int:
    return sum(math.comb(n, s) * (b - 1) ** s for s in range(min(k, n) + 1))


def _evaluator(inst: Instance):
    memo: dict[tuple[int, frozenset], ExtValue] = {}

    def val(assign) -> ExtValue:
        bins: list[list[int]] = [[] for _ in range(inst.b)]
        for x, i in enumerate(assign):
            bins[i - 1].append(x)
        vals = []
        for i in range(1, inst.b + 1):
            key = (i, frozenset(bins[i - 1]))
            if key not in memo:
                memo[key] = inst.phi(i, key[1])
            vals.append(memo[key])
        return inst.agg.fold(vals)

    return val


def brute_force_best_flip(
    inst: Instance, f: BPartition, k: int, budget: OracleBudget = OracleBudget()
) -> SearchResult:
    """Scan every ``f'`` with ``d_flip(f, f') <= k``; return the best strictly
    improving one (lexicographically smallest assignment on ties)."""
    n, b = inst.n, inst.b
    f.validate(n, b)
    if k < 0:
        raise UsageError(f"radius must be non-negative, got {k}")
    if n > budget.max_n or b > budget.max_b or k > budget.max_k:
        raise UsageError(
            f"oracle budget exceeded: n={n}, b={b}, k={k} vs caps "
            f"n<={budget.max_n}, b<={budget.max_b}, k<={budget.max_k}"
        )
    size = neighborhood_size(n, b, k)
    if size > ENUMERATION_LIMIT:
        raise UsageError(f"oracle budget exceeded: {size} candidates > {ENUMERATION_LIMIT}")

    start = time.perf_counter()
    evals0 = inst.eval_count
    val = _evaluator(inst)
    base = val(f.assign)
    best_assign, best_value = None, base
    for s in range(1, min(k, n) + 1):
        for d in itertools.combinations(range(n), s):
            choices = [[i for i in range(1, b + 1) if i != f[x]] for x in d]
            for new_bins in itertools.product(*choices):
                g = list(f.assign)
                for x, i in zip(d, new_bins):
                    g[x] = i
                v = val(g)
                if better(v, best_value, inst.direction) or (
                    best_assign is not None and v == best_value and g < best_assign
                ):
                    best_assign, best_value = g, v
    stats = {
        "candidates": size - 1,
        "ibe_evals": inst.eval_count - evals0,
        "wall_time": time.perf_counter() - start,
    }
    if best_assign is None:
        return SearchResult(False, None, base, stats)
    return SearchResult(True, BPartition(best_assign), best_value, stats)


def exhaustive_optimum(inst: Instance) -> tuple[BPartition, ExtValue]:
    """Best of all ``b^n`` assignments, lexicographically smallest on ties."""
    if inst.b ** inst.n > ENUMERATION_LIMIT:
        raise UsageError(f"exhaustive search over {inst.b}^{inst.n} assignments exceeds {ENUMERATION_LIMIT}")
    val = _evaluator(inst)
    best_assign, best_value = None, None
    # product() yields assignments in lexicographic order, so strict improvement keeps the smallest.
    for g in itertools.product(range(1, inst.b + 1), repeat=inst.n):
        v = val(g)
        if best_assign is None or better(v, best_value, inst.direction):
            best_assign, best_value = g, v
    return BPartition(best_assign), best_value
