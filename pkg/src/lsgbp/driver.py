"""Iterated improving-flip local search."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .core import BPartition, ExtValue, Instance, flip_distance
from .dp import PhiCache, Strategy, best_improving_flip, partition_value


@dataclass
class Step:
    iteration: int
    value: ExtValue
    flip_size: int
    wall_time: float


@dataclass
class RunTrace:
    initial_value: ExtValue
    steps: list[Step] = field(default_factory=list)
    final: BPartition | None = None
    locally_optimal: bool = False
    total_ibe_evals: int = 0
    searches: list[dict] = field(default_factory=list)

    @property
    def final_value(self) -> ExtValue:
        return self.steps[-1].value if self.steps else self.initial_value


def run_local_search(
    inst: Instance,
    f0: BPartition,
    k: int,
    strategy: Strategy | str = Strategy.BEST,
    max_iters: int = 1000,
    *,
    threads: int = 1,
) -> RunTrace:
    """Apply improving k-flips until none exists or ``max_iters`` searches ran.

    ``locally_optimal`` is only set when the last search certified that no
    improving flip exists; ``max_iters=0`` evaluates ``f0`` and stops.
    """
    evals0 = inst.eval_count
    cache = PhiCache(inst)
    f = f0
    trace = RunTrace(initial_value=partition_value(inst, f, cache))
    start = time.perf_counter()
    for it in range(1, max_iters + 1):
        res = best_improving_flip(inst, f, k, strategy, cache=cache, threads=threads)
        trace.searches.append(res.stats)
        if not res.improved:
            trace.locally_optimal = True
            break
        trace.steps.append(Step(it, res.value, flip_distance(f, res.partition), time.perf_counter() - start))
        f = res.partition
    trace.final = f
    trace.total_ibe_evals = inst.eval_count - evals0
    return trace
