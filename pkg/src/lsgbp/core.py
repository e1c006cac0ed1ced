"""Value algebra, partitions and target-value evaluation.

Bin indices are 1-based (``1..b``) everywhere in the public API; element
indices are 0-based (``0..n-1``).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence, Union


class UsageError(ValueError):
    """Raised for malformed input, dimension mismatches and budget violations."""


class _Worst:
    """The absorbing element: infeasible bin contents."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "WORST"

    def __reduce__(self):
        return (_Worst, ())


WORST = _Worst()

#: A finite arbitrary-precision integer or ``WORST``.
ExtValue = Union[int, _Worst]


def is_worst(v: ExtValue) -> bool:
    return v is WORST


class Op(str, Enum):
    SUM = "sum"
    PRODUCT = "product"


class Direction(str, Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


@dataclass(frozen=True)
class AggSpec:
    """Aggregation operator plus optimisation direction.

    ``Product`` is only order-compatible with the DP when every bin value is
    non-negative; the shipped Nash adapter guarantees this.
    """

    op: Op = Op.SUM
    direction: Direction = Direction.MINIMIZE

    @property
    def identity(self) -> int:
        return 0 if self.op is Op.SUM else 1

    def combine(self, a: ExtValue, b: ExtValue) -> ExtValue:
        if a is WORST or b is WORST:
            return WORST
        return a + b if self.op is Op.SUM else a * b

    def fold(self, values: Iterable[ExtValue]) -> ExtValue:
        acc: ExtValue = self.identity
        for v in values:
            if v is WORST:
                return WORST
            acc = self.combine(acc, v)
        return acc

    def better(self, a: ExtValue, b: ExtValue) -> bool:
        return better(a, b, self.direction)


def better(a: ExtValue, b: ExtValue, direction: Direction) -> bool:
    """True iff ``a`` is strictly better than ``b`` under ``direction``."""
    if a is WORST:
        return False
    if b is WORST:
        return True
    if direction is Direction.MINIMIZE:
        return a < b
    return a > b


def format_value(v: ExtValue) -> str:
    return "worst" if v is WORST else str(v)


def parse_value(s: str) -> ExtValue:
    if s == "worst":
        return WORST
    try:
        return int(s)
    except ValueError:
        raise UsageError(f"invalid value {s!r}: expected a decimal integer or 'worst'") from None


@dataclass(frozen=True)
class BPartition:
    """An assignment of each element to a bin in ``1..b``."""

    assign: tuple[int, ...]

    def __init__(self, assign: Iterable[int]):
        object.__setattr__(self, "assign", tuple(int(a) for a in assign))

    def __len__(self):
        return len(self.assign)

    def __getitem__(self, x: int) -> int:
        return self.assign[x]

    def bin_contents(self, b: int) -> list[list[int]]:
        """Preimages ``f^-1(1..b)`` as ascending element lists (index 0 is bin 1)."""
        bins: list[list[int]] = [[] for _ in range(b)]
        for x, i in enumerate(self.assign):
            bins[i - 1].append(x)
        return bins

    def validate(self, n: int, b: int) -> None:
        if len(self.assign) != n:
            raise UsageError(f"partition has {len(self.assign)} entries, instance has n={n}")
        for x, i in enumerate(self.assign):
            if not 1 <= i <= b:
                raise UsageError(f"assign[{x}]={i} outside bin range [1,{b}]")


@dataclass(frozen=True)
class TypePartition:
    """Classes ``X_1..X_tau`` given as element -> class index (0-based)."""

    class_of: tuple[int, ...]
    class_sizes: tuple[int, ...]

    @classmethod
    def from_labels(cls, labels: Sequence) -> "TypePartition":
        """Classes numbered by first occurrence of each label."""
        index: dict = {}
        class_of = []
        for lab in labels:
            class_of.append(index.setdefault(lab, len(index)))
        sizes = [0] * len(index)
        for j in class_of:
            sizes[j] += 1
        return cls(tuple(class_of), tuple(sizes))

    @classmethod
    def singletons(cls, n: int) -> "TypePartition":
        return cls(tuple(range(n)), (1,) * n)

    @property
    def tau(self) -> int:
        return len(self.class_sizes)

    @property
    def n(self) -> int:
        return len(self.class_of)

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.tau)]
        for x, j in enumerate(self.class_of):
            out[j].append(x)
        return out

    def histogram(self, elements: Iterable[int]) -> tuple[int, ...]:
        h = [0] * self.tau
        for x in elements:
            h[self.class_of[x]] += 1
        return tuple(h)


IBE = Callable[[int, frozenset], ExtValue]


@dataclass(eq=False)
class Instance:
    """A Generalized Bin Problem instance with an attached type partition.

    ``ibe(i, subset)`` evaluates bin ``i`` (1-based) on a frozenset of
    elements. Every call through :meth:`phi` bumps ``eval_count``.
    """

    n: int
    b: int
    agg: AggSpec
    ibe: IBE
    types: TypePartition
    name: str = ""
    eval_count: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.b < 1:
            raise UsageError(f"bin count must be >= 1, got {self.b}")
        if self.types.n != self.n:
            raise UsageError(f"type partition covers {self.types.n} elements, instance has {self.n}")

    def phi(self, i: int, subset: Iterable[int]) -> ExtValue:
        with self._lock:
            self.eval_count += 1
        return self.ibe(i, frozenset(subset))

    @property
    def direction(self) -> Direction:
        return self.agg.direction


def _check_pair(f: BPartition, g: BPartition) -> None:
    if len(f) != len(g):
        raise UsageError(f"partitions have different lengths ({len(f)} vs {len(g)})")


def flip_set(f: BPartition, g: BPartition) -> set[int]:
    _check_pair(f, g)
    return {x for x, (a, c) in enumerate(zip(f.assign, g.assign)) if a != c}


def flip_distance(f: BPartition, g: BPartition) -> int:
    _check_pair(f, g)
    return sum(1 for a, c in zip(f.assign, g.assign) if a != c)


def target_value(inst: Instance, f: BPartition, order: Sequence[int] | None = None) -> ExtValue:
    """Aggregate of ``phi_i(f^-1(i))`` over all bins.

    ``order`` permutes the bin evaluation order (1-based bin indices); the
    result is independent of it. All ``b`` bins are always evaluated.
    """
    f.validate(inst.n, inst.b)
    bins = f.bin_contents(inst.b)
    order = range(1, inst.b + 1) if order is None else order
    values = [inst.phi(i, bins[i - 1]) for i in order]
    return inst.agg.fold(values)
