import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from gen import ADAPTERS, random_graph, random_problem
from lsgbp.adapters import MaxCCutProblem
from lsgbp.core import Instance, TypePartition, UsageError
from lsgbp.typepart import (
    Graph,
    are_target_equivalent,
    dedup_partition,
    neighborhood_classes,
    same_neighborhood_class,
    verify_target_equivalence,
)

K4 = Graph(4, list(itertools.combinations(range(4), 2)))
P3 = Graph(3, [(0, 1), (1, 2)])
STAR = Graph(4, [(0, 1), (0, 2), (0, 3)])


def _classes(tp):
    return sorted(sorted(c) for c in tp.members())


def test_graph_validation():
    with pytest.raises(UsageError):
        Graph(3, [(0, 0)])
    with pytest.raises(UsageError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(UsageError):
        Graph(3, [(0, 3)])
    g = Graph(3, [(2, 0)])
    assert g.edges == ((0, 2),) and g.adjacency == ((2,), (), (0,))


def test_neighborhood_classes_examples():
    assert neighborhood_classes(K4).tau == 1
    assert _classes(neighborhood_classes(P3)) == [[0, 2], [1]]
    assert _classes(neighborhood_classes(STAR)) == [[0], [1, 2, 3]]
    assert neighborhood_classes(Graph(3)).tau == 1


def test_path_classes_by_definition():
    # a-b: N(a)-{b} = {} vs N(b)-{a} = {c}; a-c: {b} = {b}; b-c: {a} vs {}
    pairs = {(u, v): same_neighborhood_class(P3, u, v) for u, v in itertools.combinations(range(3), 2)}
    assert pairs == {(0, 1): False, (0, 2): True, (1, 2): False}


graph_seeds = st.tuples(st.integers(1, 10), st.integers(0, 10 ** 6))


@given(graph_seeds)
def test_classes_satisfy_twin_definition(args):
    n, seed = args
    g = random_graph(random.Random(seed), n)
    tp = neighborhood_classes(g)
    for u, v in itertools.combinations(range(n), 2):
        assert (tp.class_of[u] == tp.class_of[v]) == same_neighborhood_class(g, u, v)


@given(graph_seeds)
def test_class_count_invariant_under_relabeling(args):
    n, seed = args
    rng = random.Random(seed)
    g = random_graph(rng, n)
    perm = list(range(n))
    rng.shuffle(perm)
    assert neighborhood_classes(g.relabel(perm)).tau == neighborhood_classes(g).tau


@pytest.mark.parametrize("keys, tau", [
    ([(1, 0), (1, 0), (0, 1)], 2),
    ([(3,)] * 4, 1),
    ([(i,) for i in range(5)], 5),
    ([[1, 0], (1, 0)], 1),
])
def test_dedup_partition(keys, tau):
    assert dedup_partition(keys).tau == tau


def test_verify_holds_on_k4():
    rep = verify_target_equivalence(MaxCCutProblem(K4, 2).build())
    assert rep.holds and rep.witness is None and rep.checks_performed > 0


def test_verify_detects_wrong_partition():
    inst = MaxCCutProblem(P3, 2).build()
    inst.types = TypePartition.from_labels(["ab", "ab", "c"])
    rep = verify_target_equivalence(inst)
    assert not rep.holds
    i, a, x, y = rep.witness
    a = frozenset(a)
    assert x in a and y not in a
    assert inst.phi(i, (a - {x}) | {y}) != inst.phi(i, a)


def test_verify_singletons_trivially_hold():
    inst = MaxCCutProblem(P3, 2).build()
    inst.types = TypePartition.singletons(3)
    rep = verify_target_equivalence(inst)
    assert rep.holds and rep.checks_performed == 0


def test_verify_guards():
    g = Graph(17)
    inst = MaxCCutProblem(g, 2).build()
    with pytest.raises(UsageError):
        verify_target_equivalence(inst, exhaustive=True)
    with pytest.raises(UsageError):
        verify_target_equivalence(inst, samples=0)
    rep = verify_target_equivalence(inst, samples=500, seed=1)
    assert rep.holds and rep.checks_performed == 500


def test_sampled_check_finds_violation():
    # 14 isolated vertices plus one edge inside a wrongly merged class
    g = Graph(14, [(0, 1)])
    inst = MaxCCutProblem(g, 2).build()
    inst.types = TypePartition((0,) * 14, (14,))
    rep = verify_target_equivalence(inst, samples=5000, seed=2)
    assert not rep.holds


def test_max_context_limits_contexts():
    inst = MaxCCutProblem(P3, 2).build()
    inst.types = TypePartition.from_labels(["ab", "ab", "c"])
    # with |A| <= 1 the edge b-c never shows up in a context
    assert verify_target_equivalence(inst, max_context=1).holds
    assert not verify_target_equivalence(inst, max_context=2).holds


@pytest.mark.parametrize("kind", ADAPTERS)
def test_shipped_partitions_pass(kind):
    rng = random.Random(hash(kind) % 1000)
    for _ in range(10):
        p = random_problem(kind, rng, max_n=7)
        assert verify_target_equivalence(p.build()).holds, p


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ADAPTERS), st.integers(0, 10 ** 6))
def test_target_equivalence_is_an_equivalence(kind, seed):
    p = random_problem(kind, random.Random(seed), max_n=5)
    inst = p.build()
    n = inst.n
    rel = {(x, y): are_target_equivalent(inst, x, y) for x in range(n) for y in range(n)}
    for x in range(n):
        assert rel[x, x]
    for x, y in itertools.product(range(n), repeat=2):
        assert rel[x, y] == rel[y, x]
    for x, y, z in itertools.product(range(n), repeat=3):
        if rel[x, y] and rel[y, z]:
            assert rel[x, z]
