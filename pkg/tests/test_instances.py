import random
from fractions import Fraction

import pytest

from vcspkit.costs import Cost, INF, ZERO
from vcspkit.errors import InstanceError
from vcspkit.instances import (
    AssignmentSet,
    BinaryInstance,
    CountFunction,
    CountInstance,
    evaluate_binary,
    evaluate_count,
)


def _random_binary(rng, n, d):
    unary = {i: [Cost(rng.randint(0, 5)) for _ in range(d)] for i in range(n)}
    binary = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.8:
                binary[(i, j)] = [
                    [Cost(Fraction(rng.randint(0, 8), rng.randint(1, 3))) for _ in range(d)]
                    for _ in range(d)
                ]
    return BinaryInstance.build([[str(v) for v in range(d)]] * n, unary=unary, binary=binary)


def test_all_zero_instance_evaluates_to_zero():
    inst = BinaryInstance.build([["a", "b"], ["a", "b"]])
    assert evaluate_binary(inst, (0, 1)) == ZERO


def test_single_term_sum():
    inst = BinaryInstance.build(
        [["a"], ["b"]],
        unary={0: [Cost(1)]},
        binary={(0, 1): [[Cost(3)]]},
    )
    assert evaluate_binary(inst, (0, 0)) == Cost(4)


def test_evaluate_binary_matches_independent_recount():
    rng = random.Random(99)
    for _ in range(60):
        n, d = rng.randint(1, 4), rng.randint(1, 3)
        inst = _random_binary(rng, n, d)
        x = tuple(rng.randrange(d) for _ in range(n))
        # term-by-term recount, written independently of evaluate_binary
        expected = Fraction(0)
        for i in range(n):
            expected += inst.unary[i][x[i]].value
        for i in range(n):
            for j in range(i + 1, n):
                table = inst.binary.get((i, j))
                if table is not None:
                    expected += table[x[i]][x[j]].value
        assert evaluate_binary(inst, x) == Cost(expected)


def test_solution_validation():
    inst = BinaryInstance.build([["a", "b"], ["a"]])
    with pytest.raises(InstanceError):
        evaluate_binary(inst, (0,))
    with pytest.raises(InstanceError):
        evaluate_binary(inst, (0, 1))


def test_instance_shape_validation():
    with pytest.raises(InstanceError):
        BinaryInstance.build([[]])
    with pytest.raises(InstanceError):
        BinaryInstance.build([["a"], ["b"]], binary={(1, 0): [[ZERO]]})
    with pytest.raises(InstanceError):
        BinaryInstance.build([["a"], ["b", "c"]], binary={(0, 1): [[ZERO]]})


def test_count_function_support():
    g = CountFunction((INF, Cost(2), Cost(3), INF))
    assert g.support == (1, 2)
    assert g.size == 3
    empty = CountFunction((INF, INF))
    assert empty.support is None


def test_count_function_rejects_gaps():
    with pytest.raises(InstanceError):
        CountFunction((ZERO, INF, ZERO))


def test_count_instance_merges_duplicates():
    members = frozenset([(0, 0), (1, 1)])
    one = AssignmentSet(members, CountFunction((ZERO, Cost(1), Cost(2))))
    other = AssignmentSet(members, CountFunction((Cost(1), Cost(1), Cost(1))))
    inst = CountInstance.build([["a", "b"], ["a", "b"]], [one, other])
    assert len(inst.sets) == 1
    assert inst.sets[0].g.table == (Cost(1), Cost(2), Cost(3))


def test_evaluate_count_basics():
    inst = CountInstance.build([["a", "b"]], [], constant=Cost(0))
    assert evaluate_count(inst, (0,)) == ZERO
    # a set holding every value of one variable is always hit exactly once
    full = AssignmentSet(frozenset([(0, 0), (0, 1)]), CountFunction((INF, ZERO)))
    inst = CountInstance.build([["a", "b"]], [full])
    assert evaluate_count(inst, (0,)) == ZERO
    assert evaluate_count(inst, (1,)) == ZERO


def test_cardinality_penalty_counts_overuse():
    # one value capped at 1 over four variables; using it 3 times costs 2
    n = 4
    members = frozenset((i, 0) for i in range(n))
    table = [ZERO if m <= 1 else Cost(m - 1) for m in range(n + 1)]
    inst = CountInstance.build(
        [["d", "e"]] * n, [AssignmentSet(members, CountFunction(tuple(table)))]
    )
    assert evaluate_count(inst, (0, 0, 0, 1)) == Cost(2)


def test_evaluate_count_invariant_under_reordering_and_merging():
    rng = random.Random(5)
    from vcspkit.testkit import gen_random_laminar

    for seed in range(15):
        inst = gen_random_laminar(3, 2, seed)
        perm = list(inst.sets)
        rng.shuffle(perm)
        shuffled = CountInstance.build(
            inst.domains, perm, names=inst.names, constant=inst.constant
        )
        # duplicate one set by splitting its function into two halves
        if inst.sets:
            first = inst.sets[0]
            zero = AssignmentSet(first.members, CountFunction.zero(first.var_count))
            doubled = CountInstance.build(
                inst.domains,
                list(inst.sets) + [zero],
                names=inst.names,
                constant=inst.constant,
            )
        for x in _all_solutions(inst):
            base = evaluate_count(inst, x)
            assert evaluate_count(shuffled, x) == base
            if inst.sets:
                assert evaluate_count(doubled, x) == base


def _all_solutions(inst):
    import itertools

    return itertools.product(*(range(len(d)) for d in inst.domains))
