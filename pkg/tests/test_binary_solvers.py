import random
from fractions import Fraction

import pytest

from vcspkit.binary_solvers import (
    arc_consistency,
    dispatch,
    singleton_arc_consistency,
    solve_lr_class,
    solve_matching_cardinality_class,
    solve_min0_class,
    solve_sac_class,
    solve_trivial_class,
    solve_weighted_matching_class,
)
from vcspkit.costs import Cost, INF, ZERO
from vcspkit.errors import ClassViolation
from vcspkit.instances import BinaryInstance, evaluate_binary
from vcspkit.testkit import gen_matching_encoding, gen_profile, oracle_binary
from vcspkit.triangles import Scheme

C = Cost


def crisp(rows):
    return [[INF if v else ZERO for v in row] for row in rows]


def test_arc_consistency_no_conflicts_keeps_domains():
    inst = BinaryInstance.build(
        [["a", "b"], ["a", "b"]], binary={(0, 1): crisp([[0, 0], [0, 0]])}
    )
    domains, wiped = arc_consistency(inst)
    assert domains == [[0, 1], [0, 1]] and not wiped


def test_arc_consistency_removes_unsupported_value():
    inst = BinaryInstance.build(
        [["a", "b"], ["c"]], binary={(0, 1): crisp([[1], [0]])}
    )
    domains, wiped = arc_consistency(inst)
    assert domains[0] == [1] and not wiped


def test_arc_consistency_matches_exhaustive_support_oracle():
    rng = random.Random(42)
    for _ in range(60):
        n, d = rng.randint(2, 4), rng.randint(1, 3)
        binary = {}
        for i in range(n):
            for j in range(i + 1, n):
                binary[(i, j)] = [
                    [INF if rng.random() < 0.35 else ZERO for _ in range(d)]
                    for _ in range(d)
                ]
        inst = BinaryInstance.build([["v%d" % k for k in range(d)]] * n, binary=binary)
        domains, wiped = arc_consistency(inst)
        # reference: repeatedly drop values lacking a zero-support, until stable
        ref = [set(range(d)) for _ in range(n)]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                for a in list(ref[i]):
                    for j in range(n):
                        if i == j:
                            continue
                        if not any(inst.pair_cost(i, a, j, b) == ZERO for b in ref[j]):
                            ref[i].discard(a)
                            changed = True
                            break
        if wiped:
            assert any(not r for r in ref)
        else:
            assert [sorted(r) for r in ref] == domains


def test_sac_prunes_two_step_wipeout():
    # asserting v0=a leaves v1 a single value that v2 cannot match
    inst = BinaryInstance.build(
        [["a", "b"], ["c", "d"], ["e", "f"]],
        binary={
            (0, 1): crisp([[0, 1], [0, 0]]),
            (1, 2): crisp([[1, 1], [0, 0]]),
            (0, 2): crisp([[0, 0], [0, 0]]),
        },
    )
    domains, wiped = singleton_arc_consistency(inst)
    assert not wiped
    assert 0 not in domains[0]


def test_sac_solver_examples():
    # all binaries zero: per-variable unary minima
    inst = BinaryInstance.build(
        [["a", "b"]] * 3,
        unary={0: [C(2), C(1)], 1: [C(5), C(7)], 2: [ZERO, C(4)]},
    )
    res = solve_sac_class(inst)
    assert res.cost == C(6)
    assert res.assignment == (1, 0, 0)
    # single variable
    inst = BinaryInstance.build([["a", "b"]], unary={0: [C(3), C(1)]})
    assert solve_sac_class(inst).cost == C(1)


def test_sac_solver_handles_wipeout():
    inst = BinaryInstance.build(
        [["a"], ["b"]], binary={(0, 1): crisp([[1]])}
    )
    res = solve_sac_class(inst)
    assert res.cost == INF
    assert evaluate_binary(inst, res.assignment) == INF


def test_trivial_crisp_three_variables_is_infeasible():
    inst = gen_profile(4, 2, {"<", ">", "inf"}, Scheme.CSP, seed=0)
    res = solve_trivial_class(inst)
    assert res.cost == INF


def test_trivial_small_brute_force():
    inst = gen_profile(2, 3, {"<", ">", "inf"}, Scheme.CSP, seed=1)
    res = solve_trivial_class(inst)
    assert res.cost == oracle_binary(inst).cost


def test_trivial_rejects_oversized_two_colour_instance():
    inst = gen_profile(5, 2, {"<", ">"}, Scheme.MAXCSP, seed=0)
    big = BinaryInstance.build(
        [["0", "1"]] * 6,
        binary={
            (i, j): [[C(1), C(1)], [C(1), C(1)]] for i in range(6) for j in range(i + 1, 6)
        },
    )
    solve_trivial_class(inst)  # in class, fine
    with pytest.raises(ClassViolation):
        solve_trivial_class(big, scheme=Scheme.MAXCSP)


def test_lr_quadratic_term_value():
    # with four variables and one cross pick the binary cost is 4
    n, k = 4, 1
    assert (n - 1) + k * (n - 2 - k) == 4


def test_lr_all_zero_instance():
    inst = BinaryInstance.build([["a", "b"]] * 4)
    res = solve_lr_class(inst)
    assert res.cost == ZERO


def test_lr_reports_signature_violations():
    # a {0,0,1} triangle breaks the two-sided structure
    inst = BinaryInstance.build(
        [["a"]] * 3,
        binary={(0, 1): [[C(1)]], (0, 2): [[ZERO]], (1, 2): [[ZERO]]},
    )
    with pytest.raises(ClassViolation):
        solve_lr_class(inst, check=False)


def test_matching_cardinality_path_graph():
    # path on three vertices: maximum matching 1, optimum pairs - 1 = 2
    inst = gen_matching_encoding(3, [(0, 1), (1, 2)])
    res = solve_matching_cardinality_class(inst)
    assert res.cost == C(2)
    assert res.certificate["matching_size"] == 1


def test_matching_cardinality_no_zero_cells():
    inst = BinaryInstance.build(
        [["a", "b"]] * 4,
        binary={
            (i, j): [[C(1), C(1)], [C(1), C(1)]] for i in range(4) for j in range(i + 1, 4)
        },
    )
    res = solve_matching_cardinality_class(inst)
    assert res.cost == C(6)
    assert res.certificate["matching_size"] == 0


def test_matching_cardinality_petersen():
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
             (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
             (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)]
    inst = gen_matching_encoding(10, edges)
    res = solve_matching_cardinality_class(inst)
    assert res.certificate["matching_size"] == 5
    assert res.cost == C(45 - 5)


def test_min0_star_case():
    inst = gen_profile(5, 3, {">0", "0"}, Scheme.MIN0, seed=101)
    res = solve_min0_class(inst)
    assert res.cost == oracle_binary(inst).cost


def test_min0_single_value_case():
    # one distinct non-zero cost spread over two disjoint-scope tables
    side = {(i, a): (i + a) % 2 for i in range(4) for a in range(2)}
    binary = {
        (i, j): [
            [C(3) if side[(i, a)] != side[(j, b)] else ZERO for b in range(2)]
            for a in range(2)
        ]
        for i in range(4)
        for j in range(i + 1, 4)
    }
    unary = {i: [C(Fraction(1, 2)), C(2)] for i in range(4)}
    inst = BinaryInstance.build([["0", "1"]] * 4, unary=unary, binary=binary)
    res = solve_min0_class(inst)
    assert res.certificate["case"] == "single-value"
    assert res.cost == oracle_binary(inst).cost


def test_min0_rejects_two_values_on_disjoint_scopes():
    binary = {
        (0, 1): [[C(1)]],
        (2, 3): [[C(2)]],
        (0, 2): [[ZERO]], (0, 3): [[ZERO]], (1, 2): [[ZERO]], (1, 3): [[ZERO]],
    }
    inst = BinaryInstance.build([["a"]] * 4, binary=binary)
    with pytest.raises(ClassViolation) as err:
        solve_min0_class(inst, check=False)
    assert err.value.witness is not None


def test_weighted_matching_constant_tables():
    m = C(5)
    inst = BinaryInstance.build(
        [["a", "b"]] * 4,
        binary={
            (i, j): [[m, m], [m, m]] for i in range(4) for j in range(i + 1, 4)
        },
    )
    res = solve_weighted_matching_class(inst)
    assert res.cost == C(30)  # 6 pairs * 5
    assert res.certificate["matching"] == []


def test_weighted_matching_identity_holds():
    for seed in range(25):
        inst = gen_profile(6, 3, {">M", "M"}, Scheme.MAXM, seed=seed)
        res = solve_weighted_matching_class(inst)
        cert = res.certificate
        weight = _parse(cert["matching_weight"])
        m_val = _parse(cert["m_value"])
        offset = _parse(cert["unary_offset"])
        pairs = cert["pair_count"]
        assert weight + (res.cost - offset) == m_val * pairs


def _parse(text):
    from vcspkit.costs import parse_cost

    return parse_cost(text)


@pytest.mark.parametrize(
    "solver,scheme,types,n,d,count",
    [
        (solve_sac_class, Scheme.CSP, {">", "0", "inf"}, 6, 3, 40),
        (solve_trivial_class, Scheme.CSP, {"<", ">", "inf"}, 5, 3, 25),
        (solve_trivial_class, Scheme.MAXCSP, {"<", ">"}, 5, 3, 25),
        (solve_lr_class, Scheme.MAXCSP, {">", "0"}, 6, 3, 40),
        (solve_matching_cardinality_class, Scheme.MAXCSP, {">", "1"}, 6, 3, 40),
        (solve_min0_class, Scheme.MIN0, {">0", "0"}, 6, 3, 40),
        (solve_weighted_matching_class, Scheme.MAXM, {">M", "M"}, 6, 3, 40),
    ],
)
def test_solver_agrees_with_oracle(solver, scheme, types, n, d, count):
    rng = random.Random(hash((scheme.value, tuple(sorted(types)))) & 0xFFFF)
    for _ in range(count):
        nn = rng.randint(2, n)
        dd = rng.randint(1, d)
        seed = rng.randrange(2**30)
        inst = gen_profile(nn, dd, types, scheme, seed)
        res = solver(inst)
        want = oracle_binary(inst)
        assert res.cost == want.cost, f"seed {seed} n={nn} d={dd}"
        assert evaluate_binary(inst, res.assignment) == res.cost


def test_dispatch_routes_to_sac():
    inst = gen_profile(4, 3, {">", "0", "inf"}, Scheme.CSP, seed=5)
    res = dispatch(inst)
    assert res.solver == "sac"
    assert res.cost == oracle_binary(inst).cost


def test_dispatch_routes_to_weighted_matching():
    inst = gen_profile(5, 3, {">M", "M"}, Scheme.MAXM, seed=6)
    res = dispatch(inst)
    assert res.solver == "weighted-matching"


def test_dispatch_falls_back_to_oracle_on_jwp_cells():
    inst = gen_profile(4, 2, {"<", "="}, Scheme.ORDER, seed=7)
    res = dispatch(inst)
    assert res.solver == "oracle"
    kinds = {v["kind"] for v in res.verdicts}
    assert "tractable-unimplemented" in kinds
    assert res.cost == oracle_binary(inst).cost


def test_dispatch_reports_unsolved_over_budget():
    inst = gen_profile(4, 2, {"<", "="}, Scheme.ORDER, seed=8)
    res = dispatch(inst, oracle_budget=3)
    assert not res.solved
    assert res.verdicts


def test_dispatch_is_deterministic():
    inst = gen_profile(5, 3, {">", "0"}, Scheme.MAXCSP, seed=9)
    a = dispatch(inst)
    b = dispatch(inst)
    assert a == b


def test_dispatch_small_domain_still_uses_mapped_solver():
    # a fully crisp two-value instance is trivially tractable, but its
    # profile still maps to a solver, which beats an oracle fallback
    base = gen_profile(5, 2, {">", "0", "inf"}, Scheme.CSP, seed=10)
    inst = BinaryInstance.build(
        base.domains, names=base.names, binary=dict(base.binary)
    )
    res = dispatch(inst)
    assert res.solver == "sac"
    assert any(v["kind"] == "trivial-small-domain" for v in res.verdicts)
    assert res.cost == oracle_binary(inst).cost
