"""Renaming for Boolean count-cost instances.

A constraint g(|x cap A|) on a set of literals A can be replaced by the
equivalent constraint on the negated literals with the count function read
backwards.  Whether some subset of constraints can be renamed to make the
family cross-free reduces to 2-SAT over one flag per constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .cfc import CROSS_FREE, LAMINAR, check_convexity, check_family, solve_cfc
from .costs import INF
from .errors import ClassViolation, InstanceError
from .instances import AssignmentSet, CountFunction, CountInstance, evaluate_count
from .results import SolveResult


def _require_boolean(domains):
    for i, dom in enumerate(domains):
        if len(dom) != 2:
            raise ClassViolation(
                f"renaming is defined over Boolean domains; variable {i} has {len(dom)} values"
            )


def rename_set(aset: AssignmentSet, domains) -> AssignmentSet:
    """Negate the members elementwise and read g backwards: g'(z) = g(m - z)
    with m the member count (out-of-range entries are infinite)."""
    _require_boolean(domains)
    members = frozenset((i, 1 - a) for i, a in aset.members)
    m = len(aset.members)
    s = aset.var_count
    table = tuple(
        aset.g.table[m - z] if 0 <= m - z <= s else INF for z in range(s + 1)
    )
    return AssignmentSet(members, CountFunction(table))


@dataclass(frozen=True)
class TwoSatInstance:
    """Conjunction of 2-literal clauses; literal k>0 means variable k-1 true,
    k<0 its negation."""

    num_vars: int
    clauses: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 2:
                raise InstanceError("every clause must have exactly 2 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InstanceError(f"literal {lit} out of range")


def solve_2sat(inst: TwoSatInstance):
    """A satisfying assignment via the implication graph's strongly connected
    components, or None.

    Deterministic model choice: components are explored from the negative
    literal nodes first, which prefers the all-false assignment whenever the
    constraints leave a variable's component free.
    """
    n = inst.num_vars
    size = 2 * n

    def node(lit):
        v = abs(lit) - 1
        return 2 * v if lit > 0 else 2 * v + 1

    def negated(x):
        return x ^ 1

    adj = [[] for _ in range(size)]
    for a, b in inst.clauses:
        adj[node(-a)].append(node(b))
        adj[node(-b)].append(node(a))

    index = [None] * size
    low = [0] * size
    on_stack = [False] * size
    stack = []
    comp = [None] * size
    counter = 0
    comp_count = 0

    start_order = [2 * v + 1 for v in range(n)] + [2 * v for v in range(n)]
    for root in start_order:
        if index[root] is not None:
            continue
        # iterative Tarjan
        work = [(root, 0)]
        while work:
            x, k = work[-1]
            if k == 0:
                index[x] = low[x] = counter
                counter += 1
                stack.append(x)
                on_stack[x] = True
            advanced = False
            while k < len(adj[x]):
                y = adj[x][k]
                k += 1
                if index[y] is None:
                    work[-1] = (x, k)
                    work.append((y, 0))
                    advanced = True
                    break
                if on_stack[y]:
                    low[x] = min(low[x], index[y])
            if advanced:
                continue
            work.pop()
            if low[x] == index[x]:
                while True:
                    y = stack.pop()
                    on_stack[y] = False
                    comp[y] = comp_count
                    if y == x:
                        break
                comp_count += 1
            if work:
                px, pk = work[-1]
                low[px] = min(low[px], low[x])

    model = []
    for v in range(n):
        pos, neg = comp[2 * v], comp[2 * v + 1]
        if pos == neg:
            return None
        # smaller component id completed first, i.e. lies later in the
        # topological order of implications, so it is the safe choice
        model.append(pos < neg)
    return tuple(model)


def _incompletely_overlap(a, b, universe):
    return bool(a & b) and not a <= b and not b <= a and (a | b) != universe


@dataclass(frozen=True)
class Renaming:
    flags: Tuple[bool, ...]
    renamed: CountInstance


def recognize_renamable(inst: CountInstance) -> Optional[Renaming]:
    """Find per-constraint renaming flags making the family cross-free.

    Overlapping pairs force opposite flags; pairs that would overlap after
    one renaming force equal flags.  The 2-SAT model is post-verified: a
    renamed family that still fails the cross-freeness check is reported as
    not renamable rather than trusted.
    """
    _require_boolean(inst.domains)
    for k, aset in enumerate(inst.sets):
        ok, at = check_convexity(aset.g)
        if not ok:
            raise ClassViolation(
                f"count function of set {k} is not convex (violated at count {at})"
            )
    universe = inst.universe()
    members = [aset.members for aset in inst.sets]
    negated = [frozenset((i, 1 - a) for i, a in ms) for ms in members]
    r = len(members)
    clauses = []
    for i in range(r):
        for j in range(i + 1, r):
            if _incompletely_overlap(members[i], members[j], universe):
                # exactly one of the two must be renamed
                clauses.append((i + 1, j + 1))
                clauses.append((-(i + 1), -(j + 1)))
            if _incompletely_overlap(negated[i], members[j], universe):
                # renaming one without the other would create an overlap
                clauses.append((-(i + 1), j + 1))
                clauses.append((i + 1, -(j + 1)))
    model = solve_2sat(TwoSatInstance(r, tuple(clauses)))
    if model is None:
        return None
    renamed_sets = [
        rename_set(aset, inst.domains) if flag else aset
        for aset, flag in zip(inst.sets, model)
    ]
    renamed = CountInstance.build(
        inst.domains, renamed_sets, names=inst.names, constant=inst.constant
    )
    kind, _ = check_family([a.members for a in renamed.sets], universe)
    if kind not in (LAMINAR, CROSS_FREE):
        return None
    return Renaming(model, renamed)


def solve_renamable(inst: CountInstance, check=True) -> SolveResult:
    """Solve a renamable instance by solving its cross-free renaming.

    Renaming changes constraints, not variables, so the assignment maps back
    unchanged; it is re-evaluated against the original instance.
    """
    ren = recognize_renamable(inst)
    if ren is None:
        raise ClassViolation("instance is not renamable cross-free")
    inner = solve_cfc(ren.renamed, check=check)
    got = evaluate_count(inst, inner.assignment)
    if got != inner.cost:
        raise InstanceError(
            f"renamed solve disagrees with the original objective: {got} != {inner.cost}"
        )
    cert = dict(inner.certificate)
    cert["renamed_constraints"] = [k for k, f in enumerate(ren.flags) if f]
    return SolveResult(inner.assignment, inner.cost, "renamable-cfc", cert)
