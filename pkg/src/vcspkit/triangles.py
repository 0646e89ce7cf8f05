"""Triangle enumeration, cost-triple classification and dichotomy verdicts.

A triangle is a set of assignments to three distinct variables; its triple
is the multiset of the three pairwise binary costs.  Five classification
schemes are supported:

* ``CSP``     crisp binaries, alphabet ``{<, >, 0, inf}``
* ``MAXCSP``  zero/one costs, alphabet ``{<, >, 0, 1}``
* ``ORDER``   order pattern of arbitrary costs, alphabet ``{delta, <, >, =}``
* ``MIN0``    pattern anchored at the instance-wide minimum binary cost
* ``MAXM``    pattern anchored at the instance-wide maximum binary cost

MIN0 and MAXM have a residual ``other`` type (all three costs off the
anchor), kept first-class so classification is total.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from .costs import Cost, ZERO
from .errors import ClassViolation
from .instances import BinaryInstance


class Scheme(enum.Enum):
    CSP = "csp"
    MAXCSP = "maxcsp"
    ORDER = "order"
    MIN0 = "min0"
    MAXM = "maxm"


OTHER = "other"

ALPHABET = {
    Scheme.CSP: frozenset({"0", "<", ">", "inf"}),
    Scheme.MAXCSP: frozenset({"0", "<", ">", "1"}),
    Scheme.ORDER: frozenset({"=", "<", ">", "delta"}),
    Scheme.MIN0: frozenset({"0", "<0", ">0", "delta0"}),
    Scheme.MAXM: frozenset({"M", "<M", ">M", "deltaM"}),
}

_ONE = Cost(1)


def classify_triple(costs, scheme: Scheme, m_value: Optional[Cost] = None) -> str:
    """Type of a multiset of three binary costs under the given scheme.

    For MIN0 the entries must already have the instance-wide minimum
    subtracted; for MAXM ``m_value`` is the instance-wide maximum.
    """
    t = sorted(costs)
    if len(t) != 3:
        raise ClassViolation(f"a triple has exactly 3 costs, got {len(t)}")
    a, b, c = t
    if scheme is Scheme.CSP:
        for x in t:
            if not (x == ZERO or x.is_infinite):
                raise ClassViolation(f"cost {x} outside the crisp range {{0, inf}}")
        infs = sum(1 for x in t if x.is_infinite)
        return ("0", "<", ">", "inf")[infs]
    if scheme is Scheme.MAXCSP:
        for x in t:
            if x != ZERO and x != _ONE:
                raise ClassViolation(f"cost {x} outside the range {{0, 1}}")
        ones = sum(1 for x in t if x == _ONE)
        return ("0", "<", ">", "1")[ones]
    if scheme is Scheme.ORDER:
        if a == c:
            return "="
        if a == b:
            return "<"
        if b == c:
            return ">"
        return "delta"
    if scheme is Scheme.MIN0:
        for x in t:
            if x.is_infinite:
                raise ClassViolation("min-anchored classification requires finite binary costs")
        if a < ZERO:
            raise ClassViolation("min-anchored triple has a negative normalised entry")
        if a > ZERO:
            return OTHER
        if c == ZERO:
            return "0"
        if b == ZERO:
            return "<0"
        return ">0" if b == c else "delta0"
    if scheme is Scheme.MAXM:
        if m_value is None or m_value.is_infinite:
            raise ClassViolation("max-anchored classification needs the finite instance maximum")
        for x in t:
            if x.is_infinite:
                raise ClassViolation("max-anchored classification requires finite binary costs")
            if x > m_value:
                raise ClassViolation(f"cost {x} exceeds the declared maximum {m_value}")
        if c < m_value:
            return OTHER
        if a == m_value:
            return "M"
        if b == m_value:
            return ">M"
        return "<M" if a == b else "deltaM"
    raise ClassViolation(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class TriangleProfile:
    """The set of triple types observed over all triangles of an instance."""

    scheme: Scheme
    observed: frozenset
    witnesses: Mapping[str, Tuple[int, int, int, int, int, int]]
    mu: Optional[Cost] = None       # subtracted minimum (MIN0 only)
    m_value: Optional[Cost] = None  # instance maximum (MAXM only)

    def types_sorted(self):
        return sorted(self.observed)


def _range_check(inst: BinaryInstance, scheme: Scheme):
    if scheme is Scheme.ORDER:
        return
    for (i, j), table in sorted(inst.binary.items()):
        for a, row in enumerate(table):
            for b, x in enumerate(row):
                if scheme is Scheme.CSP and not (x == ZERO or x.is_infinite):
                    raise ClassViolation(
                        f"crisp scheme: cost {x} at c[{i},{j}]({a},{b}) is neither 0 nor inf",
                        witness=[i, j, a, b, str(x)],
                    )
                if scheme is Scheme.MAXCSP and x != ZERO and x != _ONE:
                    raise ClassViolation(
                        f"zero/one scheme: cost {x} at c[{i},{j}]({a},{b})",
                        witness=[i, j, a, b, str(x)],
                    )
                if scheme in (Scheme.MIN0, Scheme.MAXM) and x.is_infinite:
                    raise ClassViolation(
                        f"anchored schemes require finite binary costs, found inf at c[{i},{j}]({a},{b})",
                        witness=[i, j, a, b, "inf"],
                    )


def binary_extremes(inst: BinaryInstance):
    """(min, max) binary cost over all variable pairs; absent tables count as 0."""
    lo, hi = None, None
    n = inst.n
    have_absent = False
    for i in range(n):
        for j in range(i + 1, n):
            table = inst.binary.get((i, j))
            if table is None:
                have_absent = True
                continue
            for row in table:
                for x in row:
                    lo = x if lo is None or x < lo else lo
                    hi = x if hi is None or x > hi else hi
    if have_absent or lo is None:
        lo = ZERO if lo is None else min(lo, ZERO)
        hi = ZERO if hi is None else max(hi, ZERO)
    return lo, hi


def profile(inst: BinaryInstance, scheme: Scheme) -> TriangleProfile:
    """Exact type set over all triangles, with one witness per observed type."""
    _range_check(inst, scheme)
    n = inst.n
    mu = None
    m_value = None
    if scheme is Scheme.MIN0:
        mu, _ = binary_extremes(inst)
    elif scheme is Scheme.MAXM:
        _, m_value = binary_extremes(inst)
    observed = {}
    zero_rows = {}

    def table_for(i, j):
        t = inst.binary.get((i, j))
        if t is not None:
            return t
        key = (len(inst.domains[i]), len(inst.domains[j]))
        if key not in zero_rows:
            zero_rows[key] = tuple(tuple(ZERO for _ in range(key[1])) for _ in range(key[0]))
        return zero_rows[key]

    for i in range(n):
        di = len(inst.domains[i])
        for j in range(i + 1, n):
            dj = len(inst.domains[j])
            t_ij = table_for(i, j)
            for k in range(j + 1, n):
                dk = len(inst.domains[k])
                t_ik = table_for(i, k)
                t_jk = table_for(j, k)
                for a in range(di):
                    row_ij = t_ij[a]
                    row_ik = t_ik[a]
                    for b in range(dj):
                        c_ij = row_ij[b]
                        row_jk = t_jk[b]
                        for c in range(dk):
                            triple = (c_ij, row_ik[c], row_jk[c])
                            if mu is not None and mu != ZERO:
                                triple = tuple(x - mu for x in triple)
                            tt = classify_triple(triple, scheme, m_value=m_value)
                            if tt not in observed:
                                observed[tt] = (i, a, j, b, k, c)
    return TriangleProfile(
        scheme=scheme,
        observed=frozenset(observed),
        witnesses=dict(observed),
        mu=mu,
        m_value=m_value,
    )


def check_jwp(inst: BinaryInstance):
    """True iff every triangle's triple is all-equal or has its two minima equal.

    Returns ``(ok, witness)`` with the first violating triangle in
    lexicographic (i, j, k, a, b, c) order, or None.
    """
    n = inst.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for a in range(len(inst.domains[i])):
                    for b in range(len(inst.domains[j])):
                        c_ij = inst.pair_cost(i, a, j, b)
                        for c in range(len(inst.domains[k])):
                            t = sorted((c_ij, inst.pair_cost(i, a, k, c), inst.pair_cost(j, b, k, c)))
                            if t[0] != t[1]:
                                return False, (i, a, j, b, k, c)
    return True, None


@dataclass(frozen=True)
class Verdict:
    """Dichotomy outcome for a profile: tractable (with a solver), JWP-only,
    NP-hard, or trivially small-domain."""

    kind: str  # "tractable" | "tractable-unimplemented" | "np-hard" | "trivial-small-domain"
    solver: Optional[str]
    rule: str

    def to_doc(self):
        return {"kind": self.kind, "solver": self.solver, "rule": self.rule}


# Tractable cells mapped to implemented solvers, in preference order.
# Cells solvable only through the two-smallest-equal triangle property have
# no dedicated solver here (solver None).
_SOLVER_CELLS = {
    Scheme.CSP: (
        (frozenset({">", "0", "inf"}), "sac"),
        (frozenset({"<", ">", "inf"}), "trivial"),
        (frozenset({"<", "0", "inf"}), None),
    ),
    Scheme.MAXCSP: (
        (frozenset({">", "1"}), "matching-cardinality"),
        (frozenset({">", "0"}), "lr"),
        (frozenset({"<", ">"}), "trivial"),
        (frozenset({"<", "0", "1"}), None),
    ),
    Scheme.ORDER: (
        (frozenset({"<", "="}), None),
    ),
    Scheme.MIN0: (
        (frozenset({">0", "0"}), "min0-structure"),
        (frozenset({"delta0", "<0", ">0"}), "trivial"),
        (frozenset({"<0", "0"}), None),
    ),
    Scheme.MAXM: (
        (frozenset({">M", "M"}), "weighted-matching"),
        (frozenset({"deltaM", "<M", ">M"}), "trivial"),
        (frozenset({"<M", "M"}), None),
    ),
}

_RULES = {
    Scheme.CSP: "crisp-triangle-dichotomy",
    Scheme.MAXCSP: "zero-one-triangle-dichotomy",
    Scheme.ORDER: "order-triangle-dichotomy",
    Scheme.MIN0: "min-anchored-triangle-dichotomy",
    Scheme.MAXM: "max-anchored-triangle-dichotomy",
}
_RULE_CSP_SOFT = "crisp-binary-soft-unary-dichotomy"


def is_tractable_cell(scheme: Scheme, observed: frozenset) -> bool:
    """The dichotomy's tractable/NP-hard split, independent of domain size."""
    s = frozenset(observed)
    if scheme is Scheme.CSP:
        return not {"<", ">", "0"} <= s
    if scheme is Scheme.MAXCSP:
        return not (
            {"<", ">", "0"} <= s or {"<", ">", "1"} <= s or {">", "0", "1"} <= s
        )
    if scheme is Scheme.ORDER:
        return s <= frozenset({"<", "="})
    if scheme is Scheme.MIN0:
        if OTHER in s:
            return False
        return (
            s <= frozenset({"<0", "0"})
            or s <= frozenset({">0", "0"})
            or s <= frozenset({"delta0", "<0", ">0"})
        )
    if scheme is Scheme.MAXM:
        if OTHER in s:
            return False
        return (
            s <= frozenset({"<M", "M"})
            or s <= frozenset({">M", "M"})
            or s <= frozenset({"deltaM", "<M", ">M"})
        )
    raise ClassViolation(f"unknown scheme {scheme!r}")


def solver_for(scheme: Scheme, observed: frozenset) -> Optional[str]:
    """Implemented solver id for a tractable profile, else None."""
    s = frozenset(observed)
    for cell, solver in _SOLVER_CELLS[scheme]:
        if s <= cell and solver is not None:
            return solver
    return None


def verdict(prof: TriangleProfile, domain_max: int, soft_unaries_present: bool) -> Verdict:
    """Dichotomy verdict for a profile at the given maximum domain size."""
    scheme = prof.scheme
    s = frozenset(prof.observed)
    rule = _RULES[scheme]
    if scheme is Scheme.CSP:
        if soft_unaries_present:
            rule = _RULE_CSP_SOFT
            if domain_max <= 1:
                return Verdict("trivial-small-domain", None, rule)
        elif domain_max <= 2:
            return Verdict("trivial-small-domain", None, rule)
    else:
        if domain_max <= 1:
            return Verdict("trivial-small-domain", None, rule)
    if not is_tractable_cell(scheme, s):
        return Verdict("np-hard", None, rule)
    solver = solver_for(scheme, s)
    if solver is None:
        return Verdict("tractable-unimplemented", None, rule)
    return Verdict("tractable", solver, rule)


def has_soft_unaries(inst: BinaryInstance) -> bool:
    """True if some unary cost lies outside {0, inf}."""
    return any(
        not (c == ZERO or c.is_infinite) for table in inst.unary for c in table
    )


def profile_report(inst: BinaryInstance, scheme: Scheme) -> dict:
    """JSON-ready report: scheme, observed types, witnesses, verdict, rule."""
    prof = profile(inst, scheme)
    v = verdict(prof, inst.max_domain, has_soft_unaries(inst))
    doc = {
        "scheme": scheme.value,
        "observed": prof.types_sorted(),
        "witnesses": {t: list(w) for t, w in sorted(prof.witnesses.items())},
        "verdict": v.to_doc(),
    }
    if prof.mu is not None:
        doc["normalised_minimum"] = str(prof.mu)
        pairs = inst.n * (inst.n - 1) // 2
        doc["normalisation_offset"] = str(prof.mu * pairs) if pairs else "0"
    if prof.m_value is not None:
        doc["maximum_cost"] = str(prof.m_value)
    return doc
