"""Minimum-cost integral flow with convex piecewise-linear arc costs.

Arcs carry a demand/capacity window [lo, hi] and a cost table over flow
amounts, finite exactly on [lo, hi] and convex there.  The solver expands
each arc into unit steps with non-decreasing marginal costs and runs
successive shortest augmenting paths with node potentials.  Units with
negative marginal cost are saturated up front (their removal stays
available through residual arcs), which keeps every residual cost
non-negative from the start, even on cyclic networks.  All arithmetic is
exact: marginals are rescaled to integers by their common denominator and
the final cost is re-read from the original tables.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Tuple

from .costs import Cost, cost_sum
from .errors import InstanceError
from .instances import CountFunction


@dataclass(frozen=True)
class Arc:
    """Directed arc with flow window [lo, hi] and a convex cost table."""

    tail: int
    head: int
    lo: int
    hi: int
    cost: CountFunction

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi):
            raise InstanceError(f"arc window [{self.lo}, {self.hi}] is invalid")
        if self.cost.size != self.hi:
            raise InstanceError(
                f"arc cost table covers 0..{self.cost.size}, expected 0..{self.hi}"
            )
        if self.cost.support != (self.lo, self.hi):
            raise InstanceError(
                f"arc cost must be finite exactly on [{self.lo}, {self.hi}], "
                f"got support {self.cost.support}"
            )
        marginals(self.cost)  # raises on non-convex tables


def marginals(cost: CountFunction) -> Tuple[Fraction, ...]:
    """First differences of the finite part; raises unless non-decreasing."""
    support = cost.support
    if support is None:
        return ()
    lo, hi = support
    diffs = []
    for k in range(lo + 1, hi + 1):
        diffs.append(cost.table[k].value - cost.table[k - 1].value)
    for a, b in zip(diffs, diffs[1:]):
        if b < a:
            raise InstanceError("arc cost is not convex on its window")
    return tuple(diffs)


@dataclass(frozen=True)
class ExpandedArc:
    """Unit-step expansion of a convex arc: forced units plus unit marginals."""

    forced_units: int
    base_cost: Cost
    unit_marginals: Tuple[Fraction, ...]


def expand_convex_arc(arc: Arc) -> ExpandedArc:
    """Split an arc into lo forced units and hi-lo unit arcs with marginal costs.

    The marginals are non-decreasing, so any min-cost flow on the expansion
    induces a min-cost flow on the original arc.
    """
    return ExpandedArc(arc.lo, arc.cost.table[arc.lo], marginals(arc.cost))


@dataclass(frozen=True)
class FlowNetwork:
    num_nodes: int
    source: int
    sink: int
    value: int
    arcs: Tuple[Arc, ...]

    def __post_init__(self):
        for node in (self.source, self.sink):
            if not (0 <= node < self.num_nodes):
                raise InstanceError(f"node {node} outside range")
        if self.value < 0:
            raise InstanceError("required flow value must be non-negative")
        for arc in self.arcs:
            for node in (arc.tail, arc.head):
                if not (0 <= node < self.num_nodes):
                    raise InstanceError(f"arc endpoint {node} outside range")


@dataclass(frozen=True)
class Flow:
    amounts: Tuple[int, ...]
    total: Cost


@dataclass(frozen=True)
class Infeasible:
    """No feasible flow; witness_arc is an arc whose demand cannot be routed
    (None when the required value itself is unreachable)."""

    witness_arc: Optional[int] = None


def _compress(values):
    vals, ends = [], []
    for v in values:
        if vals and vals[-1] == v:
            ends[-1] += 1
        else:
            vals.append(v)
            ends.append((ends[-1] if ends else 0) + 1)
    return vals, ends


def min_convex_cost_flow(net: FlowNetwork):
    """An integral feasible flow of the required value minimising total cost.

    Returns a Flow, or Infeasible when no feasible flow exists.

    Successive shortest paths in primal-dual form: one Dijkstra per phase
    establishes node potentials, then depth-first search pushes blocks of
    units along zero-reduced-cost paths until none remain.  Pushes never
    cross a marginal-cost breakpoint, which keeps all residual reduced
    costs non-negative.
    """
    n_arcs = len(net.arcs)
    expansions = [expand_convex_arc(a) for a in net.arcs]

    denom = lcm(*(m.denominator for exp in expansions for m in exp.unit_marginals)) \
        if any(exp.unit_marginals for exp in expansions) else 1

    num_nodes = net.num_nodes + 2
    s_node, t_node = net.num_nodes, net.num_nodes + 1

    # required net e-inflow per node, from arc demands and the value forcing:
    # a node whose fixed outflow exceeds its fixed inflow must be fed by the
    # artificial source, and vice versa
    g = [0] * num_nodes
    for arc in net.arcs:
        g[arc.tail] += arc.lo
        g[arc.head] -= arc.lo
    g[net.sink] += net.value
    g[net.source] -= net.value

    tails, heads, vals, ends, caps, flows = [], [], [], [], [], []

    def add_residual(tail, head, seg_vals, seg_ends, e0=0):
        tails.append(tail)
        heads.append(head)
        vals.append(seg_vals)
        ends.append(seg_ends)
        caps.append(seg_ends[-1] if seg_ends else 0)
        flows.append(e0)

    for arc, exp in zip(net.arcs, expansions):
        scaled = [int(m * denom) for m in exp.unit_marginals]
        seg_vals, seg_ends = _compress(scaled)
        # saturate negative-marginal units so residual costs start non-negative
        presat = sum(1 for m in scaled if m < 0)
        if presat:
            g[arc.tail] += presat
            g[arc.head] -= presat
        add_residual(arc.tail, arc.head, seg_vals, seg_ends, e0=presat)

    target = 0
    for x in range(net.num_nodes):
        if g[x] < 0:
            add_residual(s_node, x, [0], [-g[x]])
            target += -g[x]
        elif g[x] > 0:
            add_residual(x, t_node, [0], [g[x]])

    adjacency = [[] for _ in range(num_nodes)]
    for aidx in range(len(tails)):
        adjacency[tails[aidx]].append(2 * aidx)
        adjacency[heads[aidx]].append(2 * aidx + 1)
    adjacency = [tuple(codes) for codes in adjacency]

    pot = [0] * num_nodes
    pushed = 0
    inf = float("inf")
    visited = [0] * num_nodes
    stamp = 0

    while pushed < target:
        # Dijkstra over residual reduced costs
        dist = [inf] * num_nodes
        dist[s_node] = 0
        heap = [(0, s_node)]
        done = [False] * num_nodes
        while heap:
            d, x = heapq.heappop(heap)
            if done[x]:
                continue
            done[x] = True
            if x == t_node:
                break
            px = pot[x]
            for code in adjacency[x]:
                aidx = code >> 1
                if code & 1 == 0:
                    e = flows[aidx]
                    if e >= caps[aidx]:
                        continue
                    w = vals[aidx][bisect_left(ends[aidx], e + 1)]
                    y = heads[aidx]
                else:
                    e = flows[aidx]
                    if e <= 0:
                        continue
                    w = -vals[aidx][bisect_left(ends[aidx], e)]
                    y = tails[aidx]
                nd = d + w + px - pot[y]
                if nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        d_t = dist[t_node]
        if d_t == inf:
            return Infeasible(
                _infeasibility_witness(net, tails, heads, caps, flows, s_node, n_arcs)
            )
        for x in range(num_nodes):
            dx = dist[x]
            pot[x] += d_t if dx > d_t else dx
        # phase: depth-first blocks along zero-reduced-cost admissible arcs
        ptr = [0] * num_nodes
        while pushed < target:
            stamp += 1
            visited[s_node] = stamp
            path = []
            x = s_node
            reached = False
            while True:
                advanced = False
                codes = adjacency[x]
                px = pot[x]
                while ptr[x] < len(codes):
                    code = codes[ptr[x]]
                    aidx = code >> 1
                    if code & 1 == 0:
                        e = flows[aidx]
                        y = heads[aidx]
                        if e >= caps[aidx] or visited[y] == stamp:
                            ptr[x] += 1
                            continue
                        w = vals[aidx][bisect_left(ends[aidx], e + 1)]
                    else:
                        e = flows[aidx]
                        y = tails[aidx]
                        if e <= 0 or visited[y] == stamp:
                            ptr[x] += 1
                            continue
                        w = -vals[aidx][bisect_left(ends[aidx], e)]
                    if w + px - pot[y] != 0:
                        ptr[x] += 1
                        continue
                    path.append(code)
                    visited[y] = stamp
                    x = y
                    advanced = True
                    break
                if advanced:
                    if x == t_node:
                        reached = True
                        break
                    continue
                if x == s_node:
                    break
                code = path.pop()
                x = heads[code >> 1] if code & 1 else tails[code >> 1]
                ptr[x] += 1
            if not reached:
                break
            delta = target - pushed
            for code in path:
                aidx = code >> 1
                e = flows[aidx]
                if code & 1 == 0:
                    seg = bisect_left(ends[aidx], e + 1)
                    run = ends[aidx][seg] - e
                else:
                    seg = bisect_left(ends[aidx], e)
                    run = e - (ends[aidx][seg - 1] if seg else 0)
                if run < delta:
                    delta = run
            for code in path:
                aidx = code >> 1
                flows[aidx] += -delta if code & 1 else delta
            pushed += delta

    amounts = tuple(net.arcs[idx].lo + flows[idx] for idx in range(n_arcs))
    total = cost_sum(net.arcs[idx].cost.table[amounts[idx]] for idx in range(n_arcs))
    _check_flow(net, amounts)
    return Flow(amounts, total)


def _infeasibility_witness(net, tails, heads, caps, flows, s_node, n_arcs):
    for aidx in range(n_arcs, len(tails)):
        if tails[aidx] == s_node and flows[aidx] < caps[aidx]:
            node = heads[aidx]
            for idx, arc in enumerate(net.arcs):
                if arc.head == node and arc.lo > 0:
                    return idx
            return None
    return None


def _check_flow(net: FlowNetwork, amounts):
    """Structural soundness: bounds, conservation and the required value."""
    balance = [0] * net.num_nodes
    for arc, f in zip(net.arcs, amounts):
        if not (arc.lo <= f <= arc.hi):
            raise InstanceError(f"flow {f} violates window [{arc.lo}, {arc.hi}]")
        balance[arc.tail] -= f
        balance[arc.head] += f
    for x in range(net.num_nodes):
        if x in (net.source, net.sink):
            continue
        if balance[x] != 0:
            raise InstanceError(f"conservation violated at node {x}")
    if -balance[net.source] != net.value or balance[net.sink] != net.value:
        raise InstanceError("flow value differs from the required value")


def network_to_dot(net: FlowNetwork, flow: Optional[Flow] = None, node_labels=None) -> str:
    """Graphviz rendering of the network, optionally annotated with a flow."""
    lines = ["digraph flownet {", "  rankdir=LR;"]
    for x in range(net.num_nodes):
        label = node_labels[x] if node_labels else str(x)
        shape = "doublecircle" if x in (net.source, net.sink) else "circle"
        lines.append(f'  n{x} [label="{label}", shape={shape}];')
    for idx, arc in enumerate(net.arcs):
        margins = ",".join(str(m) for m in marginals(arc.cost))
        label = f"[{arc.lo},{arc.hi}]"
        if margins:
            label += f" w'=({margins})"
        if flow is not None:
            label += f" f={flow.amounts[idx]}"
        lines.append(f'  n{arc.tail} -> n{arc.head} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
