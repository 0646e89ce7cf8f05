"""Maximum-weight matching on general graphs with exact rational weights."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import networkx as nx

from .costs import Cost, ZERO, cost_sum
from .errors import InstanceError


@dataclass(frozen=True)
class MatchingGraph:
    """Undirected graph with finite non-negative rational edge weights."""

    num_vertices: int
    edges: Tuple[Tuple[int, int, Cost], ...]

    def __post_init__(self):
        seen = set()
        for u, v, w in self.edges:
            if u == v:
                raise InstanceError(f"self-loop on vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise InstanceError(f"edge ({u}, {v}) outside vertex range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InstanceError(f"duplicate edge {key}")
            seen.add(key)
            if w.is_infinite:
                raise InstanceError("matching weights must be finite")


def max_weight_matching(g: MatchingGraph):
    """A matching of maximum total weight (not necessarily perfect).

    Returns ``(matching, total)`` where matching is a frozenset of (u, v)
    pairs with u < v.  Exact: weights are fed to the blossom search as
    rationals, never floats.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(g.num_vertices))
    for u, v, w in g.edges:
        graph.add_edge(u, v, weight=w.value)
    mate = nx.max_weight_matching(graph, maxcardinality=False)
    matching = frozenset((min(u, v), max(u, v)) for u, v in mate)
    total = cost_sum(Cost(graph[u][v]["weight"]) for u, v in matching)
    # only non-negative weights are admitted, so dropping any negative-value
    # pairing never arises; an empty matching has weight zero
    return matching, total


def max_cardinality_matching(num_vertices: int, pairs):
    """Maximum-cardinality matching as the all-weights-one special case."""
    g = MatchingGraph(num_vertices, tuple((u, v, Cost(1)) for u, v in pairs))
    matching, total = max_weight_matching(g)
    return matching, int(total.value)


def brute_force_max_weight_matching(g: MatchingGraph):
    """Reference implementation: exhaustive search over all matchings.

    Exponential; intended for cross-checking on graphs with at most a
    dozen vertices.
    """
    if g.num_vertices > 16:
        raise InstanceError("brute-force matching is limited to small graphs")
    edges = sorted((min(u, v), max(u, v), w) for u, v, w in g.edges)
    best = (ZERO, frozenset())

    def extend(idx, used, weight, chosen):
        nonlocal best
        if weight > best[0]:
            best = (weight, frozenset(chosen))
        for k in range(idx, len(edges)):
            u, v, w = edges[k]
            if u in used or v in used:
                continue
            used.add(u)
            used.add(v)
            chosen.append((u, v))
            extend(k + 1, used, weight + w, chosen)
            chosen.pop()
            used.discard(u)
            used.discard(v)

    extend(0, set(), ZERO, [])
    return best[1], best[0]
