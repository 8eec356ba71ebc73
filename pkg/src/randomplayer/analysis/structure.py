"""Peeling to a high-minimum-degree core and low-degree sets in bipartite pieces."""

from __future__ import annotations

import math
from collections.abc import Iterable

from ..errors import PreconditionViolated
from .graph import Graph


def peel_min_degree(g: Graph, r: float) -> tuple[Graph, list[int]]:
    """Remove vertices of degree <= r until none is left; returns (subgraph, labels).

    Needs average degree at least 2r; the result is non-empty and every
    remaining degree exceeds r (so it is at least r+1 for integer r).
    """
    if g.n == 0 or 2 * g.number_of_edges() < 2 * r * g.n:
        raise PreconditionViolated(f"average degree below 2r = {2 * r}")
    alive = set(range(g.n))
    deg = g.degrees()
    stack = [v for v in alive if deg[v] <= r]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] <= r:
                    stack.append(w)
    if not alive:
        raise PreconditionViolated("peeling removed every vertex")
    return g.induced(alive)


def pseudo_t_sets(g: Graph, U0: Iterable[int], U1: Iterable[int], eps: float,
                  alpha: float, n: int | None = None) -> tuple[set[int], set[int]]:
    """T_i = {v in U_i : e(v, U_{1-i}) < (eps/2) n^alpha}.

    ``n`` defaults to the vertex count of each side's host part, taken as
    g.n // 2 for a balanced bipartite graph.
    """
    U0, U1 = set(U0), set(U1)
    base = g.n // 2 if n is None else n
    thr = (eps / 2) * base ** alpha
    T0 = {v for v in U0 if len(g.adj[v] & U1) < thr}
    T1 = {v for v in U1 if len(g.adj[v] & U0) < thr}
    return T0, T1


def ceil_pow(n: int, alpha: float) -> int:
    """ceil(n^alpha) with a floor of 1."""
    return max(1, math.ceil(n ** alpha - 1e-9))
