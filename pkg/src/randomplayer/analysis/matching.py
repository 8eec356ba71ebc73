"""Matching oracles: bipartite maximum matching, Hall violators, general graphs."""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .graph import Graph
from .report import CheckReport, Verdict

GENERAL_CAP = 20


def bipartite_matching(left: Sequence[int], right: Sequence[int], adjacent) -> dict[int, int]:
    """Maximum matching between ``left`` and ``right``.

    ``adjacent`` is a boolean |left| x |right| array. Returns {left vertex: right vertex}.
    """
    a = np.asarray(adjacent, dtype=bool)
    if a.size == 0 or not a.any():
        return {}
    m = maximum_bipartite_matching(csr_matrix(a.astype(np.int8)), perm_type="column")
    return {int(left[i]): int(right[j]) for i, j in enumerate(m) if j >= 0}


def _sides(g: Graph, left: Sequence[int] | None):
    if left is not None:
        L = sorted(left)
        Ls = set(L)
        R = [v for v in range(g.n) if v not in Ls]
        return L, R
    parts = g.bipartition()
    if parts is None:
        return None
    return parts


def _bip_adj(g: Graph, L, R) -> np.ndarray:
    col = {v: j for j, v in enumerate(R)}
    a = np.zeros((len(L), len(R)), dtype=bool)
    for i, u in enumerate(L):
        for w in g.adj[u]:
            j = col.get(w)
            if j is not None:
                a[i, j] = True
    return a


def maximum_matching(g: Graph, left: Sequence[int] | None = None) -> list[tuple[int, int]]:
    sides = _sides(g, left)
    if sides is not None:
        L, R = sides
        m = bipartite_matching(L, R, _bip_adj(g, L, R))
        return sorted((min(u, v), max(u, v)) for u, v in m.items())
    return _general_maximum(g)


def _general_maximum(g: Graph) -> list[tuple[int, int]]:
    if g.n > GENERAL_CAP:
        return _blossom(g)
    masks = g.adjacency_masks()
    best: list[tuple[int, int]] = []
    cur: list[tuple[int, int]] = []
    target = g.n // 2

    def rec(avail: int) -> bool:
        nonlocal best
        if len(cur) > len(best):
            best = list(cur)
            if len(best) == target:
                return True
        if avail == 0 or len(cur) + bin(avail).count("1") // 2 <= len(best):
            return False
        v = (avail & -avail).bit_length() - 1
        rest = avail & ~(1 << v)
        nb = masks[v] & rest
        while nb:
            w = (nb & -nb).bit_length() - 1
            nb &= nb - 1
            cur.append((v, w))
            if rec(rest & ~(1 << w)):
                return True
            cur.pop()
        return rec(rest)   # leave v unmatched

    rec((1 << g.n) - 1)
    return sorted(best)


def _blossom(g: Graph) -> list[tuple[int, int]]:
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    m = nx.max_weight_matching(h, maxcardinality=True)
    return sorted((min(u, v), max(u, v)) for u, v in m)


def has_perfect_matching(g: Graph, required_size: int | None = None,
                         left: Sequence[int] | None = None) -> CheckReport:
    """Yes with a matching of ``required_size`` edges (default floor(n/2)), else No.

    For a No on a bipartite input the witness is a Hall violator when one exists.
    """
    need = g.n // 2 if required_size is None else required_size
    m = maximum_matching(g, left)
    if len(m) >= need:
        return CheckReport("perfect_matching", Verdict.YES, m[:need] if len(m) > need else m, cost=g.n)
    witness = None
    sides = _sides(g, left)
    if sides is not None:
        witness = hall_violator(g, left=sides[0])
    return CheckReport("perfect_matching", Verdict.NO, witness, cost=g.n,
                       note=f"maximum matching has {len(m)} edges")


def hall_violator(g: Graph, left: Sequence[int] | None = None) -> set[int] | None:
    """A set X on the left with |N(X)| < |X|, or None when a perfect matching exists.

    When the parts have equal size, None means the left side can be matched
    completely, which is exactly a perfect matching.
    """
    sides = _sides(g, left)
    if sides is None:
        raise ValueError("hall_violator needs a bipartite graph")
    L, R = sides
    if len(L) > len(R):
        # too few right vertices: the whole left side violates
        if len(g.neighborhood(L)) < len(L):
            return set(L)
    m = bipartite_matching(L, R, _bip_adj(g, L, R))
    mate_r = {w: u for u, w in m.items()}
    free_left = [u for u in L if u not in m]
    if not free_left:
        return None
    # alternating BFS from one unmatched left vertex (König)
    start = free_left[0]
    seen_l = {start}
    seen_r = set()
    q = deque([start])
    Rs = set(R)
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if w in Rs and w not in seen_r:
                seen_r.add(w)
                x = mate_r.get(w)
                if x is not None and x not in seen_l:
                    seen_l.add(x)
                    q.append(x)
    return seen_l
