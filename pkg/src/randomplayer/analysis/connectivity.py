"""Vertex connectivity via unit-capacity vertex-split maximum flows (Even's scheme)."""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Graph
from .report import CheckReport, Verdict


class _SplitNetwork:
    """v_in = v, v_out = v + n; arc v_in -> v_out has capacity 1."""

    def __init__(self, g: Graph):
        n = self.n = g.n
        big = n + 1
        rows, cols, caps = [], [], []
        for v in range(n):
            rows.append(v)
            cols.append(v + n)
            caps.append(1)
        for u, v in g.edges():
            rows += [u + n, v + n]
            cols += [v, u]
            caps += [big, big]
        self.cap = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(2 * n, 2 * n))
        self.cap.sort_indices()

    def local(self, s: int, t: int, want_cut: bool = False) -> tuple[int, list[int] | None]:
        """Maximum number of internally disjoint s-t paths, optionally with a minimum separator."""
        n = self.n
        res = maximum_flow(self.cap, s + n, t)
        if not want_cut:
            return int(res.flow_value), None
        # the flow matrix is antisymmetric, so cap - flow is the full residual network
        residual = (self.cap - res.flow).tocsr()
        seen = np.zeros(2 * n, dtype=bool)
        seen[s + n] = True
        q = deque([s + n])
        while q:
            x = q.popleft()
            lo, hi = residual.indptr[x], residual.indptr[x + 1]
            for y, c in zip(residual.indices[lo:hi], residual.data[lo:hi]):
                if c > 0 and not seen[y]:
                    seen[y] = True
                    q.append(y)
        cut = [v for v in range(n) if seen[v] and not seen[v + n] and v not in (s, t)]
        return int(res.flow_value), cut


def k_connected(g: Graph, k: int) -> CheckReport:
    """Yes iff g has more than k vertices and no separating set of fewer than k vertices."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = g.n
    if n <= k:
        return CheckReport("k_connected", Verdict.NO, None, cost=0,
                           note=f"{n} vertices cannot be {k}-connected")
    degs = g.degrees()
    v = min(range(n), key=lambda x: (degs[x], x))
    if degs[v] < k:
        return CheckReport("k_connected", Verdict.NO, sorted(g.adj[v]), cost=n,
                           note=f"neighbourhood of vertex {v} separates it")
    net = _SplitNetwork(g)
    flows = 0
    for i in range(k):
        for j in range(i + 1, n):
            if g.has_edge(i, j):
                continue
            flows += 1
            val, _ = net.local(i, j)
            if val < k:
                _, cut = net.local(i, j, want_cut=True)
                return CheckReport("k_connected", Verdict.NO, cut, cost=flows,
                                   note=f"{val} disjoint paths between {i} and {j}")
    return CheckReport("k_connected", Verdict.YES, None, cost=flows)


def vertex_connectivity(g: Graph) -> int:
    k = 0
    while k + 1 < g.n and k_connected(g, k + 1).verdict == Verdict.YES:
        k += 1
    return k


def disconnects(g: Graph, cut) -> bool:
    rest = [v for v in range(g.n) if v not in set(cut)]
    if len(rest) < 2:
        return False
    h, _ = g.induced(rest)
    return not h.is_connected()
