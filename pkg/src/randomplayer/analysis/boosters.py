"""Boosters: non-edges whose addition makes the graph Hamiltonian or lengthens its longest path."""

from __future__ import annotations

import numpy as np

from ..errors import SizeCapExceeded
from .graph import Graph
from .hamilton import is_hamiltonian
from .report import CheckReport, Verdict

BOOSTER_CAP = 16


def _endpoint_table(masks: list[int], n: int) -> tuple[np.ndarray, np.ndarray]:
    """E[S] = bitmask of vertices v such that some path covers exactly S and ends at v."""
    N = 1 << n
    E = np.zeros(N, dtype=np.int64)
    allm = np.arange(N, dtype=np.int64)
    pc = np.bitwise_count(allm.astype(np.uint64)).astype(np.int64)
    for v in range(n):
        E[1 << v] = 1 << v
    layers = [allm[pc == k] for k in range(n + 1)]
    for k in range(2, n + 1):
        ms = layers[k]
        acc = np.zeros(len(ms), dtype=np.int64)
        for v in range(n):
            has = (ms >> v) & 1 == 1
            prev = E[ms[has] ^ (1 << v)]
            acc[has] |= ((prev & masks[v]) != 0).astype(np.int64) << v
        E[ms] = acc
    return E, pc


def _ham_paths_from(masks: list[int], n: int, x: int) -> int:
    """Bitmask of vertices y such that a Hamilton path runs from x to y."""
    N = 1 << n
    F = np.zeros(N, dtype=np.int64)
    F[1 << x] = 1 << x
    allm = np.arange(N, dtype=np.int64)
    pc = np.bitwise_count(allm.astype(np.uint64))
    for k in range(2, n + 1):
        ms = allm[(pc == k) & ((allm >> x) & 1 == 1)]
        acc = np.zeros(len(ms), dtype=np.int64)
        for v in range(n):
            if v == x:
                continue
            has = (ms >> v) & 1 == 1
            prev = F[ms[has] ^ (1 << v)]
            acc[has] |= ((prev & masks[v]) != 0).astype(np.int64) << v
        F[ms] = acc
    return int(F[N - 1])


def longest_path_vertices(g: Graph) -> int:
    if g.n == 0:
        return 0
    if g.n > BOOSTER_CAP:
        raise SizeCapExceeded(f"longest path is exact only up to {BOOSTER_CAP} vertices")
    E, pc = _endpoint_table(g.adjacency_masks(), g.n)
    return int(pc[E != 0].max())


def boosters(g: Graph, cap: int = BOOSTER_CAP) -> CheckReport:
    """Exact list of boosters; AlreadyHamiltonian flag and empty list on Hamiltonian input."""
    n = g.n
    if n > cap or n > BOOSTER_CAP:
        raise SizeCapExceeded(f"booster listing is exact only up to {min(cap, BOOSTER_CAP)} vertices")
    if n >= 3 and is_hamiltonian(g, cap=None).verdict == Verdict.YES:
        return CheckReport("boosters", Verdict.YES, [], flags=["AlreadyHamiltonian"])
    non_edges = g.non_edges()
    if n == 0 or not non_edges:
        return CheckReport("boosters", Verdict.YES, [], cost=0)
    masks = g.adjacency_masks()
    E, pc = _endpoint_table(masks, n)
    L = int(pc[E != 0].max())
    N = 1 << n
    full = N - 1
    allm = np.arange(N, dtype=np.int64)
    # best_end[y][S] = largest |B| with B subset of S, y in B and a path covering B ending at y
    best_end = []
    for y in range(n):
        h = np.where((E >> y) & 1 == 1, pc, -1)
        for i in range(n):
            has = (allm >> i) & 1 == 1
            h[has] = np.maximum(h[has], h[allm[has] ^ (1 << i)])
        best_end.append(h)
    ham_from = {}
    out = []
    for x, y in non_edges:
        if n >= 3:
            if x not in ham_from:
                ham_from[x] = _ham_paths_from(masks, n, x)
            if ham_from[x] >> y & 1:
                out.append((x, y))
                continue
        # longest path through the new edge: path ending at x on A, then y onwards on B
        sel = ((E >> x) & 1 == 1) & ((allm >> y) & 1 == 0)
        A = allm[sel]
        through = pc[A] + best_end[y][full ^ A]
        if int(through.max(initial=-1)) > L:
            out.append((x, y))
    return CheckReport("boosters", Verdict.YES, out, cost=n * N, note=f"longest path has {L} vertices")
