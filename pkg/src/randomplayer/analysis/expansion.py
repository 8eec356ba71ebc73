"""(R, c)-expansion: every U with |U| <= R has |N(U)| >= c|U|."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .graph import Graph
from .report import CheckReport, Verdict

EXACT_LIMIT = 10**7
SAMPLES = 10**5
DP_MAX_N = 22
CHUNK = 1 << 16


def subsets_up_to(n: int, R: int) -> int:
    return sum(math.comb(n, a) for a in range(1, min(R, n) + 1))


def _closed_masks_words(g: Graph) -> np.ndarray:
    W = (g.n + 63) // 64
    out = np.zeros((g.n, W), dtype=np.uint64)
    for v in range(g.n):
        for w in list(g.adj[v]) + [v]:
            out[v, w // 64] |= np.uint64(1) << np.uint64(w % 64)
    return out


def _exact_dp(g: Graph, R: int, c: float):
    n = g.n
    closed = np.array([sum(1 << w for w in g.adj[v]) | (1 << v) for v in range(n)], dtype=np.uint32)
    nb = np.zeros(1 << n, dtype=np.uint32)
    for i in range(n):
        lo = 1 << i
        nb[lo:2 * lo] = nb[:lo] | closed[i]
    masks = np.arange(1 << n, dtype=np.uint32)
    size = np.bitwise_count(masks)
    ext = np.bitwise_count(nb & ~masks)
    bad = (size >= 1) & (size <= R) & (ext < c * size)
    if not bad.any():
        return None, 1 << n
    idx = np.flatnonzero(bad)
    best = idx[np.lexsort((idx, size[idx]))[0]]
    return [v for v in range(n) if best >> v & 1], 1 << n


def _exact_combinations(g: Graph, R: int, c: float):
    n = g.n
    closed = _closed_masks_words(g)
    single = np.zeros((n, closed.shape[1]), dtype=np.uint64)
    for v in range(n):
        single[v, v // 64] = np.uint64(1) << np.uint64(v % 64)
    work = 0
    for a in range(1, min(R, n) + 1):
        combos = itertools.combinations(range(n), a)
        while True:
            flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, CHUNK)),
                               dtype=np.int64)
            if flat.size == 0:
                break
            idx = flat.reshape(-1, a)
            nb = np.bitwise_or.reduce(closed[idx], axis=1)
            us = np.bitwise_or.reduce(single[idx], axis=1)
            ext = np.bitwise_count(nb & ~us).sum(axis=1)
            work += len(idx)
            bad = np.flatnonzero(ext < c * a)
            if len(bad):
                return [int(x) for x in idx[bad[0]]], work
    return None, work


def _sampled(g: Graph, R: int, c: float, samples: int, seed: int):
    n = g.n
    rng = np.random.default_rng(seed)
    # singletons are cheap to do exactly
    for v in range(n):
        if len(g.adj[v]) < c:
            return [v], n
    closed = _closed_masks_words(g)
    single = np.zeros((n, closed.shape[1]), dtype=np.uint64)
    for v in range(n):
        single[v, v // 64] = np.uint64(1) << np.uint64(v % 64)
    top = min(R, n)
    done = 0
    while done < samples:
        batch = min(CHUNK // 4, samples - done)
        sizes = rng.integers(1, top + 1, size=batch)
        keys = rng.random((batch, n))
        order = np.argsort(keys, axis=1)
        for a in np.unique(sizes):
            rows = np.flatnonzero(sizes == a)
            idx = order[rows, :a]
            nb = np.bitwise_or.reduce(closed[idx], axis=1)
            us = np.bitwise_or.reduce(single[idx], axis=1)
            ext = np.bitwise_count(nb & ~us).sum(axis=1)
            bad = np.flatnonzero(ext < c * a)
            if len(bad):
                return sorted(int(x) for x in idx[bad[0]]), done + batch
        done += batch
    return None, samples


def is_expander(g: Graph, R: int, c: float, mode: str = "auto",
                samples: int = SAMPLES, seed: int = 0, limit: int = EXACT_LIMIT) -> CheckReport:
    """Exact when the number of sets |U| <= R is within ``limit`` (or mode="exact"),
    otherwise a sampled one-sided verdict."""
    if R < 1:
        raise ValueError("R must be at least 1")
    if mode not in ("auto", "exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if g.n == 0:
        return CheckReport("expander", Verdict.YES, None)
    total = subsets_up_to(g.n, R)
    exact = mode == "exact" or (mode == "auto" and total <= limit)
    if exact:
        if g.n <= DP_MAX_N and (1 << g.n) <= 4 * max(total, 1 << 12):
            witness, work = _exact_dp(g, R, c)
        else:
            witness, work = _exact_combinations(g, R, c)
        if witness is None:
            return CheckReport("expander", Verdict.YES, None, cost=work)
        return CheckReport("expander", Verdict.NO, witness, cost=work,
                           note=_why(g, witness, c))
    witness, work = _sampled(g, R, c, samples, seed)
    if witness is None:
        return CheckReport("expander", Verdict.SAMPLED_YES, None, cost=work, flags=["sampled"])
    return CheckReport("expander", Verdict.SAMPLED_NO, witness, cost=work, flags=["sampled"],
                       note=_why(g, witness, c))


def _why(g: Graph, U, c) -> str:
    return f"|N(U)|={len(g.neighborhood(U))} < {c}*{len(U)}"
