"""Maker's perfect-matching strategy against a random Breaker.

Stage I builds a matching P greedily inside the untouched set R until only
about n^alpha vertices per side are left. Stage II repairs the vertices of R
whose free degree into R is too small by swapping them with a matched
partner. Stage III claims a perfect matching of the free graph on R.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from ..analysis.matching import bipartite_matching
from ..analysis.structure import ceil_pow
from ..board import BREAKER, FREE, MAKER, GameGraph
from .base import Claim, Done, Forfeit, Move, StrategyStats, canon

DEFAULT_ALPHA = 0.25


def embed_halves(n: int) -> tuple[list[int], list[int], list[int]]:
    """Split 0..n-1 into two halves of size floor(n/2) and a leftover (one vertex iff n is odd)."""
    if n < 2:
        raise ValueError("need at least 2 vertices")
    h = n // 2
    return list(range(h)), list(range(h, 2 * h)), list(range(2 * h, n))


class SPM:
    side = MAKER
    target = "pm"

    def __init__(self, left: Sequence[int], right: Sequence[int], alpha: float = DEFAULT_ALPHA,
                 epsilon: float = 0.2):
        if len(left) != len(right) or not left:
            raise ValueError("S_PM needs two non-empty sides of equal size")
        if alpha < 0:
            raise ValueError("alpha must be non-negative")
        self.L = np.array(sorted(left), dtype=np.int64)
        self.Rside = np.array(sorted(right), dtype=np.int64)
        self.n = n = len(self.L)
        self.alpha = alpha
        self.epsilon = epsilon
        self.na = min(n, ceil_pow(n, alpha))
        self.stage1_target = n - self.na
        self.t_low = max(1, _ceil(epsilon / 4 * n ** alpha))
        self.t_partner = max(1, _ceil(epsilon / 8 * n ** alpha))
        self.stage = "I"
        self.left_set = set(int(x) for x in self.L)
        self.inR = {int(v): True for v in np.concatenate([self.L, self.Rside])}
        self.P: dict[int, int] = {}           # Stage-I matching, both directions
        self.Pp: dict[int, int] = {}          # repaired matching P', both directions
        self.T: list[int] = []
        self.t_pos = 0
        self.plan: list[tuple[int, int]] = []
        self.witness: list[tuple[int, int]] | None = None
        self.stats = StrategyStats()

    # -- helpers -----------------------------------------------------------

    def R_sides(self) -> tuple[np.ndarray, np.ndarray]:
        RL = np.array([v for v in self.L if self.inR[int(v)]], dtype=np.int64)
        RR = np.array([v for v in self.Rside if self.inR[int(v)]], dtype=np.int64)
        return RL, RR

    def _match(self, u: int, v: int) -> None:
        self.P[u] = v
        self.P[v] = u
        self.Pp[u] = v
        self.Pp[v] = u
        self.inR[u] = False
        self.inR[v] = False

    def matched_edges(self) -> list[tuple[int, int]]:
        return sorted({canon(u, v) for u, v in self.Pp.items()})

    # -- protocol ----------------------------------------------------------

    def poll(self, g: GameGraph) -> Done | None:
        if self.stage == "III" and not self.plan_left(g):
            self._finish()
        return Done(self.witness) if self.stage == "done" else None

    def next_move(self, g: GameGraph) -> Move:
        if self.stage == "I":
            if len(self.P) // 2 < self.stage1_target:
                RL, RR = self.R_sides()
                sub = g.state[np.ix_(RL, RR)] == FREE
                hit = np.argwhere(sub)
                if len(hit) == 0:
                    return Forfeit("Stage I: no free edge inside R")
                i, j = hit[0]
                u, v = int(RL[i]), int(RR[j])
                self._match(u, v)
                self.stats.moves += 1
                return Claim(u, v)
            self._enter_stage2(g)
        if self.stage == "II":
            mv = self._stage2(g)
            if mv is not None:
                return mv
            self.stage = "III"
            self.plan = []
        if self.stage == "III":
            return self._stage3(g)
        return Done(self.witness)

    # -- Stage II ----------------------------------------------------------

    def _enter_stage2(self, g: GameGraph) -> None:
        self.stage = "II"
        RL, RR = self.R_sides()
        fL = (g.state[np.ix_(RL, RR)] == FREE).sum(axis=1) if len(RL) else np.array([])
        fR = (g.state[np.ix_(RR, RL)] == FREE).sum(axis=1) if len(RR) else np.array([])
        T0 = [int(v) for v, d in zip(RL, fL) if d < self.t_low]
        T1 = [int(v) for v, d in zip(RR, fR) if d < self.t_low]
        self.T = T0 + T1
        self.t_pos = 0

    def _stage2(self, g: GameGraph) -> Move | None:
        while self.t_pos < len(self.T):
            v = self.T[self.t_pos]
            self.t_pos += 1
            on_left = v in self.left_set
            RL, RR = self.R_sides()
            other_R = RR if on_left else RL
            # candidates u on the other side, matched in P to some w on v's side
            cands = sorted(u for u, w in self.P.items()
                           if (u not in self.left_set) == on_left and g.state[v, u] == FREE)
            for u in cands:
                w = self.P[u]
                if len(other_R) and int((g.state[w, other_R] == FREE).sum()) >= self.t_partner:
                    del self.P[u], self.P[w]
                    del self.Pp[u], self.Pp[w]
                    self.Pp[u] = v
                    self.Pp[v] = u
                    self.inR[v] = False
                    self.inR[w] = True
                    self.stats.moves += 1
                    return Claim(v, u)
            return Forfeit(f"Stage II: no repair edge for vertex {v}")
        return None

    # -- Stage III ---------------------------------------------------------

    def plan_left(self, g: GameGraph) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.plan if g.state[u, v] != MAKER]

    def _replan(self, g: GameGraph) -> bool:
        RL, RR = self.R_sides()
        st = g.state[np.ix_(RL, RR)]
        kept = [(int(RL[i]), int(RR[j])) for i, j in np.argwhere(st == MAKER)]
        # keep Maker's edges inside R when they form a matching, fill in the rest
        used_l = {u for u, _ in kept}
        used_r = {v for _, v in kept}
        if len(used_l) == len(kept) and len(used_r) == len(kept):
            li = [i for i, u in enumerate(RL) if int(u) not in used_l]
            ri = [j for j, v in enumerate(RR) if int(v) not in used_r]
            m = bipartite_matching(RL[li], RR[ri], st[np.ix_(li, ri)] == FREE)
            if len(m) == len(li):
                self.plan = kept + sorted(m.items())
                return True
        usable = (st == FREE) | (st == MAKER)
        m = bipartite_matching(RL, RR, usable)
        if len(m) < len(RL) or len(RL) != len(RR):
            return False
        self.plan = sorted(m.items())
        return True

    def _stage3(self, g: GameGraph) -> Move:
        if any(g.state[u, v] == BREAKER for u, v in self.plan) or not self.plan:
            if self.plan:
                self.stats.replans += 1
            if not self._replan(g):
                return Forfeit("Stage III: no perfect matching in the free graph on R")
        todo = self.plan_left(g)
        if not todo:
            self._finish()
            return Done(self.witness)
        u, v = todo[0]
        self.stats.moves += 1
        return Claim(u, v)

    def _finish(self) -> None:
        edges = set(self.matched_edges()) | {canon(u, v) for u, v in self.plan}
        self.witness = sorted(edges)
        self.stage = "done"


def _ceil(x: float) -> int:
    return math.ceil(x - 1e-9)
