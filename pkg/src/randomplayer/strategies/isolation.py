"""Breaker strategies for random-Maker games: vertex isolation and a random baseline."""

from __future__ import annotations

import math

import numpy as np

from ..board import BREAKER, FREE, MAKER, GameGraph
from .base import Claim, Done, Forfeit, Move, StrategyStats

DEFAULT_C = 0.5


def round_budget(n: int, m: int, c: float) -> int:
    return max(1, math.ceil(c * n * math.log(n) / max(m, 1)))


def attempt_success_probability_bound(n: float, epsilon: float) -> float:
    """Lower bound 1 / (ln n)^(1 - 4 eps) on isolating a free vertex in one attempt."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 0 <= epsilon < 0.25:
        raise ValueError("epsilon must lie in [0, 1/4)")
    return math.log(n) ** -(1 - 4 * epsilon)


class Isolation:
    side = BREAKER
    target = "isolate"

    def __init__(self, n: int, m: int, c: float = DEFAULT_C, paper_faithful: bool = False):
        self.n, self.m, self.c = n, m, c
        self.paper_faithful = paper_faithful
        self.round_budget = round_budget(n, m, c)
        self.target_vertex: int | None = None
        self.attempts = 0
        self.rounds_used = 0
        self.witness: int | None = None
        self.stats = StrategyStats()

    def _select(self, g: GameGraph) -> int | None:
        free = np.flatnonzero(g.deg[MAKER] == 0)
        if len(free) == 0:
            return None
        if self.paper_faithful:
            return int(free[0])
        dB = g.deg[BREAKER][free]
        return int(free[int(np.argmax(dB))])      # argmax returns the lowest id on ties

    def poll(self, g: GameGraph) -> Done | None:
        t = self.target_vertex
        if t is not None and g.deg[MAKER][t] == 0 and g.deg[BREAKER][t] == g.board.degree(t):
            self.witness = t
            return Done(t)
        return None

    def next_move(self, g: GameGraph) -> Move:
        done = self.poll(g)
        if done is not None:
            return done
        if self.rounds_used >= self.round_budget:
            return Forfeit("round budget exhausted")
        t = self.target_vertex
        if t is None or g.deg[MAKER][t] > 0:
            t = self._select(g)
            if t is None:
                return Forfeit("no free vertex left")
            self.target_vertex = t
            self.attempts += 1
        nbrs = np.flatnonzero(g.state[t] == FREE)
        self.rounds_used += 1
        self.stats.moves += 1
        return Claim(t, int(nbrs[0]))


class RandomBreaker:
    """Marker strategy: the engine plays uniformly random Breaker edges."""

    side = BREAKER
    target = "random"

    def __init__(self):
        self.stats = StrategyStats()

    def poll(self, g: GameGraph) -> Done | None:
        return None

    def next_move(self, g: GameGraph) -> Move:
        return Forfeit("random baseline")
