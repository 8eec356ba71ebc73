"""Maker's k-connectivity strategy: matchings between parts, cycles inside parts, then attach the rest."""

from __future__ import annotations

import numpy as np

from ..board import FREE, MAKER, GameGraph
from .base import Claim, Done, Forfeit, Move, StrategyStats
from .ham import SHam
from .matching import DEFAULT_ALPHA, SPM


def partition(n: int, k: int) -> tuple[list[list[int]], list[int]]:
    """k-1 consecutive parts of size floor(n/(k-1)) and the leftover U (|U| < k-1)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    size = n // (k - 1)
    parts = [list(range(i * size, (i + 1) * size)) for i in range(k - 1)]
    return parts, list(range((k - 1) * size, n))


def schedule(n: int, k: int) -> list[tuple[str, tuple[int, ...]]]:
    parts, U = partition(n, k)
    out: list[tuple[str, tuple[int, ...]]] = []
    for i in range(k - 1):
        for j in range(i + 1, k - 1):
            out.append(("pm", (i, j)))
    out += [("ham", (i,)) for i in range(k - 1)]
    if U:
        out.append(("attach", ()))
    return out


class SK:
    side = MAKER
    target = "kconn"

    def __init__(self, n: int, k: int, alpha: float = DEFAULT_ALPHA, epsilon: float = 0.2):
        self.n, self.k = n, k
        self.parts, self.U = partition(n, k)
        if len(self.parts[0]) < 3:
            raise ValueError(f"parts of size {len(self.parts[0])} are too small for a Hamilton cycle")
        self.alpha, self.epsilon = alpha, epsilon
        self.plan = schedule(n, k)
        self.pos = 0
        self.active = None
        self.cycles: list[list[int]] = []
        self.matchings: list[list[tuple[int, int]]] = []
        self.attachments: list[tuple[int, int]] = []
        self.witness = None
        self.done = False
        self.stats = StrategyStats()

    def _start(self, item):
        kind, idx = item
        if kind == "pm":
            i, j = idx
            return SPM(self.parts[i], self.parts[j], self.alpha, self.epsilon)
        if kind == "ham":
            return SHam(self.parts[idx[0]])
        return None

    def _collect(self, kind: str, witness) -> None:
        if kind == "pm":
            self.matchings.append(witness)
        elif kind == "ham":
            self.cycles.append(witness)

    def _advance(self, g: GameGraph) -> None:
        while not self.done and self.active is not None:
            d = self.active.poll(g)
            if d is None:
                return
            self._collect(self.plan[self.pos][0], d.witness)
            self.pos += 1
            self.active = None
            self._activate()

    def _activate(self) -> None:
        while self.active is None and self.pos < len(self.plan):
            item = self.plan[self.pos]
            if item[0] == "attach":
                return
            self.active = self._start(item)
        if self.pos >= len(self.plan):
            self._finish()

    def _finish(self) -> None:
        self.done = True
        self.witness = {"cycles": self.cycles, "matchings": self.matchings,
                        "attachments": self.attachments}

    def poll(self, g: GameGraph) -> Done | None:
        if self.pos == 0 and self.active is None and not self.done:
            self._activate()
        self._advance(g)
        if not self.done and self.pos < len(self.plan) and self.plan[self.pos][0] == "attach":
            if self._attach_needed(g) is None:
                self.pos += 1
                self._finish()
        return Done(self.witness) if self.done else None

    def _attach_needed(self, g: GameGraph):
        rest = np.array([v for v in range(self.n) if v not in set(self.U)])
        for u in self.U:
            have = int((g.state[u, rest] == MAKER).sum())
            if have < self.k:
                return u, rest
        return None

    def next_move(self, g: GameGraph) -> Move:
        for _ in range(len(self.plan) + 2):
            if self.poll(g) is not None:
                return Done(self.witness)
            if self.active is not None:
                mv = self.active.next_move(g)
                if isinstance(mv, Done):
                    self._advance(g)
                    continue
                if isinstance(mv, Claim):
                    self.stats.moves += 1
                return mv
            need = self._attach_needed(g)
            if need is None:
                continue
            u, rest = need
            free = rest[g.state[u, rest] == FREE]
            if len(free) == 0:
                return Forfeit(f"vertex {u} has fewer than {self.k} free edges to attach")
            w = int(free[0])
            self.attachments.append((u, w))
            self.stats.moves += 1
            return Claim(u, w)
        return Forfeit("no progress")
