"""Maker's Hamiltonicity strategy against a random Breaker.

Stage I grows a directed path greedily through vertices that still have many
free edges into the unused set R. Stage II extends the path from its
endpoints while possible; otherwise it closes the path into a cycle with at
most three new edges (a rotation) and then absorbs one vertex of R into the
cycle, which turns the cycle back into a longer path.

The strategy can run on a subset of the board's vertices; every edge it
looks at or claims has both endpoints in that subset.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from ..board import BREAKER, FREE, MAKER, GameGraph, Owner
from .base import Claim, Done, Forfeit, Move, StrategyStats, canon


def root_ceil(n: int, k: int) -> int:
    """ceil(n ** (1/k)) with a floor of 1, robust to float error."""
    r = max(1, math.ceil(n ** (1.0 / k) - 1e-9))
    while r ** k < n:
        r += 1
    while r > 1 and (r - 1) ** k >= n:
        r -= 1
    return r


class SHam:
    side = MAKER
    target = "ham"

    def __init__(self, vertices: int | Sequence[int]):
        if isinstance(vertices, int):
            vertices = range(vertices)
        self.V = np.array(sorted(set(vertices)), dtype=np.int64)
        n = len(self.V)
        if n < 3:
            raise ValueError("a Hamilton cycle needs at least 3 vertices")
        self.n = n
        self.t1 = root_ceil(n, 5)
        self.t2 = root_ceil(n, 6)
        self.t3 = root_ceil(n, 8)
        self.stop = root_ceil(n, 4)
        self.phase = "path"
        self.path: list[int] = []
        self.in_path = np.zeros(n, dtype=bool)     # indexed by local id
        self.local = {int(v): i for i, v in enumerate(self.V)}
        self.plan: list[tuple[int, int]] = []
        self.plan_cycle: list[int] | None = None
        self.cycle: list[int] | None = None
        self.stage1_moves = 0
        self.witness: list[int] | None = None
        self.stats = StrategyStats()

    # -- helpers -----------------------------------------------------------

    def _R(self) -> np.ndarray:
        return self.V[~self.in_path]

    def _add(self, v: int, front: bool = False) -> None:
        if front:
            self.path.insert(0, v)
        else:
            self.path.append(v)
        self.in_path[self.local[v]] = True

    def _usable(self, g: GameGraph, u, v):
        s = g.state[u, v]
        return (s == FREE) | (s == MAKER)

    # -- protocol ----------------------------------------------------------

    def poll(self, g: GameGraph) -> Done | None:
        self._settle(g)
        return Done(self.witness) if self.phase == "done" else None

    def next_move(self, g: GameGraph) -> Move:
        for _ in range(4 * self.n + 8):
            self._settle(g)
            if self.phase == "done":
                return Done(self.witness)
            if self.phase == "path":
                mv = self._stage1(g)
                if mv is not None:
                    self.stats.moves += 1
                    return mv
                self.phase = "extend"
                continue
            mv = self._stage2(g)
            if mv is not None:
                if isinstance(mv, Claim):
                    self.stats.moves += 1
                return mv
        return Forfeit("no progress")

    # -- Stage I -----------------------------------------------------------

    def _stage1(self, g: GameGraph) -> Claim | None:
        if self.stage1_moves >= self.n - self.stop:
            return None
        R = self._R()
        if not self.path:
            # lowest v0, then lowest v1 whose free degree into R \ {v0, v1} reaches t1
            sub = g.state[np.ix_(R, R)] == FREE
            fdeg = sub.sum(axis=1)
            for i, v0 in enumerate(R):
                cand = np.flatnonzero(sub[i])
                if len(cand) == 0:
                    continue
                # subtract the edge to v0 itself
                good = cand[(fdeg[cand] - 1) >= self.t1]
                if len(good):
                    v1 = int(R[good[0]])
                    self._add(int(v0))
                    self._add(v1)
                    self.stage1_moves += 1
                    return Claim(int(v0), v1)
            return None
        v = self.path[-1]
        cand = R[g.state[v, R] == FREE]
        if len(cand) == 0:
            return None
        sub = g.state[np.ix_(cand, R)] == FREE
        size = sub.sum(axis=1)
        good = np.flatnonzero(size >= self.t1)
        if len(good) == 0:
            return None
        u = int(cand[good[0]])
        self._add(u)
        self.stage1_moves += 1
        return Claim(v, u)

    # -- Stage II ----------------------------------------------------------

    def _settle(self, g: GameGraph) -> None:
        """Apply transitions that cost no move (plans already fully owned)."""
        if self.phase == "done":
            return
        if self.plan_cycle is not None and all(g.state[u, v] == MAKER for u, v in self.plan):
            self.cycle = self.plan_cycle
            self.plan_cycle = None
            self.plan = []
            if self.in_path.all():
                self.phase = "done"
                self.witness = [int(x) for x in self.cycle]
            else:
                self.phase = "absorb"

    def _stage2(self, g: GameGraph) -> Move | None:
        if len(self.path) < 2:
            return Forfeit("Stage I could not start a path")
        if self.phase == "absorb":
            return self._absorb(g)
        if self.plan_cycle is not None:
            free = [(u, v) for u, v in self.plan if g.state[u, v] == FREE]
            if all(g.state[u, v] != BREAKER for u, v in self.plan) and free:
                return Claim(*free[0])
            self.stats.replans += 1
            self.plan_cycle = None
            self.plan = []
        R = self._R()
        if len(R):
            v0, vs = self.path[0], self.path[-1]
            best = None
            for end in sorted((v0, vs)):
                hits = R[g.state[end, R] == FREE]
                if len(hits):
                    best = (end, int(hits[0]))
                    break
            if best is not None:
                end, r = best
                self._add(r, front=(end == v0 and end != vs))
                return Claim(end, r)
        plan = self._closing_plan(g)
        if plan is None:
            return Forfeit("cannot close the path into a cycle")
        cycle, edges = plan
        self.plan_cycle = cycle
        self.plan = edges
        free = [(u, v) for u, v in edges if g.state[u, v] == FREE]
        if not free:
            self.stats.zero_cost_steps += 1
            return None
        return Claim(*free[0])

    def _absorb(self, g: GameGraph) -> Move | None:
        cyc = self.cycle
        R = self._R()
        cyc_arr = np.array(cyc)
        sub = g.state[np.ix_(np.sort(cyc_arr), R)] == FREE
        if not sub.any():
            return Forfeit("no free edge between the cycle and R")
        i, j = np.argwhere(sub)[0]
        c = int(np.sort(cyc_arr)[i])
        r = int(R[j])
        pos = cyc.index(c)
        left, right = cyc[pos - 1], cyc[(pos + 1) % len(cyc)]
        cp = min(left, right)
        # walk from c' away from c, around the cycle, ending at c
        if cp == right:
            seq = [cyc[(pos + 1 + t) % len(cyc)] for t in range(len(cyc))]
        else:
            seq = [cyc[(pos - 1 - t) % len(cyc)] for t in range(len(cyc))]
        assert seq[0] == cp and seq[-1] == c
        self.path = list(seq)
        self.cycle = None
        self._add(r)
        self.phase = "extend"
        return Claim(c, r)

    def _closing_plan(self, g: GameGraph) -> tuple[list[int], list[tuple[int, int]]] | None:
        P = np.array(self.path)
        s = len(P) - 1
        if s < 2:
            return None
        v0, vs = int(P[0]), int(P[s])
        if self._usable(g, v0, vs):
            return list(map(int, P)), [canon(v0, vs)]
        pos = np.arange(s + 1)
        x0 = pos[1:s][self._usable(g, v0, P[1:s])]          # positions a with {v0, v_a}
        xs = pos[1:s][self._usable(g, P[1:s], vs)]          # positions b with {v_b, v_s}
        if len(x0) == 0 or len(xs) == 0:
            return None
        h0 = (len(x0) + 1) // 2
        hs = len(xs) // 2
        y0, z0 = x0[:h0], x0[h0:]
        zs, ys = xs[:hs], xs[hs:]
        tries = []
        if len(y0) and len(ys) and y0.max() < ys.min():
            tries.append((y0, ys))
        if len(z0) and len(zs) and zs.max() < z0.min():
            tries.append((z0, zs))
        tries.append((x0, xs))
        for a_set, b_set in tries:
            best = self._best_chord(g, P, a_set, b_set)
            if best is not None:
                return best
        return None

    def _best_chord(self, g, P, a_set, b_set):
        s = len(P) - 1
        A, B = np.meshgrid(a_set, b_set, indexing="ij")
        A, B = A.ravel(), B.ravel()
        # Case-1 form: a <= b, chord {v_{a-1}, v_{b+1}}
        m1 = A <= B
        # Case-2 form: b <= a, chord {v_{a+1}, v_{b-1}}
        m2 = B <= A
        opts = []
        for mask, da, db in ((m1, -1, 1), (m2, 1, -1)):
            a, b = A[mask], B[mask]
            if len(a) == 0:
                continue
            x, y = P[a + da], P[b + db]
            ok = self._usable(g, x, y) & (x != y)
            for ai, bi in zip(a[ok], b[ok]):
                opts.append((int(ai), int(bi), da))
        if not opts:
            return None
        scored = []
        v0, vs = int(P[0]), int(P[s])
        for a, b, da in opts:
            x, y = int(P[a + da]), int(P[b - da])
            edges = [canon(x, y), canon(v0, int(P[a])), canon(int(P[b]), vs)]
            cost = sum(g.state[u, v] == FREE for u, v in edges)
            scored.append((cost, edges[0], a, b, da, edges))
        scored.sort()
        cost, _, a, b, da, edges = scored[0]
        Pl = [int(x) for x in P]
        if da == -1:
            # v0..v_{a-1}, v_{b+1}..v_s, v_b..v_a
            cycle = Pl[:a] + Pl[b + 1:] + Pl[a:b + 1][::-1]
        else:
            # v0..v_{b-1}, v_{a+1}..v_s, v_b..v_a
            cycle = Pl[:b] + Pl[a + 1:] + Pl[b:a + 1]
        assert sorted(cycle) == sorted(Pl)
        return cycle, edges


def is_cycle_in(g: GameGraph, cycle: Sequence[int], who: Owner = MAKER) -> bool:
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    return all(g.state[cycle[i], cycle[(i + 1) % k]] == who for i in range(k))
