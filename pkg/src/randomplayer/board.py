"""Boards, per-edge ownership and the degree bookkeeping every strategy uses.

Vertices are dense integers. On ``CompleteBipartite(n0, n1)`` the first part
is ``0..n0-1`` and the second part is ``n0..n0+n1-1``. Edges are canonical
``(min, max)`` pairs and are numbered contiguously, so ownership is a flat
``int8`` array. A dense ``state`` matrix mirrors ownership for vectorised
row/sub-board queries (``-1`` marks pairs outside the edge universe).
"""

from __future__ import annotations

import enum
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .analysis.graph import Graph
from .errors import AlreadyClaimed, InvalidBoard, NotAnEdge


class Owner(enum.IntEnum):
    FREE = 0
    MAKER = 1
    BREAKER = 2

    @property
    def letter(self) -> str:
        return "FMB"[self]

    @classmethod
    def from_letter(cls, s: str) -> Owner:
        try:
            return cls("FMB".index(s.strip().upper()))
        except ValueError:
            raise ValueError(f"unknown owner {s!r}; expected F, M or B") from None


MAKER = Owner.MAKER
BREAKER = Owner.BREAKER
FREE = Owner.FREE
NON_EDGE = -1


@dataclass(frozen=True)
class Board:
    """``kind`` is ``"complete"`` (sizes=(n,)) or ``"bipartite"`` (sizes=(n0, n1))."""

    kind: str
    sizes: tuple[int, ...]

    def __post_init__(self):
        if self.kind == "complete":
            if len(self.sizes) != 1:
                raise InvalidBoard("complete board takes one size")
        elif self.kind == "bipartite":
            if len(self.sizes) != 2:
                raise InvalidBoard("bipartite board takes two part sizes")
        else:
            raise InvalidBoard(f"unknown board kind {self.kind!r}")
        if any(int(s) != s or s < 1 for s in self.sizes):
            raise InvalidBoard(f"board sizes must be positive integers, got {self.sizes}")

    @classmethod
    def complete(cls, n: int) -> Board:
        return cls("complete", (n,))

    @classmethod
    def bipartite(cls, n0: int, n1: int) -> Board:
        return cls("bipartite", (n0, n1))

    @property
    def n_vertices(self) -> int:
        return sum(self.sizes)

    @property
    def n_edges(self) -> int:
        if self.kind == "complete":
            n = self.sizes[0]
            return n * (n - 1) // 2
        return self.sizes[0] * self.sizes[1]

    def degree(self, v: int) -> int:
        if self.kind == "complete":
            return self.sizes[0] - 1
        n0, n1 = self.sizes
        return n1 if v < n0 else n0

    def parts(self) -> tuple[range, range] | None:
        if self.kind != "bipartite":
            return None
        n0, n1 = self.sizes
        return range(0, n0), range(n0, n0 + n1)

    def header(self) -> str:
        return f"board {self.kind} " + " ".join(str(s) for s in self.sizes)

    @classmethod
    def parse(cls, text: str) -> Board:
        """Parse ``complete:300``, ``bipartite:4,4`` or an edge-list header line."""
        s = text.strip()
        if s.startswith("board "):
            s = s[len("board "):]
        s = s.replace(":", " ").replace(",", " ")
        kind, *rest = s.split()
        try:
            sizes = tuple(int(x) for x in rest)
        except ValueError:
            raise InvalidBoard(f"cannot parse board {text!r}") from None
        return cls(kind, sizes)

    def __str__(self) -> str:
        return f"{self.kind}:" + ",".join(str(s) for s in self.sizes)


def _edge_universe(board: Board) -> tuple[np.ndarray, np.ndarray]:
    if board.kind == "complete":
        n = board.sizes[0]
        us, vs = np.triu_indices(n, 1)
    else:
        n0, n1 = board.sizes
        us = np.repeat(np.arange(n0), n1)
        vs = np.tile(np.arange(n0, n0 + n1), n0)
    return us.astype(np.int32), vs.astype(np.int32)


class GameGraph:
    """A board plus the current owner of every edge.

    ``claim`` (and its batch form ``claim_ids``) is the only mutator.
    """

    def __init__(self, board: Board):
        self.board = board
        self.n = n = board.n_vertices
        self.eu, self.ev = _edge_universe(board)
        m = len(self.eu)
        self.eid = np.full((n, n), -1, dtype=np.int32)
        ids = np.arange(m, dtype=np.int32)
        self.eid[self.eu, self.ev] = ids
        self.eid[self.ev, self.eu] = ids
        self.owner = np.zeros(m, dtype=np.int8)
        self.state = np.full((n, n), NON_EDGE, dtype=np.int8)
        self.state[self.eu, self.ev] = FREE
        self.state[self.ev, self.eu] = FREE
        self.deg = np.zeros((3, n), dtype=np.int64)
        self.deg[FREE] = [board.degree(v) for v in range(n)]
        self.counts = np.array([m, 0, 0], dtype=np.int64)
        # sorted ids of free edges; order-preserving deletes keep it sorted
        self.free_ids = ids.copy()

    # -- queries -----------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.eu)

    @property
    def n_free(self) -> int:
        return int(self.counts[FREE])

    def edge_id(self, u: int, v: int) -> int:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise NotAnEdge(f"({u}, {v}) has a vertex outside the board")
        e = int(self.eid[u, v])
        if e < 0:
            raise NotAnEdge(f"({u}, {v}) is not in the edge universe of {self.board}")
        return e

    def edge(self, e: int) -> tuple[int, int]:
        return int(self.eu[e]), int(self.ev[e])

    def owner_of(self, u: int, v: int) -> Owner:
        return Owner(int(self.owner[self.edge_id(u, v)]))

    def is_free(self, u: int, v: int) -> bool:
        return self.state[u, v] == FREE

    def degree(self, v: int, who: Owner) -> int:
        return int(self.deg[who, v])

    def max_degree(self, who: Owner) -> int:
        return int(self.deg[who].max()) if self.n else 0

    def neighbors(self, v: int, who: Owner) -> np.ndarray:
        return np.flatnonzero(self.state[v] == who)

    def free_edges_between(self, xs: Iterable[int], ys: Iterable[int]) -> list[tuple[int, int]]:
        """Free edges with one endpoint in X and the other in Y (each edge once)."""
        return self.edges_between(xs, ys, FREE)

    def edges_between(self, xs: Iterable[int], ys: Iterable[int], who: Owner) -> list[tuple[int, int]]:
        xs = sorted(set(xs))
        ys = sorted(set(ys))
        if not xs or not ys:
            return []
        sub = self.state[np.ix_(xs, ys)] == who
        found = set()
        for i, j in zip(*np.nonzero(sub)):
            u, v = xs[i], ys[j]
            found.add((u, v) if u < v else (v, u))
        return sorted(found)

    def count_between(self, xs: Sequence[int], ys: Sequence[int], who: Owner) -> int:
        return len(self.edges_between(xs, ys, who))

    def owner_subgraph(self, who: Owner) -> Graph:
        sel = np.flatnonzero(self.owner == who)
        return Graph(self.n, zip(self.eu[sel].tolist(), self.ev[sel].tolist()))

    def owner_edges(self, who: Owner) -> list[tuple[int, int]]:
        sel = np.flatnonzero(self.owner == who)
        return list(zip(self.eu[sel].tolist(), self.ev[sel].tolist()))

    # -- mutation ----------------------------------------------------------

    def claim(self, u: int, v: int, who: Owner) -> int:
        """Give edge {u, v} to ``who``; returns the edge id."""
        if who not in (MAKER, BREAKER):
            raise ValueError("only Maker or Breaker can claim")
        e = self.edge_id(u, v)
        if self.owner[e] != FREE:
            raise AlreadyClaimed(f"edge ({u}, {v}) already owned by {Owner(int(self.owner[e])).name}")
        self.owner[e] = who
        self.state[u, v] = who
        self.state[v, u] = who
        self.deg[FREE, u] -= 1
        self.deg[FREE, v] -= 1
        self.deg[who, u] += 1
        self.deg[who, v] += 1
        self.counts[FREE] -= 1
        self.counts[who] += 1
        pos = int(np.searchsorted(self.free_ids, e))
        self.free_ids = np.delete(self.free_ids, pos)
        return e

    def claim_ids(self, ids: np.ndarray, positions: np.ndarray, who: Owner) -> None:
        """Batch claim of free edges given their ids and positions in ``free_ids``."""
        if len(ids) == 0:
            return
        us, vs = self.eu[ids], self.ev[ids]
        self.owner[ids] = who
        self.state[us, vs] = who
        self.state[vs, us] = who
        hits = np.bincount(us, minlength=self.n) + np.bincount(vs, minlength=self.n)
        self.deg[FREE] -= hits
        self.deg[who] += hits
        self.counts[FREE] -= len(ids)
        self.counts[who] += len(ids)
        self.free_ids = np.delete(self.free_ids, positions)

    # -- consistency -------------------------------------------------------

    def check_invariants(self) -> None:
        """Raise AssertionError if any bookkeeping identity is broken."""
        for who in Owner:
            mask = self.owner == who
            assert self.counts[who] == int(mask.sum()), f"count mismatch for {who.name}"
            hits = (np.bincount(self.eu[mask], minlength=self.n)
                    + np.bincount(self.ev[mask], minlength=self.n))
            assert np.array_equal(hits, self.deg[who]), f"degree mismatch for {who.name}"
            assert int(self.deg[who].sum()) == 2 * int(self.counts[who])
        assert int(self.counts.sum()) == self.n_edges
        full = np.array([self.board.degree(v) for v in range(self.n)])
        assert np.array_equal(self.deg.sum(axis=0), full)
        assert np.array_equal(self.free_ids, np.flatnonzero(self.owner == FREE))
        assert np.array_equal(self.state[self.eu, self.ev], self.owner)

    def copy(self) -> GameGraph:
        g = object.__new__(GameGraph)
        g.board = self.board
        g.n = self.n
        g.eu, g.ev, g.eid = self.eu, self.ev, self.eid   # immutable after construction
        g.owner = self.owner.copy()
        g.state = self.state.copy()
        g.deg = self.deg.copy()
        g.counts = self.counts.copy()
        g.free_ids = self.free_ids.copy()
        return g

    def same_position(self, other: GameGraph) -> bool:
        return self.board == other.board and np.array_equal(self.owner, other.owner)

    # -- edge-list text format ---------------------------------------------

    def to_edge_list(self, include_free: bool = True) -> str:
        out = io.StringIO()
        out.write(self.board.header() + "\n")
        for e in range(self.n_edges):
            o = int(self.owner[e])
            if o == FREE and not include_free:
                continue
            out.write(f"{self.eu[e]} {self.ev[e]} {'FMB'[o]}\n")
        return out.getvalue()

    @classmethod
    def from_edge_list(cls, text: str) -> GameGraph:
        """Parse the ``board ...`` header plus ``u v owner`` lines.

        Blank lines and ``#`` comments are ignored; a missing owner means M.
        Pairs that are not listed stay free.
        """
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("board"):
            raise InvalidBoard("edge list must start with a 'board ...' header")
        g = cls(Board.parse(lines[0]))
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"bad edge line {ln!r}")
            u, v = int(parts[0]), int(parts[1])
            who = Owner.from_letter(parts[2]) if len(parts) == 3 else MAKER
            if who != FREE:
                g.claim(u, v, who)
        return g


def new_board(board: Board) -> GameGraph:
    return GameGraph(board)
