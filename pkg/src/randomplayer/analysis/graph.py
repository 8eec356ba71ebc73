"""Plain undirected simple graph used by every checker.

Vertices are the integers ``0..n-1``. The structure is deliberately small:
checkers treat it as an immutable snapshot, so there is no ownership or
board information here (see :mod:`randomplayer.board` for that).
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable

import numpy as np


class Graph:
    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def from_adjacency(cls, matrix) -> Graph:
        a = np.asarray(matrix, dtype=bool)
        us, vs = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], zip(us.tolist(), vs.tolist()))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls(n, ((i, i + 1) for i in range(n - 1)))

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) outside vertex range")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def number_of_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                if v not in self.adj[u]]

    def copy(self) -> Graph:
        g = Graph(self.n)
        g.adj = [set(a) for a in self.adj]
        return g

    def with_edge(self, u: int, v: int) -> Graph:
        g = self.copy()
        g.add_edge(u, v)
        return g

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the old labels."""
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        h = Graph(len(labels))
        for v in labels:
            for w in self.adj[v]:
                if w in index and v < w:
                    h.add_edge(index[v], index[w])
        return h, labels

    def neighborhood(self, vertices: Iterable[int]) -> set[int]:
        """External neighbourhood N(U): neighbours of U that are not in U."""
        us = set(vertices)
        out: set[int] = set()
        for u in us:
            out |= self.adj[u]
        return out - us

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def bipartition(self) -> tuple[list[int], list[int]] | None:
        """Return a 2-colouring as (colour-0 vertices, colour-1 vertices), or None."""
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] != -1:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if colour[y] == -1:
                        colour[y] = 1 - colour[x]
                        queue.append(y)
                    elif colour[y] == colour[x]:
                        return None
        return ([v for v in range(self.n) if colour[v] == 0],
                [v for v in range(self.n) if colour[v] == 1])

    def adjacency_masks(self) -> list[int]:
        """Neighbourhood of each vertex as a Python int bitmask."""
        masks = []
        for a in self.adj:
            m = 0
            for w in a:
                m |= 1 << w
            masks.append(m)
        return masks

    def to_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, nb in enumerate(self.adj):
            if nb:
                a[u, list(nb)] = True
        return a

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.number_of_edges()})"
