"""Chernoff-type tail bounds for binomial and hypergeometric variables."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import stats


@dataclass(frozen=True)
class TailBoundQuery:
    """``dist`` is ("binomial", n, p) or ("hypergeometric", N, K, n); ``direction`` is "lower" or "upper"."""

    dist: tuple
    direction: str
    a: float

    def __post_init__(self):
        kind = self.dist[0]
        if kind == "binomial":
            _, n, p = self.dist
            if n < 0 or not 0 <= p <= 1:
                raise ValueError("binomial needs n >= 0 and 0 <= p <= 1")
        elif kind == "hypergeometric":
            _, N, K, n = self.dist
            if N < 0 or not (0 <= K <= N and 0 <= n <= N):
                raise ValueError("hypergeometric needs 0 <= K, n <= N")
        else:
            raise ValueError(f"unknown distribution {kind!r}")
        if self.direction not in ("lower", "upper"):
            raise ValueError("direction must be 'lower' or 'upper'")
        if not self.a > 0:
            raise ValueError("a must be positive")
        if self.direction == "upper" and not self.a < 1:
            raise ValueError("the upper-tail bound needs 0 < a < 1")

    @property
    def mu(self) -> float:
        if self.dist[0] == "binomial":
            _, n, p = self.dist
            return n * p
        _, N, K, n = self.dist
        return n * K / N if N else 0.0


def tail_bound(q: TailBoundQuery) -> tuple[float, float]:
    """Returns (bound, mu): exp(-a^2 mu/2) below (1-a)mu, exp(-a^2 mu/3) above (1+a)mu."""
    mu = q.mu
    denom = 2.0 if q.direction == "lower" else 3.0
    return math.exp(-q.a * q.a * mu / denom), mu


def exact_tail(q: TailBoundQuery) -> float:
    """The probability the bound controls: P(X < (1-a)mu) or P(X > (1+a)mu)."""
    mu = q.mu
    if q.dist[0] == "binomial":
        _, n, p = q.dist
        rv = stats.binom(n, p)
    else:
        _, N, K, n = q.dist
        rv = stats.hypergeom(N, K, n)
    if q.direction == "lower":
        x = math.ceil((1 - q.a) * mu) - 1         # largest integer strictly below (1-a)mu
        return float(rv.cdf(x)) if x >= 0 else 0.0
    x = math.floor((1 + q.a) * mu)                # P(X > x)
    return float(rv.sf(x))
