"""Move values and the protocol every strategy state machine follows."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Protocol, Union

from ..board import GameGraph, Owner


@dataclass(frozen=True)
class Claim:
    u: int
    v: int


@dataclass(frozen=True)
class Forfeit:
    reason: str


@dataclass(frozen=True)
class Done:
    witness: Any = None


Move = Union[Claim, Forfeit, Done]


class Strategy(Protocol):
    side: Owner
    target: str

    def next_move(self, g: GameGraph) -> Move: ...

    def poll(self, g: GameGraph) -> Done | None: ...


@dataclass
class StrategyStats:
    moves: int = 0
    zero_cost_steps: int = 0
    replans: int = 0
    extra: dict = field(default_factory=dict)


def canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)
