"""Box and d-Box games between a uniformly random player and a greedy adversary.

In Box(n x s) the random side is BoxBreaker, who needs one element in every
box; the adversary is BoxMaker. In d-Box(n x s) the random side is d-Maker,
who needs d elements in every box, against d-Breaker. Either way the random
side has a per-box quota (1 or d) and the adversary tries to make some box
miss it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MilestoneUnlogged

FREE, RANDOM, ADVERSARY = 0, 1, 2


class BoxResult(str, enum.Enum):
    BOXBREAKER_WIN = "BoxBreakerWin"      # the random side met its quota in every box
    BOXMAKER_WIN = "BoxMakerWin"          # some box can no longer reach the quota
    UNDECIDED = "Undecided"

    def __str__(self) -> str:
        return self.value


class BoxState:
    def __init__(self, n: int, s: int, d: int | None = None):
        if n < 1 or s < 1:
            raise ValueError("need at least one box with at least one element")
        if d is not None and not 1 <= d <= s:
            raise ValueError("d must lie in 1..s")
        self.n, self.s, self.d = n, s, d
        self.quota = 1 if d is None else d
        self.owner = np.zeros((n, s), dtype=np.int8)
        self.counts = np.zeros((n, 3), dtype=np.int64)
        self.counts[:, FREE] = s
        self.free_ids = np.arange(n * s, dtype=np.int64)
        parts = d if d is not None else 1
        self.subbox = np.concatenate([np.full(len(chunk), i) for i, chunk in
                                      enumerate(np.array_split(np.arange(s), parts))])
        self.half = math.ceil(self.quota / 2)
        self.milestone = np.full(n, -1, dtype=np.int64)

    # counts under the Box-game names
    @property
    def boxbreaker(self) -> np.ndarray:
        return self.counts[:, RANDOM]

    @property
    def boxmaker(self) -> np.ndarray:
        return self.counts[:, ADVERSARY]

    @property
    def free(self) -> np.ndarray:
        return self.counts[:, FREE]

    @property
    def free_total(self) -> int:
        return len(self.free_ids)

    def _take(self, flat: int, who: int) -> None:
        box, el = divmod(int(flat), self.s)
        self.owner[box, el] = who
        self.counts[box, FREE] -= 1
        self.counts[box, who] += 1
        if who == RANDOM and self.counts[box, RANDOM] == self.half and self.milestone[box] < 0:
            self.milestone[box] = self.counts[box, FREE]

    def check(self) -> None:
        assert (self.counts.sum(axis=1) == self.s).all()
        for who in (FREE, RANDOM, ADVERSARY):
            assert np.array_equal((self.owner == who).sum(axis=1), self.counts[:, who])
        assert np.array_equal(self.free_ids, np.flatnonzero(self.owner.ravel() == FREE))


def boxbreaker_random_move(st: BoxState, count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """The random side claims min(count, free) elements uniformly without replacement."""
    if count < 1:
        raise ValueError("count must be at least 1")
    k = min(count, st.free_total)
    if k == 0:
        return []
    pos = rng.choice(st.free_total, k, replace=False)
    flat = st.free_ids[pos]
    for f in flat:
        st._take(f, RANDOM)
    st.free_ids = np.delete(st.free_ids, pos)
    return [divmod(int(f), st.s) for f in flat]


random_side_move = boxbreaker_random_move


def boxmaker_greedy_move(st: BoxState, count: int) -> list[tuple[int, int]]:
    """Fill the box still short of the opponent's quota with the fewest free elements."""
    if count < 1:
        raise ValueError("count must be at least 1")
    out = []
    for _ in range(count):
        free = st.counts[:, FREE]
        if not free.any():
            break
        open_ = (st.counts[:, RANDOM] < st.quota) & (free > 0)
        if open_.any():
            cand = np.flatnonzero(open_)
            box = int(cand[np.argmin(free[cand])])
        else:
            box = int(np.flatnonzero(free > 0)[0])
        el = int(np.flatnonzero(st.owner[box] == FREE)[0])
        flat = box * st.s + el
        st._take(flat, ADVERSARY)
        st.free_ids = np.delete(st.free_ids, np.searchsorted(st.free_ids, flat))
        out.append((box, el))
    return out


adversary_greedy_move = boxmaker_greedy_move


def box_winner(st: BoxState) -> BoxResult:
    r = st.counts[:, RANDOM]
    if (r >= st.quota).all():
        return BoxResult.BOXBREAKER_WIN
    if ((r + st.counts[:, FREE]) < st.quota).any():
        return BoxResult.BOXMAKER_WIN
    return BoxResult.UNDECIDED


def dbox_milestone_check(st: BoxState) -> bool:
    """Every box still had at least s/2 free elements when the random side reached d/2 in it."""
    if st.d is None:
        raise ValueError("milestones are defined for the d-Box game")
    if (st.milestone < 0).any():
        missing = int(np.flatnonzero(st.milestone < 0)[0])
        raise MilestoneUnlogged(f"box {missing} never reached {st.half} random elements")
    return bool((st.milestone >= st.s / 2).all())


def all_subboxes_touched(st: BoxState) -> bool:
    parts = st.d if st.d is not None else 1
    touched = np.zeros((st.n, parts), dtype=bool)
    boxes, els = np.nonzero(st.owner == RANDOM)
    touched[boxes, st.subbox[els]] = True
    return bool(touched.all())


@dataclass
class BoxOutcome:
    result: BoxResult
    rounds: int
    milestone_ok: bool | None = None
    reduction_ok: bool = True
    state: BoxState | None = field(default=None, repr=False)


def play_box_game(n: int, s: int, random_bias: int, adversary_bias: int = 1, d: int | None = None,
                  rng: np.random.Generator | None = None, random_first: bool = True,
                  debug: bool = False) -> BoxOutcome:
    """Play until decided. The random side moves first by default (it holds the Breaker role
    in the Box game); for d-Box the same default keeps the two games comparable."""
    rng = rng if rng is not None else np.random.default_rng(0)
    st = BoxState(n, s, d)
    rounds = 0
    res = BoxResult.UNDECIDED
    while res == BoxResult.UNDECIDED and st.free_total > 0:
        rounds += 1
        for turn in ((0, 1) if random_first else (1, 0)):
            if turn == 0:
                boxbreaker_random_move(st, random_bias, rng)
            else:
                boxmaker_greedy_move(st, adversary_bias)
            res = box_winner(st)
            if res != BoxResult.UNDECIDED or st.free_total == 0:
                break
        if debug:
            st.check()
    if res == BoxResult.UNDECIDED:
        res = box_winner(st)
    reduction_ok = (not all_subboxes_touched(st)) or res == BoxResult.BOXBREAKER_WIN
    ms = None
    if d is not None and res == BoxResult.BOXBREAKER_WIN:
        ms = dbox_milestone_check(st)
    return BoxOutcome(res, rounds, ms, reduction_ok, st)


@dataclass
class BoxBatch:
    n: int
    s: int
    bias: int
    d: int | None
    trials: int
    random_wins: int
    milestone_checked: int
    milestone_passed: int
    reduction_failures: int

    @property
    def win_rate(self) -> float:
        return self.random_wins / self.trials

    @property
    def milestone_rate(self) -> float | None:
        return self.milestone_passed / self.milestone_checked if self.milestone_checked else None


def box_batch(n: int, s: int, bias: int, trials: int, seed: int = 0, d: int | None = None,
              adversary_bias: int = 1) -> BoxBatch:
    from .montecarlo import trial_seed

    wins = checked = passed = bad = 0
    for i in range(trials):
        out = play_box_game(n, s, bias, adversary_bias, d, np.random.default_rng(trial_seed(seed, i)))
        wins += out.result == BoxResult.BOXBREAKER_WIN
        bad += not out.reduction_ok
        if out.milestone_ok is not None:
            checked += 1
            passed += out.milestone_ok
    return BoxBatch(n, s, bias, d, trials, wins, checked, passed, bad)
