"""Round loop for (1:b) random-Breaker and (m:1) random-Maker games.

Randomness comes from numpy's PCG64 generator seeded with the game's 64-bit
seed, so a (spec, seed) pair fixes the whole game.
"""

from __future__ import annotations

import dataclasses
import io
import json
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .analysis.graph import Graph
from .board import BREAKER, FREE, MAKER, Board, GameGraph, Owner
from .errors import StrategyMismatch
from .strategies.base import Claim, Done, Forfeit

RNG_ALGORITHM = "numpy.PCG64"

HAM = "HamiltonCycle"
PM = "PerfectMatching"
KCONN = "KConnectivity"
MINDEG = "PositiveMinDegree"
TARGETS = (HAM, PM, KCONN, MINDEG)

BREAKER_FIRST = "BreakerFirst"
MAKER_FIRST = "MakerFirst"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed % 2**64))


@dataclass
class GameSpec:
    board: Board
    smart: Owner = MAKER
    random_bias: int = 1
    smart_bias: int = 1
    move_order: str = BREAKER_FIRST
    target: str = HAM
    epsilon: float = 0.2
    seed: int = 0
    round_cap: int | None = None
    # strategy parameters
    strategy: str | None = None
    alpha: float = 0.25
    k: int = 2
    breaker: str = "isolation"
    c: float = 0.5
    paper_faithful: bool = False
    embedded: bool = False

    def __post_init__(self):
        if isinstance(self.smart, str):
            self.smart = Owner[self.smart.upper()]
        if self.smart not in (MAKER, BREAKER):
            raise ValueError("smart must be Maker or Breaker")
        if self.random_bias < 0:
            raise ValueError("random_bias must be non-negative")
        if self.smart_bias < 1:
            raise ValueError("smart_bias must be positive")
        if self.move_order not in (BREAKER_FIRST, MAKER_FIRST):
            raise ValueError(f"move_order must be {BREAKER_FIRST} or {MAKER_FIRST}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.round_cap is not None and self.round_cap < 1:
            raise ValueError("round_cap must be positive")
        if self.target == KCONN and self.k < 1:
            raise ValueError("k must be positive")

    @property
    def cap(self) -> int:
        return self.round_cap if self.round_cap is not None else max(1, self.board.n_edges)

    # -- config file -------------------------------------------------------

    def to_config(self) -> str:
        out = io.StringIO()
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "board":
                v = str(v)
            elif f.name == "smart":
                v = v.name.capitalize()
            elif v is None:
                v = "none"
            elif isinstance(v, bool):
                v = "true" if v else "false"
            out.write(f"{f.name} = {v}\n")
        return out.getvalue()

    @classmethod
    def from_config(cls, text: str, **overrides) -> GameSpec:
        kw: dict[str, Any] = {}
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        for ln in text.splitlines():
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            if "=" not in ln:
                raise ValueError(f"config line without '=': {ln!r}")
            key, val = (x.strip() for x in ln.split("=", 1))
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            kw[key] = _convert(key, val)
        kw.update(overrides)
        if "board" not in kw:
            raise ValueError("config must set board")
        return cls(**kw)


def _convert(key: str, val: str):
    low = val.lower()
    if key == "board":
        return Board.parse(val)
    if key in ("random_bias", "smart_bias", "seed", "k"):
        return int(val, 0)
    if key == "round_cap":
        return None if low == "none" else int(val)
    if key in ("epsilon", "alpha", "c"):
        return float(val)
    if key in ("paper_faithful", "embedded"):
        if low not in ("true", "false"):
            raise ValueError(f"{key} must be true or false")
        return low == "true"
    if key == "strategy":
        return None if low == "none" else val
    return val


@dataclass
class TrialOutcome:
    winner: Owner | None
    rounds: int
    forfeit: bool
    milestones: list[tuple[str, int]] = field(default_factory=list)
    final_stats: dict = field(default_factory=dict)
    transcript: list | None = None
    witness: Any = None
    reason: str = ""
    target_verdict: str | None = None
    strategy_stats: dict = field(default_factory=dict)
    graph: GameGraph | None = field(default=None, repr=False)

    def record(self) -> dict:
        return {
            "winner": None if self.winner is None else self.winner.name.capitalize(),
            "rounds": self.rounds,
            "forfeit": self.forfeit,
            "milestones": [[lbl, r] for lbl, r in self.milestones],
        }


# -- random player -------------------------------------------------------------

def random_move(g: GameGraph, who: Owner, count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Claim min(count, #free) distinct free edges uniformly without replacement."""
    if count < 0:
        raise ValueError("count must be non-negative")
    ids = _random_ids(g, who, count, rng)
    return [(int(g.eu[e]), int(g.ev[e])) for e in ids]


def _random_ids(g: GameGraph, who: Owner, count: int, rng: np.random.Generator) -> np.ndarray:
    nfree = len(g.free_ids)
    k = min(count, nfree)
    if k == 0:
        return np.empty(0, dtype=np.int32)
    pos = rng.choice(nfree, k, replace=False) if k > 1 else rng.integers(nfree, size=1)
    ids = g.free_ids[pos]
    g.claim_ids(ids, pos, who)
    return ids


# -- strategies ----------------------------------------------------------------

def make_strategy(spec: GameSpec):
    from .strategies.ham import SHam
    from .strategies.isolation import Isolation, RandomBreaker
    from .strategies.kconn import SK
    from .strategies.matching import SPM, embed_halves

    b = spec.board
    if spec.smart == BREAKER:
        if spec.breaker == "isolation":
            if b.kind != "complete":
                raise StrategyMismatch("the isolation strategy plays on complete boards")
            return Isolation(b.n_vertices, spec.random_bias, spec.c, spec.paper_faithful)
        if spec.breaker == "random":
            return RandomBreaker()
        raise StrategyMismatch(f"unknown Breaker strategy {spec.breaker!r}")
    name = spec.strategy or {HAM: "s_ham", PM: "s_pm", KCONN: "s_k"}.get(spec.target)
    if name == "s_ham":
        if spec.target != HAM or b.kind != "complete":
            raise StrategyMismatch("s_ham plays the Hamiltonicity game on a complete board")
        return SHam(b.n_vertices)
    if name == "s_pm":
        if spec.target != PM:
            raise StrategyMismatch("s_pm plays the perfect-matching game")
        if b.kind == "bipartite":
            n0, n1 = b.sizes
            if n0 != n1:
                raise StrategyMismatch("s_pm needs equal part sizes")
            return SPM(range(n0), range(n0, 2 * n0), spec.alpha, spec.epsilon)
        A, B, _ = embed_halves(b.n_vertices)
        return SPM(A, B, spec.alpha, spec.epsilon)
    if name == "s_k":
        if spec.target != KCONN or b.kind != "complete":
            raise StrategyMismatch("s_k plays the k-connectivity game on a complete board")
        return SK(b.n_vertices, spec.k, spec.alpha, spec.epsilon)
    raise StrategyMismatch(f"no Maker strategy for target {spec.target!r}")


_TARGET_OF = {"ham": HAM, "pm": PM, "kconn": KCONN}


def _check_match(spec: GameSpec, strategy) -> None:
    if getattr(strategy, "side", None) != spec.smart:
        raise StrategyMismatch(f"strategy plays {getattr(strategy, 'side', None)!r}, spec.smart is {spec.smart.name}")
    if spec.smart == MAKER and _TARGET_OF.get(strategy.target) != spec.target:
        raise StrategyMismatch(f"strategy builds {strategy.target!r}, spec.target is {spec.target}")


# -- target evaluation ---------------------------------------------------------

def evaluate_target(spec: GameSpec, graph: Graph, ham_budget: int | None = 2_000_000):
    """Check Maker's final graph against the spec's target; returns a CheckReport."""
    from .analysis.connectivity import k_connected
    from .analysis.hamilton import is_hamiltonian
    from .analysis.matching import has_perfect_matching
    from .analysis.report import CheckReport, Verdict

    if spec.target == HAM:
        return is_hamiltonian(graph, cap=None, budget=ham_budget)
    if spec.target == PM:
        left = None
        if spec.board.kind == "bipartite":
            left = range(spec.board.sizes[0])
            need = min(spec.board.sizes)
        else:
            need = graph.n // 2
        return has_perfect_matching(graph, need, left=left)
    if spec.target == KCONN:
        return k_connected(graph, spec.k)
    isolated = [v for v in range(graph.n) if not graph.adj[v]]
    if isolated:
        return CheckReport("min_degree", Verdict.NO, isolated[:1])
    return CheckReport("min_degree", Verdict.YES, None)


# -- the game ------------------------------------------------------------------

class _Log:
    def __init__(self, keep: bool):
        self.keep = keep
        self.moves: list[tuple[int, Owner, np.ndarray]] = []

    def add(self, rnd: int, who: Owner, ids) -> None:
        if self.keep and len(ids):
            self.moves.append((rnd, who, np.asarray(ids, dtype=np.int64)))


def run_game(spec: GameSpec, strategy=None, *, keep_transcript: bool = True,
             on_round: Callable[[int, GameGraph], bool | None] | None = None,
             debug: bool = False, evaluate: bool = True) -> TrialOutcome:
    """Play one game. ``on_round(round, g)`` runs after every round; returning True stops the game."""
    if strategy is None:
        strategy = make_strategy(spec)
    _check_match(spec, strategy)
    g = GameGraph(spec.board)
    rng = make_rng(spec.seed)
    log = _Log(keep_transcript)
    if spec.smart == MAKER:
        out = _random_breaker_game(spec, strategy, g, rng, log, on_round, debug)
    else:
        out = _random_maker_game(spec, strategy, g, rng, log, on_round, debug, evaluate)
    out.graph = g
    out.final_stats = final_stats(g)
    out.strategy_stats = dataclasses.asdict(strategy.stats) if hasattr(strategy, "stats") else {}
    if keep_transcript:
        out.transcript = [(r, who, (int(g.eu[e]), int(g.ev[e]))) for r, who, ids in log.moves for e in ids]
    return out


def final_stats(g: GameGraph) -> dict:
    return {
        "max_deg_maker": g.max_degree(MAKER),
        "max_deg_breaker": g.max_degree(BREAKER),
        "maker_edges": int(g.counts[MAKER]),
        "breaker_edges": int(g.counts[BREAKER]),
        "free_edges": int(g.counts[FREE]),
    }


def _smart_turn(strategy, g: GameGraph, rnd: int, log: _Log):
    """Returns None to continue, or (kind, payload) with kind in done/forfeit."""
    mv = strategy.next_move(g)
    if isinstance(mv, Claim):
        e = g.claim(mv.u, mv.v, strategy.side)
        log.add(rnd, strategy.side, [e])
        d = strategy.poll(g)
        if d is not None:
            return "done", d.witness
        return None
    if isinstance(mv, Done):
        return "done", mv.witness
    if isinstance(mv, Forfeit):
        return "forfeit", mv.reason
    raise TypeError(f"strategy returned {mv!r}")


def _random_breaker_game(spec, strategy, g, rng, log, on_round, debug) -> TrialOutcome:
    cap = spec.cap
    breaker_first = spec.move_order == BREAKER_FIRST
    rnd = 0
    while rnd < cap:
        rnd += 1
        if breaker_first:
            log.add(rnd, BREAKER, _random_ids(g, BREAKER, spec.random_bias, rng))
        for _ in range(spec.smart_bias):
            if g.n_free == 0:
                if debug:
                    g.check_invariants()
                return TrialOutcome(BREAKER, rnd, False, reason="board exhausted")
            res = _smart_turn(strategy, g, rnd, log)
            if res is not None:
                if debug:
                    g.check_invariants()
                kind, payload = res
                if kind == "done":
                    return TrialOutcome(MAKER, rnd, False, witness=payload, reason="target built")
                return TrialOutcome(BREAKER, rnd, True, reason=payload)
        if not breaker_first:
            log.add(rnd, BREAKER, _random_ids(g, BREAKER, spec.random_bias, rng))
        if debug:
            g.check_invariants()
        if on_round is not None and on_round(rnd, g):
            return TrialOutcome(None, rnd, False, reason="stopped by observer")
        if g.n_free == 0:
            return TrialOutcome(BREAKER, rnd, False, reason="board exhausted")
    return TrialOutcome(BREAKER, rnd, False, reason="round cap")


def _random_maker_game(spec, strategy, g, rng, log, on_round, debug, evaluate) -> TrialOutcome:
    cap = spec.cap
    breaker_first = spec.move_order == BREAKER_FIRST
    smart_active = not (strategy.target == "random")
    forfeited = False
    reason = ""
    rnd = 0
    isolated = None
    while rnd < cap and g.n_free > 0:
        if not smart_active and on_round is None and not debug:
            rnd = _fast_forward(spec, g, rng, log, rnd, breaker_first)
            break
        rnd += 1
        for step in ((BREAKER, MAKER) if breaker_first else (MAKER, BREAKER)):
            if step == MAKER:
                log.add(rnd, MAKER, _random_ids(g, MAKER, spec.random_bias, rng))
                continue
            for _ in range(spec.smart_bias):
                if g.n_free == 0:
                    break
                if smart_active:
                    res = _smart_turn(strategy, g, rnd, log)
                    if res is None:
                        continue
                    kind, payload = res
                    if kind == "done":
                        isolated = payload
                        break
                    smart_active = False
                    forfeited = True
                    reason = payload
                log.add(rnd, BREAKER, _random_ids(g, BREAKER, 1, rng))
            if isolated is not None:
                break
        if debug:
            g.check_invariants()
        if isolated is not None:
            return TrialOutcome(BREAKER, rnd, False, [("Isolated", rnd)], witness=isolated,
                                reason="vertex isolated", target_verdict="No")
        if on_round is not None and on_round(rnd, g):
            break
    out = TrialOutcome(None, rnd, forfeited, reason=reason or "board exhausted")
    if evaluate:
        rep = evaluate_target(spec, g.owner_subgraph(MAKER))
        out.target_verdict = str(rep.verdict)
        if rep.exact:
            out.winner = MAKER if rep.yes else BREAKER
            out.witness = rep.witness
    return out


def _fast_forward(spec, g: GameGraph, rng, log: _Log, rnd: int, breaker_first: bool) -> int:
    """Both players random from here on: a uniform order of the free edges decides everything."""
    order = g.free_ids[rng.permutation(len(g.free_ids))]
    m = spec.random_bias
    b = spec.smart_bias
    cap = spec.cap
    i = 0
    firsts = (BREAKER, b), (MAKER, m)
    if not breaker_first:
        firsts = firsts[::-1]
    chunks: dict[Owner, list[np.ndarray]] = {MAKER: [], BREAKER: []}
    while i < len(order) and rnd < cap:
        rnd += 1
        for who, cnt in firsts:
            ids = order[i:i + cnt]
            i += len(ids)
            if len(ids):
                chunks[who].append(ids)
                log.add(rnd, who, ids)
    for who, parts in chunks.items():
        if parts:
            ids = np.concatenate(parts)
            _assign(g, ids, who)
    g.free_ids = np.flatnonzero(g.owner == FREE).astype(np.int32)
    return rnd


def _assign(g: GameGraph, ids: np.ndarray, who: Owner) -> None:
    us, vs = g.eu[ids], g.ev[ids]
    g.owner[ids] = who
    g.state[us, vs] = who
    g.state[vs, us] = who
    hits = np.bincount(us, minlength=g.n) + np.bincount(vs, minlength=g.n)
    g.deg[FREE] -= hits
    g.deg[who] += hits
    g.counts[FREE] -= len(ids)
    g.counts[who] += len(ids)


# -- transcripts ---------------------------------------------------------------

def transcript_lines(transcript: Iterable) -> str:
    out = io.StringIO()
    for rnd, who, (u, v) in transcript:
        out.write(json.dumps({"round": rnd, "player": who.name.capitalize(), "edge": [u, v]},
                             separators=(",", ":")) + "\n")
    return out.getvalue()


def parse_transcript(text: str) -> list[tuple[int, Owner, tuple[int, int]]]:
    out = []
    for ln in text.splitlines():
        if ln.strip():
            rec = json.loads(ln)
            u, v = rec["edge"]
            out.append((int(rec["round"]), Owner[rec["player"].upper()], (int(u), int(v))))
    return out


def replay(board: Board, transcript: Iterable) -> GameGraph:
    g = GameGraph(board)
    for _, who, (u, v) in transcript:
        g.claim(u, v, who)
    return g
