"""Seeded trial batches, win verification, Wilson intervals and sweeps."""

from __future__ import annotations

import dataclasses
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis.graph import Graph
from .analysis.hamilton import is_spanning_cycle
from .analysis.report import Verdict
from .board import BREAKER, MAKER, Board, GameGraph
from .engine import HAM, KCONN, PM, RNG_ALGORITHM, GameSpec, evaluate_target, run_game, transcript_lines
from .errors import EmptyGrid, VerificationFailure

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
LANE = 0xD1B54A32D192ED03
WORKERS_ENV = "RANDOMPLAYER_WORKERS"
SEED_DERIVATION = "splitmix64(master + (index+1)*0x9E3779B97F4A7C15 mod 2^64)"
CSV_HEADER = "n,bias,epsilon,k,trials,wins,win_rate,wilson_lo,wilson_hi,rounds_mean,rounds_max,forfeits"


def splitmix64(x: int) -> int:
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, index: int) -> int:
    # splitmix64 is a bijection, so distinct indices give distinct seeds
    return splitmix64(master_seed + (index + 1) * GOLDEN)


def lane_seed(master_seed: int, point: int) -> int:
    return splitmix64(master_seed ^ ((point + 1) * LANE & MASK64))


def wilson(wins: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = wins / trials
    den = 1 + z * z / trials
    mid = (p + z * z / (2 * trials)) / den
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / den
    # clamp so rounding never pushes p outside its own interval
    return max(0.0, min(p, mid - half)), min(1.0, max(p, mid + half))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class BatchSpec:
    game: GameSpec
    trials: int
    master_seed: int = 0
    sweep: dict[str, list] | None = None
    verify: bool = True
    parallelism: int = field(default_factory=default_workers)
    lemma_stats: bool = True
    dump_dir: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")


@dataclass
class Aggregate:
    wins: int
    trials: int
    win_rate: float
    wilson_95: tuple[float, float]
    rounds: tuple[float, int]
    forfeit_count: int
    lemma_stat_pass_rates: dict[str, float] = field(default_factory=dict)
    verification_failures: int = 0
    unevaluated: int = 0
    max_win_rounds: int = 0
    n: int = 0
    bias: int = 0
    epsilon: float = 0.0
    k: int | None = None

    def csv_row(self) -> str:
        lo, hi = self.wilson_95
        return ",".join([str(self.n), str(self.bias), f"{self.epsilon:g}", "" if self.k is None else str(self.k),
                         str(self.trials), str(self.wins), f"{self.win_rate:.4f}", f"{lo:.4f}", f"{hi:.4f}",
                         f"{self.rounds[0]:.2f}", str(self.rounds[1]), str(self.forfeit_count)])


@dataclass
class TrialRecord:
    index: int
    seed: int
    winner: str | None
    rounds: int
    forfeit: bool
    milestones: list = field(default_factory=list)
    verdict: str | None = None
    lemma: dict[str, bool] = field(default_factory=dict)

    def line(self) -> str:
        d = {"index": self.index, "seed": self.seed, "winner": self.winner, "rounds": self.rounds,
             "forfeit": self.forfeit, "milestones": self.milestones}
        return json.dumps(d, separators=(",", ":"))


@dataclass
class BatchResult:
    aggregate: Aggregate
    records: list[TrialRecord]

    def records_text(self) -> str:
        return "".join(r.line() + "\n" for r in self.records)


# -- verification --------------------------------------------------------------

def _maker_graph(g: GameGraph) -> Graph:
    return g.owner_subgraph(MAKER)


def _witness_ok(spec: GameSpec, g: GameGraph, witness) -> str | None:
    """None when the strategy's witness is sound on Maker's final graph, else the reason."""
    n = g.n
    maker = lambda u, v: g.owner_of(u, v) == MAKER
    if spec.target == HAM:
        if not is_spanning_cycle(_maker_graph(g), list(witness or [])):
            return "witness is not a spanning cycle of Maker's graph"
    elif spec.target == PM:
        edges = list(witness or [])
        need = min(spec.board.sizes) if spec.board.kind == "bipartite" else n // 2
        seen = set()
        for u, v in edges:
            if not maker(u, v) or u in seen or v in seen:
                return "witness is not a matching of Maker edges"
            seen |= {u, v}
        if len(edges) != need:
            return f"witness matching has {len(edges)} edges, need {need}"
    elif spec.target == KCONN:
        w = witness or {}
        sub = Graph(n)
        for cyc in w.get("cycles", []):
            for i in range(len(cyc)):
                u, v = cyc[i], cyc[(i + 1) % len(cyc)]
                if not maker(u, v):
                    return "witness cycle uses a non-Maker edge"
                sub.add_edge(u, v)
        for u, v in [e for m in w.get("matchings", []) for e in m] + list(w.get("attachments", [])):
            if not maker(u, v):
                return "witness edge is not Maker's"
            sub.add_edge(u, v)
        rep = evaluate_target(spec, sub)
        if rep.verdict != Verdict.YES:
            return "witness union is not k-connected"
    return None


def verify_outcome(spec: GameSpec, out) -> str | None:
    g = out.graph
    if out.winner == MAKER:
        if spec.smart == MAKER:
            bad = _witness_ok(spec, g, out.witness)
            if bad:
                return bad
            rep = evaluate_target(spec, _maker_graph(g))
            if rep.verdict != Verdict.YES:
                return f"oracle verdict {rep.verdict} on a claimed Maker win"
        else:
            bad = _witness_ok(spec, g, out.witness) if spec.target in (HAM, PM) else None
            if bad:
                return bad
    elif out.winner == BREAKER and spec.smart == BREAKER and out.reason == "vertex isolated":
        v = out.witness
        if g.degree(v, MAKER) != 0 or g.degree(v, BREAKER) != spec.board.degree(v):
            return f"vertex {v} is not isolated in Maker's graph"
    return None


# -- lemma statistics ----------------------------------------------------------

def lemma_checks(spec: GameSpec, g: GameGraph, rng: np.random.Generator, pairs: int = 20) -> dict[str, bool]:
    """End-of-game structure of a random-Breaker game: Breaker's max degree and free-edge density."""
    eps = spec.epsilon
    b = spec.board
    n = b.sizes[0]
    out = {"breaker_max_degree": g.max_degree(BREAKER) <= (1 - eps / 2) * n}
    size = max(1, math.isqrt(n))
    ok = True
    for _ in range(pairs):
        if b.kind == "complete":
            if 2 * size > n:
                break
            perm = rng.permutation(n)
            X, Y = perm[:size], perm[size:2 * size]
        else:
            X = rng.choice(b.sizes[0], min(size, b.sizes[0]), replace=False)
            Y = b.sizes[0] + rng.choice(b.sizes[1], min(size, b.sizes[1]), replace=False)
        if len(g.free_edges_between(X, Y)) < eps / 3 * len(X) * len(Y):
            ok = False
            break
    out["free_pairs_dense"] = ok
    return out


# -- batches -------------------------------------------------------------------

def _one_trial(game: GameSpec, index: int, seed: int, verify: bool, lemma: bool, dump_dir: str | None):
    spec = dataclasses.replace(game, seed=seed)
    lemma = lemma and spec.smart == MAKER and spec.target in (HAM, PM)
    snap_round = spec.board.sizes[0]
    stats: dict[str, bool] = {}

    def snapshot(rnd, g):
        # the degree lemma speaks about the position after about n rounds
        if rnd == snap_round:
            stats.update(lemma_checks(spec, g, np.random.default_rng(seed)))
        return False

    out = run_game(spec, keep_transcript=verify, on_round=snapshot if lemma else None)
    if verify:
        bad = verify_outcome(spec, out)
        if bad:
            path = _dump(spec, out, index, dump_dir)
            raise VerificationFailure(f"trial {index} (seed {seed}): {bad}; transcript at {path}",
                                      transcript=path)
    rec = TrialRecord(index, seed, None if out.winner is None else out.winner.name.capitalize(),
                      out.rounds, out.forfeit, [[lbl, r] for lbl, r in out.milestones],
                      out.target_verdict)
    if lemma:
        rec.lemma = stats or lemma_checks(spec, out.graph, np.random.default_rng(seed))
    return rec


def _dump(spec: GameSpec, out, index: int, dump_dir: str | None) -> str:
    d = Path(dump_dir or ".")
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"failed_trial_{index}.jsonl"
    path.write_text(transcript_lines(out.transcript or []))
    (d / f"failed_trial_{index}.cfg").write_text(spec.to_config())
    return str(path)


def _run_chunk(args):
    game, items, verify, lemma, dump_dir = args
    return [_one_trial(game, i, s, verify, lemma, dump_dir) for i, s in items]


def run_batch(spec: BatchSpec) -> BatchResult:
    items = [(i, trial_seed(spec.master_seed, i)) for i in range(spec.trials)]
    if spec.parallelism == 1 or spec.trials == 1:
        records = _run_chunk((spec.game, items, spec.verify, spec.lemma_stats, spec.dump_dir))
    else:
        chunks = [items[w::spec.parallelism] for w in range(spec.parallelism)]
        with ProcessPoolExecutor(max_workers=spec.parallelism) as ex:
            parts = ex.map(_run_chunk, [(spec.game, c, spec.verify, spec.lemma_stats, spec.dump_dir)
                                        for c in chunks if c])
            records = [r for p in parts for r in p]
    records.sort(key=lambda r: r.index)
    return BatchResult(aggregate(spec.game, records), records)


def aggregate(game: GameSpec, records: list[TrialRecord]) -> Aggregate:
    t = len(records)
    wins = sum(r.winner == "Maker" for r in records)
    rounds = [r.rounds for r in records]
    win_rounds = [r.rounds for r in records if r.winner == "Maker"]
    rates: dict[str, float] = {}
    labels = sorted({k for r in records for k in r.lemma})
    for lbl in labels:
        vals = [r.lemma[lbl] for r in records if lbl in r.lemma]
        rates[lbl] = sum(vals) / len(vals)
    b = game.board
    return Aggregate(
        wins=wins, trials=t, win_rate=wins / t if t else 0.0, wilson_95=wilson(wins, t),
        rounds=(float(np.mean(rounds)) if t else 0.0, max(rounds) if t else 0),
        forfeit_count=sum(r.forfeit for r in records), lemma_stat_pass_rates=rates,
        unevaluated=sum(r.winner is None for r in records),
        max_win_rounds=max(win_rounds) if win_rounds else 0,
        n=b.sizes[0],
        bias=game.random_bias, epsilon=game.epsilon, k=game.k if game.target == KCONN else None)


# -- sweeps --------------------------------------------------------------------

GRID_KEYS = ("n", "bias", "b", "m", "epsilon", "k")


def _apply_point(game: GameSpec, point: dict) -> GameSpec:
    kw = {}
    for key, val in point.items():
        if key == "n":
            b = game.board
            kw["board"] = Board.complete(val) if b.kind == "complete" else Board.bipartite(val, val)
        elif key in ("bias", "b", "m"):
            kw["random_bias"] = int(val)
        elif key == "epsilon":
            kw["epsilon"] = float(val)
        elif key == "k":
            kw["k"] = int(val)
        else:
            raise ValueError(f"unknown grid key {key!r}")
    return dataclasses.replace(game, **kw)


def grid_points(grid: dict[str, list] | None) -> list[dict]:
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise EmptyGrid("sweep grid has no points")
    points = [{}]
    for key in grid:
        points = [{**p, key: v} for p in points for v in grid[key]]
    return points


def sweep(spec: BatchSpec) -> list[tuple[dict, BatchResult]]:
    out = []
    for i, point in enumerate(grid_points(spec.sweep)):
        sub = dataclasses.replace(spec, game=_apply_point(spec.game, point),
                                  master_seed=lane_seed(spec.master_seed, i), sweep=None)
        out.append((point, run_batch(sub)))
    return out


def csv_table(aggs: list[Aggregate], master_seed: int | None = None) -> str:
    buf = io.StringIO()
    seed = "" if master_seed is None else f" master_seed={master_seed}"
    buf.write(f"# randomplayer {__version__} rng={RNG_ALGORITHM} seed={SEED_DERIVATION}{seed}\n")
    buf.write(CSV_HEADER + "\n")
    for a in aggs:
        buf.write(a.csv_row() + "\n")
    return buf.getvalue()
