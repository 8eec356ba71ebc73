"""Acceptance criteria with frozen thresholds.

Each test prints one PASS/FAIL line straight to the terminal. Batch results
are cached so the soundness and determinism criteria reuse the game batches
instead of replaying them.
"""

from __future__ import annotations

import functools
import math

import networkx as nx
import numpy as np
import pytest

from randomplayer.analysis import (Graph, TailBoundQuery, Verdict, boosters, hall_violator,
                                   has_perfect_matching, is_expander, is_hamiltonian, k_connected,
                                   tail_bound)
from randomplayer.analysis.bounds import exact_tail
from randomplayer.board import BREAKER, Board
from randomplayer.boxgame import box_batch
from randomplayer.engine import HAM, KCONN, MINDEG, PM, GameSpec
from randomplayer.montecarlo import BatchSpec, run_batch, wilson

pytestmark = pytest.mark.acceptance

MASTER_SEED = 20240601

# frozen after one pilot run
HAM_N, HAM_B, HAM_TRIALS, HAM_MIN_RATE, HAM_ROUND_FACTOR = 300, 120, 100, 0.90, 1.2
PM_N, PM_B, PM_TRIALS, PM_ALPHA, PM_MIN_RATE, PM_ROUND_FACTOR = 300, 240, 100, 0.6, 0.90, 1.15
EMB_N, EMB_B, EMB_MIN_RATE = 600, 240, 0.85
KC_K, KC_N, KC_B, KC_TRIALS, KC_MIN_RATE, KC_ROUND_FACTOR = 3, 450, 120, 50, 0.85, 1.2
ISO_N, ISO_M, ISO_TRIALS, ISO_C, ISO_MIN_RATE = 400, 1, 100, 0.5, 0.90
RM_N, RM_MS, RM_TRIALS, RM_LOW_MAX, RM_HIGH_MIN = 200, (1, 4, 8, 16), 100, 0.10, 0.80
BOX_N, BOX_S, BOX_BS, BOX_TRIALS, BOX_MIN_RATE = 100, 50, (1, 3, 9), 200, 0.90
DBOX_D, DBOX_BIAS, DBOX_MIN_RATE = 4, 32, 0.90
CORPUS_SIZE = 10_000
DUALITY_SIZE = 10_000
SAMPLED_CORPUS = 2_000


@pytest.fixture
def emit(capsys):
    def _emit(label: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return _emit


def _batch(game: GameSpec, trials: int, workers: int = 1):
    return run_batch(BatchSpec(game, trials, master_seed=MASTER_SEED, parallelism=workers))


@functools.cache
def ham_batch(workers: int = 1):
    return _batch(GameSpec(Board.complete(HAM_N), target=HAM, random_bias=HAM_B, epsilon=0.2),
                  HAM_TRIALS, workers)


@functools.cache
def pm_batch():
    return _batch(GameSpec(Board.bipartite(PM_N, PM_N), target=PM, random_bias=PM_B, alpha=PM_ALPHA),
                  PM_TRIALS)


@functools.cache
def embedded_batch():
    return _batch(GameSpec(Board.complete(EMB_N), target=PM, random_bias=EMB_B, alpha=PM_ALPHA),
                  PM_TRIALS)


@functools.cache
def kconn_batch():
    return _batch(GameSpec(Board.complete(KC_N), target=KCONN, k=KC_K, random_bias=KC_B,
                           alpha=PM_ALPHA), KC_TRIALS)


@functools.cache
def iso_batch():
    return _batch(GameSpec(Board.complete(ISO_N), smart=BREAKER, random_bias=ISO_M,
                           breaker="isolation", target=MINDEG, c=ISO_C), ISO_TRIALS)


@functools.cache
def random_maker_batch(m: int):
    return _batch(GameSpec(Board.complete(RM_N), smart=BREAKER, random_bias=m, breaker="isolation",
                           target=HAM, c=ISO_C), RM_TRIALS)


def test_crit2_random_breaker_hamiltonicity(emit):
    agg = ham_batch().aggregate
    cap = HAM_ROUND_FACTOR * HAM_N
    ok = agg.win_rate >= HAM_MIN_RATE and agg.max_win_rounds <= cap
    emit("2 random-Breaker Hamiltonicity", ok,
         f"win_rate={agg.win_rate:.3f} (>= {HAM_MIN_RATE}), max win rounds={agg.max_win_rounds} (<= {cap:g})")
    assert ok


def test_crit3_random_breaker_perfect_matching(emit):
    bip, emb = pm_batch().aggregate, embedded_batch().aggregate
    cap = PM_ROUND_FACTOR * PM_N
    ok = bip.win_rate >= PM_MIN_RATE and bip.max_win_rounds <= cap and emb.win_rate >= EMB_MIN_RATE
    emit("3 random-Breaker perfect matching", ok,
         f"K_n,n win_rate={bip.win_rate:.3f} (>= {PM_MIN_RATE}), max win rounds={bip.max_win_rounds} "
         f"(<= {cap:g}); K_{EMB_N} win_rate={emb.win_rate:.3f} (>= {EMB_MIN_RATE})")
    assert ok


def test_crit4_random_breaker_k_connectivity(emit):
    agg = kconn_batch().aggregate
    cap = KC_ROUND_FACTOR * KC_K * KC_N / 2
    ok = agg.win_rate >= KC_MIN_RATE and agg.max_win_rounds <= cap
    emit("4 random-Breaker k-connectivity", ok,
         f"win_rate={agg.win_rate:.3f} (>= {KC_MIN_RATE}), max win rounds={agg.max_win_rounds} (<= {cap:g})")
    assert ok


def test_crit5_isolation_breaker(emit):
    res = iso_batch()
    isolated = sum(1 for r in res.records if r.winner == "Breaker"
                   and any(m[0] == "Isolated" for m in r.milestones))
    rate = isolated / len(res.records)
    ok = rate >= ISO_MIN_RATE
    emit("5 isolation Breaker", ok, f"isolation rate={rate:.3f} (>= {ISO_MIN_RATE})")
    assert ok


def test_crit6_random_maker_hamiltonicity_trend(emit):
    rates, intervals, unevaluated = [], [], 0
    for m in RM_MS:
        agg = random_maker_batch(m).aggregate
        # an Unevaluated final graph counts as non-Hamiltonian
        rates.append(agg.win_rate)
        intervals.append(agg.wilson_95)
        unevaluated += agg.unevaluated
    monotone = all(rates[i + 1] >= rates[i] or intervals[i + 1][1] >= intervals[i][0]
                   for i in range(len(rates) - 1))
    ok = monotone and rates[0] <= RM_LOW_MAX and rates[-1] >= RM_HIGH_MIN
    emit("6 random-Maker Hamiltonicity trend", ok,
         f"rates={dict(zip(RM_MS, rates))}, m=1 <= {RM_LOW_MAX}, m=16 >= {RM_HIGH_MIN}, "
         f"monotone={monotone}, unevaluated={unevaluated}")
    assert ok


def test_crit7_box_games(emit):
    rates = [box_batch(BOX_N, BOX_S, b, BOX_TRIALS, seed=MASTER_SEED).win_rate for b in BOX_BS]
    monotone = all(x <= y for x, y in zip(rates, rates[1:]))
    dbox = box_batch(BOX_N, BOX_S, DBOX_BIAS, BOX_TRIALS, seed=MASTER_SEED, d=DBOX_D)
    ms_rate = dbox.milestone_rate or 0.0
    ok_box = monotone and rates[-1] >= BOX_MIN_RATE
    ok_dbox = ms_rate >= DBOX_MIN_RATE and dbox.reduction_failures == 0
    emit("7 box games", ok_box and ok_dbox,
         f"BoxBreaker rates={dict(zip(BOX_BS, rates))} monotone={monotone}, b=9 >= {BOX_MIN_RATE}: "
         f"{rates[-1] >= BOX_MIN_RATE}; d-Box milestone rate={ms_rate:.3f} over {dbox.milestone_checked} "
         f"wins (>= {DBOX_MIN_RATE})")
    assert ok_box and ok_dbox


def _corpus(size: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(size):
        n = int(rng.integers(2, 13))
        if rng.random() < 0.2 and n >= 4:
            # disjoint union of two dense pieces
            a = int(rng.integers(2, n - 1))
            p = rng.uniform(0.6, 1.0)
            edges = [(u, v) for u in range(a) for v in range(u + 1, a) if rng.random() < p]
            edges += [(u, v) for u in range(a, n) for v in range(u + 1, n) if rng.random() < p]
        else:
            p = rng.uniform(0.1, 1.0)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        yield Graph(n, edges), rng


def _small_graphs():
    """All graphs on at most 8 vertices, up to isomorphism on 7 and below.

    Eight-vertex graphs come from adding a vertex to every seven-vertex atlas
    graph, which covers each isomorphism class at least once.
    """
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() >= 3:
            yield Graph(h.number_of_nodes(), h.edges())
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() != 7:
            continue
        base = list(h.edges())
        for mask in range(1 << 7):
            yield Graph(8, base + [(i, 7) for i in range(7) if mask >> i & 1])


def test_crit8_lemma_implications(emit):
    conn_premise = conn_bad = comp_premise = comp_bad = 0
    for g, rng in _corpus(CORPUS_SIZE, MASTER_SEED):
        k = int(rng.integers(1, 4))
        c = float(k + rng.choice([0.0, 0.5, 1.0]))
        R = math.ceil((g.n + k) / (2 * c))
        if is_expander(g, R, c, mode="exact").verdict == Verdict.YES:
            conn_premise += 1
            conn_bad += k_connected(g, k).verdict != Verdict.YES
        R2, c2 = int(rng.integers(1, 4)), float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        if is_expander(g, R2, c2, mode="exact").verdict == Verdict.YES:
            comp_premise += 1
            comp_bad += any(len(comp) < R2 * (c2 + 1) for comp in g.components())

    booster_cases = booster_bad = 0
    min_seen = None
    for g in _small_graphs():
        if g.min_degree() < 2 or not g.is_connected():
            continue
        if is_hamiltonian(g).verdict == Verdict.YES:
            continue
        count = len(boosters(g).witness)
        booster_cases += 1
        booster_bad += count < (1 + 1) ** 2 / 2
        if is_expander(g, 2, 2, mode="exact").verdict == Verdict.YES:
            booster_bad += count < (2 + 1) ** 2 / 2
        min_seen = count if min_seen is None else min(min_seen, count)

    ok = conn_bad == 0 and comp_bad == 0 and booster_bad == 0 and conn_premise > 0 and booster_cases > 0
    emit("8 lemma implications", ok,
         f"expander=>k-connected {conn_premise - conn_bad}/{conn_premise}; component bound "
         f"{comp_premise - comp_bad}/{comp_premise}; boosters >= (R+1)^2/2 on "
         f"{booster_cases - booster_bad}/{booster_cases} graphs (fewest boosters seen {min_seen})")
    assert ok


def test_crit9_oracle_cross_checks(emit):
    rng = np.random.default_rng(MASTER_SEED + 9)
    duality_bad = 0
    for _ in range(DUALITY_SIZE):
        n = int(rng.integers(1, 13))
        p = rng.uniform(0.0, 0.8)
        g = Graph(2 * n, [(u, n + v) for u in range(n) for v in range(n) if rng.random() < p])
        X = hall_violator(g, left=range(n))
        pm = has_perfect_matching(g, n, left=range(n)).verdict == Verdict.YES
        duality_bad += (X is None) != pm
        if X is not None:
            duality_bad += len(g.neighborhood(X)) >= len(X)

    tail_cases = tail_bad = 0
    for n in range(1, 31):
        for p in [round(0.1 * i, 1) for i in range(1, 10)]:
            for a in [round(0.05 * i, 2) for i in range(1, 20)]:
                for direction in ("lower", "upper"):
                    q = TailBoundQuery(("binomial", n, p), direction, a)
                    tail_cases += 1
                    tail_bad += exact_tail(q) > tail_bound(q)[0] + 1e-12

    sampled_bad = sampled_cases = 0
    for g, r in _corpus(SAMPLED_CORPUS, MASTER_SEED + 99):
        R, c = int(r.integers(1, 4)), float(r.choice([1.0, 2.0, 3.0]))
        exact = is_expander(g, R, c, mode="exact").verdict
        sampled = is_expander(g, R, c, mode="sampled", samples=300, seed=int(r.integers(2**32)))
        sampled_cases += 1
        if sampled.verdict == Verdict.SAMPLED_NO:
            sampled_bad += exact != Verdict.NO
        elif sampled.verdict != Verdict.SAMPLED_YES:
            sampled_bad += 1

    ok = duality_bad == 0 and tail_bad == 0 and sampled_bad == 0
    emit("9 oracle cross-checks", ok,
         f"duality discrepancies {duality_bad}/{DUALITY_SIZE}; tail violations {tail_bad}/{tail_cases}; "
         f"sampled-vs-exact contradictions {sampled_bad}/{sampled_cases}")
    assert ok


def test_crit10_determinism_across_workers(emit):
    one = ham_batch(1).records_text()
    two = ham_batch(2).records_text()
    ok = one == two and bool(one)
    emit("10 determinism", ok, f"{len(one.splitlines())} records byte-identical for 1 and 2 workers: {one == two}")
    assert ok


def test_crit1_witness_soundness(emit):
    batches = {"ham": ham_batch(), "pm": pm_batch(), "embedded": embedded_batch(), "kconn": kconn_batch(),
               "isolation": iso_batch()}
    batches.update({f"random-maker m={m}": random_maker_batch(m) for m in RM_MS})
    failures = {name: res.aggregate.verification_failures for name, res in batches.items()}
    wins = sum(res.aggregate.wins for res in batches.values())
    ok = sum(failures.values()) == 0
    emit("1 witness soundness", ok,
         f"verification failures {sum(failures.values())} over {len(batches)} batches ({wins} Maker wins checked)")
    assert ok


def test_wilson_matches_reported_intervals():
    agg = ham_batch().aggregate
    assert agg.wilson_95 == wilson(agg.wins, agg.trials)
