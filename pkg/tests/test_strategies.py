from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from randomplayer.analysis import Verdict, has_perfect_matching, is_hamiltonian, k_connected
from randomplayer.analysis.graph import Graph
from randomplayer.board import BREAKER, FREE, MAKER, Board, new_board
from randomplayer.engine import KCONN, PM, GameSpec, run_game
from randomplayer.strategies import (SK, SPM, Claim, Done, Forfeit, Isolation, SHam,
                                     attempt_success_probability_bound, embed_halves)
from randomplayer.strategies.ham import root_ceil
from randomplayer.strategies.kconn import partition, schedule


# -- S_Ham ---------------------------------------------------------------------

def test_root_ceil_exact():
    assert root_ceil(32, 5) == 2 and root_ceil(33, 5) == 3
    assert root_ceil(1, 4) == 1 and root_ceil(81, 4) == 3 and root_ceil(82, 4) == 4


def test_sham_first_move_has_enough_room():
    n = 40
    g = new_board(Board.complete(n))
    st = SHam(n)
    mv = st.next_move(g)
    assert isinstance(mv, Claim)
    v1 = mv.v
    R = [x for x in range(n) if x not in (mv.u, mv.v)]
    assert sum(g.is_free(v1, r) for r in R) >= st.t1


def _ham_cycles(vertices, usable):
    first = vertices[0]
    out = set()
    for perm in itertools.permutations(vertices[1:]):
        cyc = (first,) + perm
        if all(usable(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))):
            key = min(cyc[1], cyc[-1])
            out.add(cyc if key == cyc[1] else (first,) + tuple(reversed(perm)))
    return out


def test_sham_case1_closing_position():
    # Maker path 0-1-2-3-4-5, R = {6, 7}; every endpoint-to-R pair and {0, 5} belong to Breaker.
    n = 8
    g = new_board(Board.complete(n))
    path = list(range(6))
    for a, b in zip(path, path[1:]):
        g.claim(a, b, MAKER)
    free_chords = {(0, 2), (3, 5), (1, 4)}
    for u, v in itertools.combinations(range(6), 2):
        if v - u > 1 and (u, v) not in free_chords:
            g.claim(u, v, BREAKER)
    for end in (0, 5):
        for r in (6, 7):
            g.claim(end, r, BREAKER)
    st = SHam(n)
    st.path = list(path)
    st.in_path[:6] = True
    st.stage1_moves = n - st.stop
    st.phase = "extend"

    # exhaustive check: exactly one Hamilton cycle on V(P) uses Maker and free edges only
    usable = lambda u, v: g.state[u, v] in (FREE, MAKER)
    cycles = _ham_cycles(path, usable)
    assert len(cycles) == 1

    claimed = []
    for _ in range(3):
        mv = st.next_move(g)
        assert isinstance(mv, Claim)
        g.claim(mv.u, mv.v, MAKER)
        claimed.append((min(mv.u, mv.v), max(mv.u, mv.v)))
        st.poll(g)
    assert set(claimed) == free_chords
    assert claimed[0] == (1, 4)
    assert st.phase == "absorb"
    cyc = st.cycle
    assert sorted(cyc) == path
    assert all(g.state[cyc[i], cyc[(i + 1) % 6]] == MAKER for i in range(6))
    assert tuple(cyc) in cycles or tuple([cyc[0]] + cyc[1:][::-1]) in cycles


def test_sham_done_witness_passes_oracle():
    out = run_game(GameSpec(Board.complete(60), random_bias=10, seed=4))
    assert out.winner == MAKER
    rep = is_hamiltonian(out.graph.owner_subgraph(MAKER), cap=None)
    assert rep.verdict == Verdict.YES
    cyc = out.witness
    assert sorted(cyc) == list(range(60))
    assert all(out.graph.state[cyc[i], cyc[(i + 1) % 60]] == MAKER for i in range(60))


def test_sham_max_degree_stays_small():
    out = run_game(GameSpec(Board.complete(200), random_bias=60, seed=1))
    assert out.winner == MAKER
    assert out.final_stats["max_deg_maker"] <= 2 * 200 ** 0.25 + 2


def test_sham_rejects_tiny_boards():
    with pytest.raises(ValueError):
        SHam(2)


# -- S_PM ----------------------------------------------------------------------

def test_spm_first_claim_inside_r():
    g = new_board(Board.bipartite(4, 4))
    st = SPM(range(4), range(4, 8), alpha=0.5)
    assert st.stage1_target == 2
    mv = st.next_move(g)
    assert isinstance(mv, Claim) and mv.u < 4 <= mv.v


def test_spm_stage2_repair_position():
    # left 0..5, right 6..11; P = {0-6, 1-7, 2-8, 3-9}; R = {4, 5, 10, 11}
    g = new_board(Board.bipartite(6, 6))
    st = SPM(range(6), range(6, 12), alpha=0.25, epsilon=0.2)
    assert (st.stage1_target, st.t_low, st.t_partner) == (4, 1, 1)
    for u, v in [(0, 6), (1, 7), (2, 8), (3, 9)]:
        g.claim(u, v, MAKER)
        st._match(u, v)
    # vertex 4 has no free edge into R, and only {4, 9} is a free edge to a matched vertex
    for v in (10, 11, 6, 7, 8):
        g.claim(4, v, BREAKER)
    mv = st.next_move(g)
    assert st.T == [4]
    assert (mv.u, mv.v) == (4, 9)
    g.claim(4, 9, MAKER)
    RL, RR = st.R_sides()
    assert sorted(RL.tolist() + RR.tolist()) == [3, 5, 10, 11]
    assert st.Pp[4] == 9 and 3 not in st.Pp
    while True:
        mv = st.next_move(g)
        if isinstance(mv, Done):
            break
        assert isinstance(mv, Claim)
        g.claim(mv.u, mv.v, MAKER)
        if st.poll(g) is not None:
            break
    wit = st.witness
    assert len(wit) == 6
    h = Graph(12, wit)
    assert has_perfect_matching(h, 6, left=range(6)).verdict == Verdict.YES


def test_spm_witness_passes_oracle():
    spec = GameSpec(Board.bipartite(80, 80), target=PM, random_bias=40, alpha=0.6, seed=2)
    out = run_game(spec)
    assert out.winner == MAKER
    h = out.graph.owner_subgraph(MAKER)
    assert has_perfect_matching(h, 80, left=range(80)).verdict == Verdict.YES
    assert out.final_stats["max_deg_maker"] <= 4


@pytest.mark.parametrize("n,sizes", [(10, (5, 5, 0)), (11, (5, 5, 1)), (2, (1, 1, 0))])
def test_embed_halves(n, sizes):
    A, B, rest = embed_halves(n)
    assert (len(A), len(B), len(rest)) == sizes
    assert not set(A) & set(B) and not (set(A) | set(B)) & set(rest)


def test_embedded_pm_on_odd_board():
    out = run_game(GameSpec(Board.complete(61), target=PM, random_bias=12, alpha=0.6, seed=9))
    assert out.winner == MAKER
    assert len(out.witness) == 30


# -- S_k -----------------------------------------------------------------------

def test_sk_partition_k2_is_one_clique():
    parts, U = partition(10, 2)
    assert parts == [list(range(10))] and U == []
    assert schedule(10, 2) == [("ham", (0,))]


def test_sk_partition_k3_n10():
    parts, U = partition(10, 3)
    assert [len(p) for p in parts] == [5, 5] and U == []
    assert schedule(10, 3) == [("pm", (0, 1)), ("ham", (0,)), ("ham", (1,))]


def test_sk_leftover_gets_k_edges():
    spec = GameSpec(Board.complete(61), target=KCONN, k=3, random_bias=5, alpha=0.6, seed=3)
    out = run_game(spec)
    assert out.winner == MAKER
    _, U = partition(61, 3)
    assert U == [60]
    assert out.graph.degree(60, MAKER) >= 3
    assert k_connected(out.graph.owner_subgraph(MAKER), 3).verdict == Verdict.YES


# -- isolation -----------------------------------------------------------------

def test_isolation_examples():
    g = new_board(Board.complete(5))
    st = Isolation(5, 1)
    mv = st.next_move(g)
    assert (mv.u, mv.v) == (0, 1) and st.attempts == 1
    g.claim(0, 1, BREAKER)
    g.claim(0, 3, MAKER)
    mv = st.next_move(g)
    assert mv.u == 1 and st.attempts == 2


def test_isolation_forfeits_without_free_vertex():
    g = new_board(Board.complete(4))
    g.claim(0, 1, MAKER)
    g.claim(2, 3, MAKER)
    assert isinstance(Isolation(4, 1).next_move(g), Forfeit)


def test_isolation_done_means_isolated():
    g = new_board(Board.complete(4))
    st = Isolation(4, 1)
    for _ in range(3):
        mv = st.next_move(g)
        g.claim(mv.u, mv.v, BREAKER)
    d = st.poll(g)
    assert isinstance(d, Done) and d.witness == 0
    assert g.degree(0, BREAKER) == 3 and g.degree(0, MAKER) == 0


def test_isolation_budget():
    st = Isolation(400, 1, c=0.5)
    assert st.round_budget == math.ceil(0.5 * 400 * math.log(400))


def test_attempt_bound():
    n = math.exp(math.exp(2))
    assert attempt_success_probability_bound(n, 0.0) == pytest.approx(math.exp(-2), rel=1e-12)
    # ln n = e here, so the bound is e^-(1 - 4 eps)
    assert attempt_success_probability_bound(math.exp(math.e), 0.1) == pytest.approx(math.exp(-0.6))
    # the bound increases towards 1 as epsilon approaches 1/4
    vals = [attempt_success_probability_bound(1000, e) for e in (0.0, 0.1, 0.2, 0.24)]
    assert vals == sorted(vals) and vals[-1] < 1


def test_isolation_attempts_only_grow_on_maker_touch():
    spec = GameSpec(Board.complete(40), smart=BREAKER, random_bias=1, seed=12)
    st = Isolation(40, 1)
    seen = []

    def watch(r, g):
        seen.append((st.attempts, st.target_vertex))
        return False

    run_game(spec, st, on_round=watch)
    for (a0, t0), (a1, t1) in zip(seen, seen[1:]):
        assert a1 in (a0, a0 + 1)
        if a1 == a0:
            assert t1 == t0
