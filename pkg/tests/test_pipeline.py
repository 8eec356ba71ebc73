from __future__ import annotations

import math

import pytest

from randomplayer.analysis import Graph, Verdict, is_expander, is_hamiltonian, k_connected
from randomplayer.board import BREAKER, MAKER, Board
from randomplayer.engine import GameSpec, run_game
from randomplayer.pipeline import (HAM_PHASES, KCONN_PHASES, build_tournament, dirac_fast_path,
                                   pipeline_spec, track_milestones)


@pytest.mark.parametrize("n,sizes", [(3, [1, 1, 1]), (5, [2, 2, 2, 2, 2])])
def test_tournament_odd(n, sizes):
    assert build_tournament(n).sizes() == sizes


def test_tournament_n4():
    t = build_tournament(4)
    assert sorted(t.sizes()) == [1, 1, 2, 2]
    assert sum(t.sizes()) == 6


@pytest.mark.parametrize("n", range(2, 41))
def test_tournament_partitions_complete_graph(n):
    t = build_tournament(n)
    edges = [e for box in t.boxes for e in box]
    assert len(edges) == len(set(edges)) == n * (n - 1) // 2
    assert set(edges) == {(u, v) for u in range(n) for v in range(u + 1, n)}
    assert all(len(box) in ((n - 1) // 2, math.ceil((n - 1) / 2)) for box in t.boxes)
    assert all(v in e for v, box in enumerate(t.boxes) for e in box)


def test_dirac_fast_path():
    assert dirac_fast_path(Graph.complete(6)) == "Yes"
    assert dirac_fast_path(Graph.cycle(6)) == "Maybe"
    assert dirac_fast_path(Graph(4)) == "Maybe"


def test_whole_board_in_one_round():
    n = 8
    spec = pipeline_spec(n, n * (n - 1) // 2, breaker="random", seed=1)
    report, _ = track_milestones(spec, R=2, c=2)
    assert [p.label for p in report.phases] == list(HAM_PHASES)
    assert all(p.achieved and p.round == 1 for p in report.phases)


def test_empty_maker_graph_reaches_nothing():
    spec = pipeline_spec(8, 0, breaker="random", seed=1)
    report, _ = track_milestones(spec, R=1, c=2)
    assert not any(p.achieved for p in report.phases)


def test_small_game_rounds_and_final_verdict():
    spec = pipeline_spec(12, 6, breaker="random", seed=3)
    report, out = track_milestones(spec, R=2, c=2)
    rounds = [p.round for p in report.phases if p.achieved]
    assert rounds == sorted(rounds)
    # achieved phases form a prefix of the list
    flags = [p.achieved for p in report.phases]
    assert flags == sorted(flags, reverse=True)
    final = Graph(12, out.graph.owner_subgraph(MAKER).edges())
    truth = is_hamiltonian(final, cap=None).verdict
    if report.phases[-1].achieved:
        assert truth == Verdict.YES
    else:
        assert truth == Verdict.NO and report.final_verdict == "No"


def test_isolation_breaker_pipeline_reports_isolation():
    spec = pipeline_spec(30, 1, breaker="isolation", seed=2)
    report, out = track_milestones(spec, R=2, c=2)
    assert out.winner == BREAKER
    assert out.milestones[0] == ("Isolated", out.rounds)
    assert not report.phases[-1].achieved


def test_kconn_track_labels_and_order():
    spec = pipeline_spec(14, 10, breaker="random", seed=4, target="KConnectivity", k=2)
    report, out = track_milestones(spec, k=2, R=1)
    assert [p.label for p in report.phases] == list(KCONN_PHASES)
    rounds = [p.round for p in report.phases if p.achieved]
    assert rounds == sorted(rounds)
    final = Graph(14, out.graph.owner_subgraph(MAKER).edges())
    if report.phases[-1].achieved:
        assert k_connected(final, 2).verdict == Verdict.YES


def test_render_lists_phases_in_order():
    spec = pipeline_spec(10, 15, breaker="random", seed=5)
    report, _ = track_milestones(spec, R=1, c=2)
    lines = report.render().splitlines()
    assert lines[0] == "phase,achieved,round,verdict"
    assert [ln.split(",")[0] for ln in lines[1:4]] == list(HAM_PHASES)
    assert lines[4].startswith("# k=1")


@pytest.mark.parametrize("seed", [11, 14, 16])
def test_closing_edge_counts_as_booster(seed):
    # Hamiltonicity arrives strictly after connection, so the closing edge was a booster
    report, _ = track_milestones(pipeline_spec(12, 1, breaker="random", seed=seed), R=1, c=2)
    connected, ham = report.phases[1].round, report.phases[2].round
    assert connected < ham
    assert 1 <= report.boosters_claimed <= 12


def test_no_booster_count_above_cap():
    report, _ = track_milestones(pipeline_spec(20, 4, breaker="random", seed=1), R=1, c=2)
    assert report.boosters_claimed is None


def test_requires_random_maker():
    with pytest.raises(ValueError):
        track_milestones(GameSpec(Board.complete(10), random_bias=2))


def _final_graphs(n: int, games: int):
    for seed in range(games):
        m = 1 + seed % 6
        spec = pipeline_spec(n, m, breaker="random", seed=seed)
        out = run_game(spec, evaluate=False)
        yield Graph(n, out.graph.owner_subgraph(MAKER).edges())


def test_lemma_implications_on_finished_games():
    # an expander meeting the connectivity condition is k-connected, and its components are large
    checked = 0
    for g in _final_graphs(11, 40):
        for R in (1, 2, 3):
            for c in (1, 2, 3):
                if not is_expander(g, R, c).verdict == Verdict.YES:
                    continue
                checked += 1
                assert all(len(comp) >= R * (c + 1) for comp in g.components())
                for k in range(1, int(c) + 1):
                    if R * c >= (g.n + k) / 2:
                        assert k_connected(g, k).verdict == Verdict.YES
    assert checked > 0
