"""Instrumentation for (m:1) random-Maker games.

Maker's graph is rebuilt from the transcript and evaluated at checkpoint
rounds. Phases are cumulative, so a later phase can only be reached at or
after the round of the phase before it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analysis.boosters import BOOSTER_CAP, longest_path_vertices
from .analysis.connectivity import k_connected
from .analysis.expansion import is_expander
from .analysis.graph import Graph
from .analysis.hamilton import CAP_WITH_DIRAC, dirac_holds, is_hamiltonian
from .analysis.report import Verdict
from .board import MAKER, Board
from .engine import BREAKER, GameSpec, run_game
from .errors import CheckerBudgetExceeded, SizeCapExceeded

PAPER_D_PER_K = 16


def paper_delta(k: int) -> float:
    return (13 * k * math.e) ** -6


@dataclass
class TournamentAssignment:
    n: int
    boxes: list[list[tuple[int, int]]]

    def sizes(self) -> list[int]:
        return [len(b) for b in self.boxes]

    def owner_of(self) -> dict[tuple[int, int], int]:
        return {e: v for v, box in enumerate(self.boxes) for e in box}


def build_tournament(n: int) -> TournamentAssignment:
    """Rotational near-regular tournament: v beats v+1..v+floor((n-1)/2) mod n.

    For even n the antipodal pair {v, v+n/2} (v < n/2) goes to v when v is even
    and to v+n/2 when v is odd.
    """
    if n < 2:
        raise ValueError("need at least 2 vertices")
    boxes: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    half = (n - 1) // 2
    for v in range(n):
        for t in range(1, half + 1):
            w = (v + t) % n
            boxes[v].append((min(v, w), max(v, w)))
    if n % 2 == 0:
        for v in range(n // 2):
            w = v + n // 2
            boxes[v if v % 2 == 0 else w].append((v, w))
    for b in boxes:
        b.sort()
    return TournamentAssignment(n, boxes)


def dirac_fast_path(g: Graph) -> str:
    """'Yes' when Dirac's condition certifies a Hamilton cycle, else 'Maybe' (never 'No')."""
    return "Yes" if dirac_holds(g) else "Maybe"


HAM_PHASES = ("Expander", "Connected", "Hamiltonian")
KCONN_PHASES = ("Expander", "StrongExpander", "KConnected")


@dataclass
class Phase:
    label: str
    achieved: bool = False
    round: int | None = None
    verdict: str = "No"


@dataclass
class MilestoneReport:
    track: str
    k: int
    delta: float
    d: int
    R: int
    c: float
    phases: list[Phase] = field(default_factory=list)
    boosters_claimed: int | None = None
    final_round: int = 0
    final_verdict: str | None = None

    def milestones(self) -> list[tuple[str, int]]:
        return [(p.label, p.round) for p in self.phases if p.achieved]

    def render(self) -> str:
        lines = ["phase,achieved,round,verdict"]
        for p in self.phases:
            lines.append(f"{p.label},{str(p.achieved).lower()},{'' if p.round is None else p.round},{p.verdict}")
        lines.append(f"# k={self.k} R={self.R} c={self.c} d={self.d} delta={self.delta:.3e} "
                     f"boosters_claimed={'' if self.boosters_claimed is None else self.boosters_claimed}")
        return "\n".join(lines) + "\n"


def _phase_checks(track: str, n: int, k: int, R: int, c: float, ham_cap: int | None, ham_budget: int | None):
    def expander(R_, c_):
        def run(g):
            rep = is_expander(g, R_, c_)
            return rep.verdict
        return run

    def connected(g):
        return Verdict.YES if g.is_connected() else Verdict.NO

    def hamiltonian(g):
        try:
            return is_hamiltonian(g, cap=ham_cap, budget=ham_budget).verdict
        except SizeCapExceeded:
            return Verdict.UNEVALUATED

    def kconn(g):
        return k_connected(g, k).verdict

    if track == "ham":
        return [expander(R, c), connected, hamiltonian]
    R2 = math.ceil((n + k) / (4 * k))
    return [expander(R, 2 * k), expander(R2, 2 * k), kconn]


def track_milestones(spec: GameSpec, k: int = 1, R: int | None = None, c: float | None = None,
                     checkpoints: list[int] | None = None, track: str | None = None,
                     ham_cap: int | None = CAP_WITH_DIRAC, ham_budget: int | None = 2_000_000,
                     count_boosters: bool = True) -> tuple[MilestoneReport, object]:
    """Run the game and report the first checkpoint round at which each phase holds."""
    if spec.smart != BREAKER:
        raise ValueError("the milestone pipeline instruments random-Maker games")
    if spec.board.kind != "complete":
        raise ValueError("the milestone pipeline needs a complete board")
    n = spec.board.n_vertices
    track = track or ("ham" if k <= 1 else "kconn")
    delta = paper_delta(k)
    R = R if R is not None else max(1, math.floor(delta * n))
    c = c if c is not None else (2.0 if track == "ham" else 2.0 * k)
    labels = HAM_PHASES if track == "ham" else KCONN_PHASES
    report = MilestoneReport(track, k, delta, PAPER_D_PER_K * k, R, c, [Phase(x) for x in labels])
    outcome = run_game(spec, keep_transcript=True, evaluate=False)
    total = outcome.rounds
    report.final_round = total
    if checkpoints is None:
        checkpoints = list(range(1, total + 1))
    points = sorted({r for r in checkpoints if 1 <= r <= total} | {total}) if total else []
    checks = _phase_checks(track, n, k, R, c, ham_cap, ham_budget)

    g = Graph(n)
    maker_moves = [(r, e) for r, who, e in outcome.transcript if who == MAKER]
    pos = 0
    level = 0
    connected_round = None
    for r in points:
        while pos < len(maker_moves) and maker_moves[pos][0] <= r:
            g.add_edge(*maker_moves[pos][1])
            pos += 1
        while level < len(checks):
            v = checks[level](g)
            ph = report.phases[level]
            ph.verdict = str(v)
            if v in (Verdict.YES, Verdict.SAMPLED_YES):
                ph.achieved = True
                ph.round = r
                if track == "ham" and level == 1:
                    connected_round = r
                level += 1
            else:
                break
        if level == len(checks):
            break
    report.final_verdict = report.phases[-1].verdict
    if count_boosters and track == "ham" and connected_round is not None and n <= BOOSTER_CAP:
        report.boosters_claimed = _count_boosters(n, maker_moves, connected_round)
    outcome.milestones = list(outcome.milestones or []) + report.milestones()
    return report, outcome


def _count_boosters(n: int, maker_moves, start_round: int) -> int:
    g = Graph(n)
    count = 0
    for r, (u, v) in maker_moves:
        if r > start_round:
            if is_hamiltonian(g, cap=None).verdict == Verdict.YES:
                break
            L = longest_path_vertices(g)
            h = g.with_edge(u, v)
            if is_hamiltonian(h, cap=None).verdict == Verdict.YES or longest_path_vertices(h) > L:
                count += 1
        g.add_edge(u, v)
    return count


def pipeline_spec(n: int, m: int, breaker: str = "isolation", seed: int = 0, c: float = 0.5,
                  target: str = "HamiltonCycle", k: int = 1) -> GameSpec:
    return GameSpec(Board.complete(n), smart=BREAKER, random_bias=m, target=target, seed=seed,
                    breaker=breaker, c=c, k=max(k, 1))


__all__ = ["TournamentAssignment", "build_tournament", "dirac_fast_path", "MilestoneReport",
           "track_milestones", "CheckerBudgetExceeded", "pipeline_spec"]
