"""Command line entry point: ``randomplayer <command> [flags]``."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import __version__
from .board import MAKER, Board, GameGraph
from .engine import BREAKER, HAM, KCONN, MINDEG, PM, GameSpec, run_game, transcript_lines
from .errors import RandomPlayerError

GAMES = {"ham": HAM, "pm": PM, "kconn": KCONN, "isolate": None}
TARGETS = {"ham": HAM, "pm": PM, "kconn": KCONN, "mindeg": MINDEG}
PROPERTIES = ("hamiltonian", "perfect_matching", "k_connected", "expander", "boosters")


class UsageError(Exception):
    pass


def _int_at_least(lo: int):
    def conv(text: str) -> int:
        try:
            v = int(text, 0)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}, got {v}")
        return v
    return conv


def _open_unit(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("rounds must be positive")
    return vals


def _game_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("game")
    g.add_argument("--game", choices=sorted(GAMES), help="ham, pm and kconn: smart Maker vs random Breaker; "
                   "isolate: smart Breaker vs random Maker")
    g.add_argument("--n", type=_int_at_least(1), help="vertices (part size on a bipartite board)")
    g.add_argument("--board", choices=["complete", "bipartite"],
                   help="board kind (default: bipartite for pm, complete otherwise)")
    g.add_argument("--b", type=_int_at_least(0), help="random Breaker's bias")
    g.add_argument("--m", type=_int_at_least(0), help="random Maker's bias")
    g.add_argument("--eps", type=_open_unit, help="epsilon (default 0.2)")
    g.add_argument("--alpha", type=_positive_float, help="S_PM alpha (default 0.25)")
    g.add_argument("--k", type=_int_at_least(1), help="connectivity for kconn (default 2)")
    g.add_argument("--c", type=_positive_float, help="isolation round-budget constant (default 0.5)")
    g.add_argument("--breaker", choices=["isolation", "random"], help="Breaker in random-Maker games")
    g.add_argument("--target", choices=sorted(TARGETS), help="target evaluated on Maker's final graph "
                   "in random-Maker games (default mindeg)")
    g.add_argument("--paper-faithful", action="store_true", default=None,
                   help="isolation picks the lowest free vertex instead of the most attacked one")
    g.add_argument("--round-cap", type=_int_at_least(1))
    g.add_argument("--move-order", choices=["BreakerFirst", "MakerFirst"])
    g.add_argument("--config", type=Path, help="GameSpec config file; explicit flags override it")


def build_spec(args: argparse.Namespace, seed: int, need_bias: bool = True) -> GameSpec:
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as e:
            raise UsageError(f"--config: cannot read {args.config}: {e.strerror}")
        try:
            spec = GameSpec.from_config(text, seed=seed)
        except ValueError as e:
            raise UsageError(f"--config: {e}")
    else:
        if args.game is None:
            raise UsageError("--game is required (or --config)")
        if args.n is None:
            raise UsageError("--n is required (or --config)")
        spec = None
    kw: dict = {"seed": seed}
    game = args.game
    if game is not None:
        if game == "isolate":
            kw["smart"] = BREAKER
            kw["target"] = TARGETS[args.target or "mindeg"]
        else:
            kw["smart"] = MAKER
            kw["target"] = GAMES[game]
            if args.target is not None and TARGETS[args.target] != GAMES[game]:
                raise UsageError(f"--target {args.target} does not match --game {game}")
    if args.n is not None or args.board is not None:
        n = args.n if args.n is not None else (spec.board.sizes[0] if spec else None)
        kind = args.board or (spec.board.kind if spec and game is None else
                              "bipartite" if game == "pm" else "complete")
        kw["board"] = Board.bipartite(n, n) if kind == "bipartite" else Board.complete(n)
        if kind == "bipartite" and game not in (None, "pm"):
            raise UsageError("--board bipartite is only available for --game pm")
    if args.b is not None and args.m is not None:
        raise UsageError("--b and --m are mutually exclusive")
    bias = args.b if args.b is not None else args.m
    if bias is not None:
        kw["random_bias"] = bias
    elif spec is None and need_bias:
        raise UsageError("--b or --m is required")
    for flag, key in (("eps", "epsilon"), ("alpha", "alpha"), ("k", "k"), ("c", "c"),
                      ("breaker", "breaker"), ("paper_faithful", "paper_faithful"),
                      ("round_cap", "round_cap"), ("move_order", "move_order")):
        v = getattr(args, flag)
        if v is not None:
            kw[key] = v
    try:
        if spec is None:
            return GameSpec(**kw)
        return dataclasses.replace(spec, **kw)
    except ValueError as e:
        raise UsageError(str(e))


def _batch_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=_int_at_least(1), default=20)
    p.add_argument("--seed", type=_int_at_least(0), default=0, help="master seed")
    p.add_argument("--workers", type=_int_at_least(1), default=None,
                   help="worker processes (default from RANDOMPLAYER_WORKERS, else 1)")
    p.add_argument("--no-verify", action="store_true", help="skip oracle re-checks of wins")
    p.add_argument("--records", type=Path, help="write per-trial JSONL records here")
    p.add_argument("--dump-dir", type=Path, help="where a failing trial's transcript goes")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="randomplayer", description="Random-player Maker-Breaker games.")
    ap.add_argument("--version", action="version", version=f"randomplayer {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="play one game and print the outcome")
    _game_flags(p)
    p.add_argument("--seed", type=_int_at_least(0), default=0)
    p.add_argument("--transcript", type=Path, help="write the JSONL transcript here")
    p.add_argument("--debug", action="store_true", help="check board invariants after every round")

    p = sub.add_parser("trials", help="run a seeded batch and print the CSV aggregate")
    _game_flags(p)
    _batch_flags(p)

    p = sub.add_parser("sweep", help="run a batch per grid point")
    _game_flags(p)
    _batch_flags(p)
    p.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2",
                   help="grid axis over n, b, m, bias, epsilon or k; repeatable")

    p = sub.add_parser("box", help="Box or d-Box game batch")
    p.add_argument("--boxes", type=_int_at_least(1), required=True)
    p.add_argument("--size", type=_int_at_least(1), required=True)
    p.add_argument("--bias", type=_int_at_least(1), required=True, help="random side's bias")
    p.add_argument("--adversary-bias", type=_int_at_least(1), default=1)
    p.add_argument("--d", type=_int_at_least(1), help="play d-Box with quota d")
    p.add_argument("--trials", type=_int_at_least(1), default=100)
    p.add_argument("--seed", type=_int_at_least(0), default=0)

    p = sub.add_parser("pipeline", help="milestones of one random-Maker game")
    p.add_argument("--n", type=_int_at_least(2), required=True)
    p.add_argument("--m", type=_int_at_least(0), required=True)
    p.add_argument("--k", type=_int_at_least(1), default=1)
    p.add_argument("--breaker", choices=["isolation", "random"], default="isolation")
    p.add_argument("--checkpoints", type=_int_list, help="comma-separated rounds (default: every round)")
    p.add_argument("--R", type=_int_at_least(1), help="expansion radius (default from delta*n, at least 1)")
    p.add_argument("--c", type=_positive_float, help="expansion factor (default 2, or 2k)")
    p.add_argument("--iso-c", type=_positive_float, default=0.5, help="isolation round-budget constant")
    p.add_argument("--seed", type=_int_at_least(0), default=0)

    p = sub.add_parser("check", help="run an oracle on an edge list")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--owner", choices=["M", "B", "F"], default="M",
                   help="which owner's edges form the graph (unlabelled edges count as M)")
    p.add_argument("--n", type=_int_at_least(1), help="vertex count when the file has no header")
    p.add_argument("--k", type=_int_at_least(1), default=2)
    p.add_argument("--R", type=_int_at_least(1), default=1)
    p.add_argument("--c", type=_positive_float, default=2.0)
    p.add_argument("--size", type=_int_at_least(0), help="required matching size (default floor(n/2))")
    p.add_argument("--left", help="comma-separated left part for bipartite matching")

    p = sub.add_parser("bounds", help="Chernoff-type tail bound")
    p.add_argument("--dist", choices=["binomial", "hypergeometric"], required=True)
    p.add_argument("--n", type=_int_at_least(0), required=True, help="trials (sample size)")
    p.add_argument("--p", type=float, help="success probability (binomial)")
    p.add_argument("--N", type=_int_at_least(1), help="population (hypergeometric)")
    p.add_argument("--K", type=_int_at_least(0), help="successes in population (hypergeometric)")
    p.add_argument("--direction", choices=["lower", "upper"], required=True)
    p.add_argument("--a", type=_positive_float, required=True)
    p.add_argument("--exact", action="store_true", help="also print the exact tail")
    return ap


# -- commands ------------------------------------------------------------------

def cmd_play(args) -> int:
    spec = build_spec(args, args.seed)
    out = run_game(spec, keep_transcript=True, debug=args.debug)
    winner = "none" if out.winner is None else out.winner.name.capitalize()
    print(f"board: {spec.board}")
    print(f"winner: {winner}")
    print(f"rounds: {out.rounds}")
    print(f"forfeit: {str(out.forfeit).lower()}")
    print(f"reason: {out.reason}")
    if out.target_verdict is not None:
        print(f"target_verdict: {out.target_verdict}")
    for key, val in out.final_stats.items():
        print(f"{key}: {val}")
    for lbl, r in out.milestones:
        print(f"milestone: {lbl} {r}")
    if args.transcript is not None:
        args.transcript.write_text(transcript_lines(out.transcript))
    return 0


def _batch_spec(args, spec):
    from .montecarlo import BatchSpec, default_workers

    return BatchSpec(spec, args.trials, args.seed, verify=not args.no_verify,
                     parallelism=args.workers or default_workers(),
                     dump_dir=str(args.dump_dir) if args.dump_dir else None)


def cmd_trials(args) -> int:
    from .montecarlo import csv_table, run_batch

    res = run_batch(_batch_spec(args, build_spec(args, 0)))
    sys.stdout.write(csv_table([res.aggregate], args.seed))
    if args.records is not None:
        args.records.write_text(res.records_text())
    if res.aggregate.forfeit_count == res.aggregate.trials:
        print("every trial ended in a forfeit", file=sys.stderr)
        return 1
    return 0


def _parse_grid(items: list[str]) -> dict[str, list]:
    from .montecarlo import GRID_KEYS

    grid: dict[str, list] = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--grid: expected KEY=V1,V2, got {item!r}")
        key, vals = item.split("=", 1)
        key = key.strip()
        if key not in GRID_KEYS:
            raise UsageError(f"--grid: unknown key {key!r} (use one of {', '.join(GRID_KEYS)})")
        try:
            conv = float if key == "epsilon" else int
            grid[key] = [conv(v) for v in vals.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"--grid: bad value list {vals!r}")
    return grid


def cmd_sweep(args) -> int:
    from .montecarlo import csv_table, sweep

    grid = _parse_grid(args.grid)
    # the bias may come from the grid alone
    spec = build_spec(args, 0, need_bias=not {"b", "m", "bias"} & set(grid))
    bs = dataclasses.replace(_batch_spec(args, spec), sweep=grid)
    rows = sweep(bs)
    sys.stdout.write(csv_table([r.aggregate for _, r in rows], args.seed))
    if args.records is not None:
        with args.records.open("w") as fh:
            for point, r in rows:
                for rec in r.records:
                    fh.write(rec.line()[:-1] + ',"point":' + _json(point) + "}\n")
    return 0


def _json(obj) -> str:
    import json

    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


def cmd_box(args) -> int:
    from .boxgame import box_batch
    from .montecarlo import wilson

    if args.d is not None and args.d > args.size:
        raise UsageError("--d must not exceed --size")
    res = box_batch(args.boxes, args.size, args.bias, args.trials, args.seed, args.d, args.adversary_bias)
    lo, hi = wilson(res.random_wins, res.trials)
    mr = res.milestone_rate
    print("boxes,size,bias,d,trials,random_wins,win_rate,wilson_lo,wilson_hi,milestone_rate,reduction_failures")
    print(",".join([str(args.boxes), str(args.size), str(args.bias), "" if args.d is None else str(args.d),
                    str(res.trials), str(res.random_wins), f"{res.win_rate:.4f}", f"{lo:.4f}", f"{hi:.4f}",
                    "" if mr is None else f"{mr:.4f}", str(res.reduction_failures)]))
    return 0


def cmd_pipeline(args) -> int:
    from .pipeline import pipeline_spec, track_milestones

    try:
        spec = pipeline_spec(args.n, args.m, args.breaker, args.seed, args.iso_c,
                             HAM if args.k <= 1 else KCONN, args.k)
    except ValueError as e:
        raise UsageError(str(e))
    rep, out = track_milestones(spec, k=args.k, R=args.R, c=args.c, checkpoints=args.checkpoints)
    sys.stdout.write(f"# randomplayer {__version__} n={args.n} m={args.m} breaker={args.breaker} "
                     f"seed={args.seed} rounds={out.rounds}\n")
    sys.stdout.write(rep.render())
    return 0


def _read_graph(args):
    from .analysis.graph import Graph
    from .board import Owner

    try:
        text = args.input.read_text()
    except OSError as e:
        raise UsageError(f"--input: cannot read {args.input}: {e.strerror}")
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if lines and lines[0].startswith("board"):
        gg = GameGraph.from_edge_list(text)
        return gg.owner_subgraph(Owner.from_letter(args.owner))
    edges = []
    for ln in lines:
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise RandomPlayerError(f"bad edge line {ln!r}")
        owner = parts[2] if len(parts) == 3 else "M"
        if owner == args.owner:
            edges.append((int(parts[0]), int(parts[1])))
    n = args.n if args.n is not None else 1 + max((max(e) for e in edges), default=-1)
    g = Graph(n)
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise RandomPlayerError(f"edge {u} {v} is not a simple edge on {n} vertices")
        g.add_edge(u, v)
    return g


def cmd_check(args) -> int:
    from .analysis import boosters, has_perfect_matching, is_expander, is_hamiltonian, k_connected

    g = _read_graph(args)
    if args.property == "hamiltonian":
        rep = is_hamiltonian(g)
    elif args.property == "perfect_matching":
        left = [int(x) for x in args.left.split(",")] if args.left else None
        rep = has_perfect_matching(g, args.size, left=left)
    elif args.property == "k_connected":
        rep = k_connected(g, args.k)
    elif args.property == "expander":
        rep = is_expander(g, args.R, args.c)
    else:
        rep = boosters(g)
    sys.stdout.write(rep.render())
    return 0


def cmd_bounds(args) -> int:
    from .analysis.bounds import TailBoundQuery, exact_tail, tail_bound

    if args.dist == "binomial":
        if args.p is None:
            raise UsageError("--p is required for --dist binomial")
        dist = ("binomial", args.n, args.p)
    else:
        if args.N is None or args.K is None:
            raise UsageError("--N and --K are required for --dist hypergeometric")
        dist = ("hypergeometric", args.N, args.K, args.n)
    try:
        q = TailBoundQuery(dist, args.direction, args.a)
    except ValueError as e:
        raise UsageError(str(e))
    bound, mu = tail_bound(q)
    print(f"mu: {mu:.6g}")
    print(f"bound: {bound:.6e}")
    if args.exact:
        print(f"exact: {exact_tail(q):.6e}")
    return 0


COMMANDS = {"play": cmd_play, "trials": cmd_trials, "sweep": cmd_sweep, "box": cmd_box,
            "pipeline": cmd_pipeline, "check": cmd_check, "bounds": cmd_bounds}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"randomplayer {args.command}: error: {e}", file=sys.stderr)
        return 2
    except RandomPlayerError as e:
        print(f"randomplayer {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
