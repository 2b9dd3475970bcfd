"""Command-line front door: analyze, enumerate, solve, random-surfaces, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import puzzleio, space
from .errors import BudgetExceeded, TileshiftError
from .puzzle import Puzzle, count_all_colorings, enumerate_moves, move_cycles, shuffle
from .surface import surface_invariants


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tileshift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="surface topology and coloring count of a puzzle")
    p.add_argument("puzzle", help="path to a puzzle document, or a bundled name")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("enumerate", help="enumerate the puzzle space and report on it")
    p.add_argument("puzzle")
    p.add_argument("--all-colorings", action="store_true", help="partition ALL colorings into components")
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--export", nargs=2, metavar=("FMT", "OUT"), help="write the graph as dot|graphml|json")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("solve", help="find a shortest solution")
    p.add_argument("puzzle")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", help="JSON file holding the start color array")
    group.add_argument("--shuffle", type=int, metavar="M", help="shuffle home by M random moves")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--method", choices=["bfs", "idastar"], default="bfs")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("random-surfaces", help="estimate P(random pasting is connected)")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exact", action="store_true", help="also compute the exact probability (n <= 7)")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=cmd_random_surfaces)

    p = sub.add_parser("serve", help="run the interactive play service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--puzzle-dir", default=None, help="directory of extra puzzle documents to register")
    p.add_argument("--state-file", default=None, help="append-only session log for persistence")
    p.add_argument("--ui-dir", default=None, help="directory of static web client files to serve")
    p.set_defaults(func=cmd_serve)

    return parser


def _load(ref: str) -> Puzzle:
    if Path(ref).exists():
        return puzzleio.load_puzzle(ref)
    return puzzleio.load_bundled(ref)


def _move_token(mv) -> str:
    return f"{mv.axis[0]}{mv.cycle_id}{'+' if mv.direction == 'forward' else '-'}"


def cmd_analyze(args) -> int:
    puzzle = _load(args.puzzle)
    inv = surface_invariants(puzzle.board)
    moves = enumerate_moves(puzzle.board)
    cycles = move_cycles(puzzle.board)
    colorings = count_all_colorings(puzzle.board, puzzle.scheme)
    if args.as_json:
        doc = {
            "puzzle": puzzle.name,
            "squares": puzzle.board.n,
            "connected": inv.connected,
            "vertices": inv.num_vertices,
            "edges": inv.num_edges,
            "faces": inv.num_faces,
            "euler_characteristic": inv.euler_characteristic,
            "genus": inv.genus,
            "components": [
                {"squares": list(c.squares), "genus": c.genus, "euler_characteristic": c.euler_characteristic}
                for c in inv.components
            ],
            "cone_angles": list(inv.cone_angles),
            "moves": len(moves),
            "horizontal_cycle_lengths": [len(c) for c in cycles["horizontal"]],
            "vertical_cycle_lengths": [len(c) for c in cycles["vertical"]],
            "colorings": str(colorings),
        }
        print(json.dumps(doc, indent=2))
        return 0
    print(f"puzzle: {puzzle.name}")
    print(f"squares: {puzzle.board.n}")
    print(f"connected: {str(inv.connected).lower()}")
    print(f"vertices: {inv.num_vertices}")
    print(f"edges: {inv.num_edges}")
    print(f"faces: {inv.num_faces}")
    print(f"euler characteristic: {inv.euler_characteristic}")
    if inv.connected:
        print(f"genus: {inv.genus}")
    else:
        for i, c in enumerate(inv.components):
            print(f"component {i}: squares={len(c.squares)} genus: {c.genus}")
    print(f"cone angles: {','.join(map(str, inv.cone_angles))}")
    hor = ",".join(str(len(c)) for c in cycles["horizontal"]) or "-"
    ver = ",".join(str(len(c)) for c in cycles["vertical"]) or "-"
    print(f"moves: {len(moves)} (horizontal cycles {hor}; vertical cycles {ver})")
    print(f"colorings: {colorings}")
    return 0


def cmd_enumerate(args) -> int:
    puzzle = _load(args.puzzle)

    if args.all_colorings:
        comps = space.all_colorings_components(
            puzzle.board, puzzle.scheme, max_states=args.max_states or space.DEFAULT_ALL_COLORINGS_BUDGET
        )
        if args.as_json:
            print(json.dumps({"puzzle": puzzle.name, "components": [{"size": s, "representative": r} for s, r in comps]}))
        else:
            print(f"puzzle: {puzzle.name}")
            print(f"components: {len(comps)}")
            print(f"component sizes: {','.join(str(s) for s, _ in comps)}")
        return 0

    try:
        graph = space.enumerate_space(puzzle, max_states=args.max_states)
    except BudgetExceeded as e:
        graph = e.partial
        print(f"puzzle: {puzzle.name}")
        print("incomplete: true")
        print(f"vertices: {graph.num_vertices}")
        print(f"edges: {graph.num_edges}")
        if args.export:
            _export(graph, args.export)
        print(json.dumps({"code": "budget_exceeded", "message": str(e)}), file=sys.stderr)
        return 3

    report = space.space_report(graph)
    if args.as_json:
        doc = {
            "puzzle": puzzle.name,
            "vertices": report.num_vertices,
            "edges": report.num_edges,
            "diameter": report.diameter,
            "diameter_is_exact": report.diameter_is_exact,
            "eccentricity_of_home": report.eccentricity_of_home,
            "distance_histogram": list(report.distance_histogram),
            "max_degree": report.max_degree,
            "min_degree": report.min_degree,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"puzzle: {puzzle.name}")
        print(f"vertices: {report.num_vertices}")
        print(f"edges: {report.num_edges}")
        exact = "exact" if report.diameter_is_exact else "lower bound"
        print(f"diameter: {report.diameter} ({exact})")
        print(f"home eccentricity: {report.eccentricity_of_home}")
        print(f"degree: min {report.min_degree}, max {report.max_degree}")
        print(f"depth histogram: {','.join(map(str, report.distance_histogram))}")
    if args.export:
        _export(graph, args.export)
    return 0


def _export(graph, export_args) -> None:
    fmt, out = export_args
    with open(out, "w", encoding="utf-8") as sink:
        space.export_graph(graph, fmt, sink)


def cmd_solve(args) -> int:
    from . import solver

    puzzle = _load(args.puzzle)
    if args.state is not None:
        start = tuple(json.loads(Path(args.state).read_text("utf-8")))
        shuffled_by = None
    else:
        start, _ = shuffle(puzzle, args.shuffle, seed=args.seed)
        shuffled_by = args.shuffle

    if args.method == "bfs":
        budget = args.budget or solver.DEFAULT_STATE_BUDGET
        solution = solver.solve_bfs(puzzle, start, budget=budget)
    else:
        budget = args.budget or solver.DEFAULT_NODE_BUDGET
        solution = solver.solve_idastar(puzzle, start, node_budget=budget)

    if args.as_json:
        doc = {
            "puzzle": puzzle.name,
            "start": list(start),
            "shuffled_by": shuffled_by,
            "moves": [{"axis": m.axis, "cycle_id": m.cycle_id, "direction": m.direction} for m in solution.moves],
            "length": len(solution.moves),
            "optimal": solution.optimal,
            "nodes_expanded": solution.nodes_expanded,
            "wall_time": solution.wall_time,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"puzzle: {puzzle.name}")
        if shuffled_by is not None:
            print(f"shuffled by: {shuffled_by}")
        print(f"moves: {len(solution.moves)}")
        print(f"solution: {' '.join(_move_token(m) for m in solution.moves) or '(already solved)'}")
        print(f"optimal: {str(solution.optimal).lower()}")
        print(f"nodes expanded: {solution.nodes_expanded}")
        print(f"time: {solution.wall_time:.3f}s")
    return 0


def cmd_random_surfaces(args) -> int:
    from . import random_surfaces as rs

    rows = []
    for n in args.n:
        est = rs.estimate_connectivity(n, args.trials, seed=args.seed)
        exact = rs.exact_connectivity_probability(n) if args.exact and n <= rs.EXACT_ENUMERATION_LIMIT else None
        rows.append((est, exact))
    if args.as_json:
        print(
            json.dumps(
                [
                    {
                        "n": e.n,
                        "trials": e.trials,
                        "successes": e.successes,
                        "p_hat": e.p_hat,
                        "ci_low": e.ci_low,
                        "ci_high": e.ci_high,
                        "exact": str(x) if x is not None else None,
                    }
                    for e, x in rows
                ]
            )
        )
        return 0
    header = f"{'n':>4} {'trials':>8} {'successes':>10} {'p_hat':>8} {'ci_low':>8} {'ci_high':>8}"
    if args.exact:
        header += f" {'exact':>10}"
    print(header)
    for e, x in rows:
        line = f"{e.n:>4} {e.trials:>8} {e.successes:>10} {e.p_hat:>8.4f} {e.ci_low:>8.4f} {e.ci_high:>8.4f}"
        if args.exact:
            line += f" {str(x) if x is not None else '-':>10}"
        print(line)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(puzzle_dir=args.puzzle_dir, state_file=args.state_file, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TileshiftError as e:
        code = type(e).__name__
        print(json.dumps({"code": _snake(code), "message": str(e)}), file=sys.stderr)
        return 2
    except OSError as e:
        print(json.dumps({"code": "io_error", "message": str(e)}), file=sys.stderr)
        return 2


def _snake(name: str) -> str:
    out = []
    for i, ch in enumerate(name):
        if ch.isupper() and i and (not name[i - 1].isupper()):
            out.append("_")
        out.append(ch.lower())
    return "".join(out)


if __name__ == "__main__":
    sys.exit(main())
