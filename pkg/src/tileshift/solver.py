"""Optimal solvers: meet-in-the-middle BFS and iterative-deepening A*.

Both return provably shortest solutions; the difference is memory.  The
bidirectional BFS keeps two visited maps and suits spaces that fit in
RAM, IDA* keeps a single path plus a per-iteration transposition table
and trades repeated work for a tiny footprint.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BudgetExceeded, NoMovesAvailable, Unsolvable
from .puzzle import (
    MoveSpec,
    Puzzle,
    check_configuration,
    enumerate_moves,
    move_cycles,
    move_source_index,
    reverse_move,
)
from .space import StateCodec

DEFAULT_STATE_BUDGET = 2_000_000
DEFAULT_NODE_BUDGET = 5_000_000

_FOUND = -1
_INF = float("inf")


@dataclass
class Solution:
    moves: list[MoveSpec]
    optimal: bool
    nodes_expanded: int
    wall_time: float


@dataclass(frozen=True)
class Hint:
    move: MoveSpec
    optimal: bool


def mismatch_lower_bound(puzzle: Puzzle) -> Callable[[Sequence[int]], int]:
    """The default admissible heuristic.

    One move changes at most L_max squares (the longest move cycle), so at
    least ceil(mismatches / L_max) moves are needed to fix every square
    that differs from home.
    """
    home = puzzle.home
    cycles = move_cycles(puzzle.board)
    longest = max((len(c) for cs in cycles.values() for c in cs), default=1)

    def h(cfg: Sequence[int]) -> int:
        mismatches = sum(1 for a, b in zip(cfg, home) if a != b)
        return -(-mismatches // longest)

    return h


def solve_bfs(puzzle: Puzzle, start: Sequence[int], budget: int = DEFAULT_STATE_BUDGET) -> Solution:
    """Shortest solution by bidirectional BFS between start and home.

    Raises Unsolvable only after exhausting a whole component, and
    BudgetExceeded when the two visited sets outgrow ``budget`` states.
    """
    t0 = time.perf_counter()
    board = puzzle.board
    start = check_configuration(start, puzzle.scheme, board.n)
    codec = StateCodec(board.n, puzzle.scheme.num_colors)
    home = puzzle.home
    if start == home:
        return Solution([], True, 0, time.perf_counter() - t0)

    moves = enumerate_moves(board)
    sources = [move_source_index(board, mv) for mv in moves]
    start_code = codec.encode(start)
    home_code = codec.encode(home)

    # visited: code -> (parent_code, move_index, depth)
    fwd = {start_code: (None, None, 0)}
    bwd = {home_code: (None, None, 0)}
    fwd_frontier = [(start_code, start)]
    bwd_frontier = [(home_code, home)]
    fwd_depth = bwd_depth = 0
    best = _INF
    meets: set[int] = set()
    expanded = 0

    while fwd_frontier and bwd_frontier:
        if best <= fwd_depth + bwd_depth + 1:
            break
        if len(fwd_frontier) <= len(bwd_frontier):
            ours, theirs, frontier = fwd, bwd, fwd_frontier
        else:
            ours, theirs, frontier = bwd, fwd, bwd_frontier
        next_frontier = []
        for code, state in frontier:
            expanded += 1
            depth = ours[code][2]
            for mi, src in enumerate(sources):
                child = tuple(state[j] for j in src)
                ccode = codec.encode(child)
                if ccode in ours:
                    continue
                ours[ccode] = (code, mi, depth + 1)
                next_frontier.append((ccode, child))
                if ccode in theirs:
                    meets.add(ccode)
                    best = min(best, depth + 1 + theirs[ccode][2])
        if ours is fwd:
            fwd_frontier = next_frontier
            fwd_depth += 1
        else:
            bwd_frontier = next_frontier
            bwd_depth += 1
        if len(fwd) + len(bwd) > budget:
            raise BudgetExceeded(f"bidirectional BFS visited more than {budget} states")

    if not meets:
        raise Unsolvable("start and home lie in different components")

    length = int(best)
    witness = min(c for c in meets if fwd[c][2] + bwd[c][2] == length)
    forward_moves: list[MoveSpec] = []
    code = witness
    while fwd[code][1] is not None:
        parent, mi, _ = fwd[code]
        forward_moves.append(moves[mi])
        code = parent
    forward_moves.reverse()
    code = witness
    while bwd[code][1] is not None:
        parent, mi, _ = bwd[code]
        forward_moves.append(reverse_move(board, moves[mi]))
        code = parent
    return Solution(forward_moves, True, expanded, time.perf_counter() - t0)


def solve_idastar(
    puzzle: Puzzle,
    start: Sequence[int],
    node_budget: int = DEFAULT_NODE_BUDGET,
    heuristic: Callable[[Sequence[int]], int] | None = None,
) -> Solution:
    """Iterative-deepening A* with an admissible heuristic.

    Within each iteration a transposition table prunes states already
    reached at the same or smaller depth, which caps the work per bound at
    the component size without losing optimality.
    """
    t0 = time.perf_counter()
    board = puzzle.board
    start = check_configuration(start, puzzle.scheme, board.n)
    home = puzzle.home
    if start == home:
        return Solution([], True, 0, time.perf_counter() - t0)

    codec = StateCodec(board.n, puzzle.scheme.num_colors)
    moves = enumerate_moves(board)
    sources = [move_source_index(board, mv) for mv in moves]
    h = heuristic or mismatch_lower_bound(puzzle)
    start_code = codec.encode(start)

    nodes = 0
    path: list[int] = []

    def search(state, g, bound, table):
        nonlocal nodes
        f = g + h(state)
        if f > bound:
            return f
        if state == home:
            return _FOUND
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"IDA* expanded more than {node_budget} nodes")
        smallest = _INF
        for mi, src in enumerate(sources):
            child = tuple(state[j] for j in src)
            ccode = codec.encode(child)
            prior = table.get(ccode)
            if prior is not None and prior <= g + 1:
                continue
            table[ccode] = g + 1
            path.append(mi)
            t = search(child, g + 1, bound, table)
            if t == _FOUND:
                return _FOUND
            path.pop()
            if t < smallest:
                smallest = t
        return smallest

    bound = h(start)
    while True:
        result = search(start, 0, bound, {start_code: 0})
        if result == _FOUND:
            return Solution([moves[mi] for mi in path], True, nodes, time.perf_counter() - t0)
        if result == _INF:
            raise Unsolvable("iterative deepening exhausted the component without reaching home")
        bound = result


def hint(puzzle: Puzzle, current: Sequence[int], budget: int = 100_000, allow_greedy: bool = True) -> Hint | None:
    """First move of an optimal solution, or a greedy fallback.

    Returns None when already solved.  When the optimal search blows the
    budget and ``allow_greedy`` is set, returns the move minimizing the
    heuristic, flagged non-optimal; otherwise re-raises BudgetExceeded.
    """
    board = puzzle.board
    current = check_configuration(current, puzzle.scheme, board.n)
    if current == puzzle.home:
        return None
    moves = enumerate_moves(board)
    if not moves:
        raise NoMovesAvailable("board has no cycle of length >= 2")
    try:
        solution = solve_bfs(puzzle, current, budget=budget)
        return Hint(solution.moves[0], True)
    except BudgetExceeded:
        if not allow_greedy:
            raise
    h = mismatch_lower_bound(puzzle)
    from .puzzle import apply_move

    scored = [(h(apply_move(current, mv, board)), i, mv) for i, mv in enumerate(moves)]
    _, _, best = min(scored)
    return Hint(best, False)
