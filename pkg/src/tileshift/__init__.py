"""Sliding puzzles on square-tiled surfaces.

Boards are built from pasting permutations, moves cyclically shift colors
along pasting cycles, and the reachable configurations form a graph that
can be enumerated, solved over, exported, and explored live over HTTP.
"""

from .errors import (
    BudgetExceeded,
    CountMismatch,
    IncompleteGraph,
    InvalidMove,
    NoMovesAvailable,
    NotAPermutation,
    ParseError,
    StateNotInSpace,
    TileshiftError,
    UnknownPuzzle,
    UnknownSession,
    Unsolvable,
    ValidationError,
)
from .puzzle import (
    Color,
    ColorScheme,
    Configuration,
    MoveSpec,
    Puzzle,
    apply_move,
    apply_moves,
    count_all_colorings,
    enumerate_moves,
    is_solved,
    shuffle,
)
from .puzzleio import load_bundled, load_puzzle, save_puzzle
from .random_surfaces import estimate_connectivity, exact_connectivity_probability, sample_board
from .solver import Solution, hint, solve_bfs, solve_idastar
from .space import (
    PuzzleSpaceGraph,
    SpaceReport,
    StateCodec,
    all_colorings_components,
    diameter,
    distance,
    enumerate_space,
    export_graph,
    space_report,
)
from .surface import (
    Board,
    Polyomino,
    SurfaceInvariants,
    board_from_permutations,
    standard_pasting,
    surface_components,
    surface_invariants,
)

__version__ = "0.1.0"
