"""Color schemes, configurations, and the cyclic move system.

A configuration stores one color index per square, which makes squares of
equal color indistinguishable by construction: swapping two same-colored
squares produces the identical configuration.  A move cyclically shifts
the colors one step along a pasting cycle, in either direction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import CountMismatch, InvalidMove, NoMovesAvailable
from .surface import Board

Configuration = tuple[int, ...]

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
FORWARD = "forward"
BACKWARD = "backward"

RNG_ALGORITHM = "python-random-mt19937"  # recorded in session logs for reproducibility


@dataclass(frozen=True)
class Color:
    name: str
    rgb: str
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"color {self.name!r} needs a positive count")


@dataclass(frozen=True)
class ColorScheme:
    """A palette with prescribed multiplicities summing to the square count."""

    colors: tuple[Color, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if not self.colors:
            raise ValueError("a color scheme needs at least one color")
        names = [c.name for c in self.colors]
        if len(set(names)) != len(names):
            raise ValueError("color names must be unique")

    @classmethod
    def from_counts(cls, counts: Sequence[int], names: Sequence[str] | None = None) -> "ColorScheme":
        names = names or [f"c{i}" for i in range(len(counts))]
        return cls(tuple(Color(nm, _DEFAULT_RGB[i % len(_DEFAULT_RGB)], ct) for i, (nm, ct) in enumerate(zip(names, counts))))

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(c.count for c in self.colors)

    @property
    def num_colors(self) -> int:
        return len(self.colors)

    @property
    def total(self) -> int:
        return sum(c.count for c in self.colors)


_DEFAULT_RGB = ("#E4572E", "#2E86AB", "#7E52A0", "#F4B942", "#4C9F70", "#D81159", "#4F6D7A", "#C0C781", "#9E2B25")


@dataclass(frozen=True)
class MoveSpec:
    """One move: a pasting cycle plus a shift direction.

    ``cycle_id`` indexes the board's movable cycles (length >= 2) on the
    given axis, ordered by smallest member.  ``forward`` shifts each color
    from square i to right[i] / up[i].
    """

    axis: str
    cycle_id: int
    direction: str

    def __post_init__(self):
        if self.axis not in (HORIZONTAL, VERTICAL):
            raise ValueError(f"bad axis {self.axis!r}")
        if self.direction not in (FORWARD, BACKWARD):
            raise ValueError(f"bad direction {self.direction!r}")


def check_configuration(cfg: Sequence[int], scheme: ColorScheme, n: int) -> Configuration:
    """Return ``cfg`` as a tuple after verifying it satisfies the scheme."""
    cfg = tuple(int(c) for c in cfg)
    if len(cfg) != n:
        raise CountMismatch(f"configuration has {len(cfg)} squares, board has {n}")
    counts = [0] * scheme.num_colors
    for c in cfg:
        if not 0 <= c < scheme.num_colors:
            raise CountMismatch(f"color index {c} out of range 0..{scheme.num_colors - 1}")
        counts[c] += 1
    if tuple(counts) != scheme.counts:
        raise CountMismatch(f"color counts {tuple(counts)} do not match the scheme {scheme.counts}")
    return cfg


@dataclass(frozen=True)
class Puzzle:
    """A board, a color scheme, and the home configuration to restore."""

    board: Board
    scheme: ColorScheme
    home: Configuration
    name: str = ""

    def __post_init__(self):
        if self.scheme.total != self.board.n:
            raise CountMismatch(f"color counts sum to {self.scheme.total}, board has {self.board.n} squares")
        object.__setattr__(self, "home", check_configuration(self.home, self.scheme, self.board.n))


@lru_cache(maxsize=256)
def move_cycles(board: Board) -> dict[str, tuple[tuple[int, ...], ...]]:
    """Movable (length >= 2) cycles per axis, each list ordered by smallest member."""
    return {
        HORIZONTAL: tuple(c for c in board.horizontal_cycles if len(c) >= 2),
        VERTICAL: tuple(c for c in board.vertical_cycles if len(c) >= 2),
    }


def move_cycle(board: Board, mv: MoveSpec) -> tuple[int, ...]:
    """The squares a move shifts, in pasting order."""
    cycs = move_cycles(board)[mv.axis]
    if not 0 <= mv.cycle_id < len(cycs):
        raise InvalidMove(f"no {mv.axis} cycle {mv.cycle_id} on this board")
    return cycs[mv.cycle_id]


def enumerate_moves(board: Board) -> list[MoveSpec]:
    """Every distinct move of the board, in a stable order.

    Horizontal cycles come before vertical ones.  A 2-cycle is a swap, so
    forward and backward coincide and only forward is listed; fixed squares
    generate no move at all.
    """
    out: list[MoveSpec] = []
    for axis in (HORIZONTAL, VERTICAL):
        for cid, cyc in enumerate(move_cycles(board)[axis]):
            out.append(MoveSpec(axis, cid, FORWARD))
            if len(cyc) >= 3:
                out.append(MoveSpec(axis, cid, BACKWARD))
    return out


def reverse_move(board: Board, mv: MoveSpec) -> MoveSpec:
    """The move undoing ``mv`` (a swap is its own inverse)."""
    if len(move_cycle(board, mv)) == 2:
        return MoveSpec(mv.axis, mv.cycle_id, FORWARD)
    other = BACKWARD if mv.direction == FORWARD else FORWARD
    return MoveSpec(mv.axis, mv.cycle_id, other)


def normalize_move(board: Board, mv: MoveSpec) -> MoveSpec:
    """Canonical form: backward on a 2-cycle is the same swap as forward."""
    if mv.direction == BACKWARD and len(move_cycle(board, mv)) == 2:
        return MoveSpec(mv.axis, mv.cycle_id, FORWARD)
    return mv


def move_source_index(board: Board, mv: MoveSpec) -> tuple[int, ...]:
    """Index array ``src`` with ``new[i] = old[src[i]]`` for this move."""
    cyc = move_cycle(board, mv)
    src = list(range(board.n))
    length = len(cyc)
    if mv.direction == FORWARD:
        for t, sq in enumerate(cyc):
            src[cyc[(t + 1) % length]] = sq
    else:
        for t, sq in enumerate(cyc):
            src[sq] = cyc[(t + 1) % length]
    return tuple(src)


def apply_move(cfg: Sequence[int], mv: MoveSpec, board: Board) -> Configuration:
    """Shift colors one step along the move's cycle; other squares keep theirs."""
    cyc = move_cycle(board, mv)
    out = list(cfg)
    length = len(cyc)
    if mv.direction == FORWARD:
        for t, sq in enumerate(cyc):
            out[cyc[(t + 1) % length]] = cfg[sq]
    else:
        for t, sq in enumerate(cyc):
            out[sq] = cfg[cyc[(t + 1) % length]]
    return tuple(out)


def apply_moves(cfg: Sequence[int], moves: Sequence[MoveSpec], board: Board) -> Configuration:
    out = tuple(cfg)
    for mv in moves:
        out = apply_move(out, mv, board)
    return out


def is_solved(cfg: Sequence[int], puzzle: Puzzle) -> bool:
    """Solved means the color array equals home's; same-color swaps are invisible."""
    return tuple(cfg) == puzzle.home


def shuffle(
    puzzle: Puzzle,
    m: int,
    seed: int | None = None,
    forbid_undo: bool = True,
) -> tuple[Configuration, list[MoveSpec]]:
    """Apply ``m`` uniformly random moves to home.

    With ``forbid_undo`` the exact inverse of the previous move is excluded
    (unless it is the only move the board has).  Reproducible for a fixed
    seed; the generator is ``RNG_ALGORITHM``.
    """
    moves = enumerate_moves(puzzle.board)
    if not moves:
        raise NoMovesAvailable("board has no cycle of length >= 2")
    rng = random.Random(seed)
    cfg = puzzle.home
    log: list[MoveSpec] = []
    banned: MoveSpec | None = None
    for _ in range(m):
        candidates = moves
        if forbid_undo and banned is not None:
            candidates = [mv for mv in moves if mv != banned]
            if not candidates:
                candidates = moves
        mv = rng.choice(candidates)
        cfg = apply_move(cfg, mv, puzzle.board)
        log.append(mv)
        banned = reverse_move(puzzle.board, mv) if forbid_undo else None
    return cfg, log


def count_all_colorings(board: Board, scheme: ColorScheme) -> int:
    """Number of configurations: the multinomial n! / (n_1! ... n_K!), exactly."""
    if scheme.total != board.n:
        raise CountMismatch(f"color counts sum to {scheme.total}, board has {board.n} squares")
    out = math.factorial(board.n)
    for c in scheme.colors:
        out //= math.factorial(c.count)
    return out
