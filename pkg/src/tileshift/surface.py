"""Square-tiled boards and their surface topology.

A board is a collection of unit squares glued edge to edge: every right
edge is pasted to a left edge and every upper edge to a lower edge, so two
permutations (``right`` and ``up``) describe the whole closed surface.
This module builds boards from planar shapes, splits them into connected
components, and computes the invariants that classify the glued surface:
Euler characteristic, genus, and the cone angles at the corner points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import perm
from .perm import UnionFind

Cell = tuple[int, int]

# corner slots of a square, used for vertex identification
_BL, _BR, _TL, _TR = 0, 1, 2, 3


@dataclass(frozen=True)
class Polyomino:
    """A finite set of lattice cells, ``(x, y)`` with y increasing upward.

    Squares receive stable ids in row-major order (bottom row first, left
    to right) so a given shape always produces the same labeling.
    """

    cells: frozenset[Cell]

    def __post_init__(self):
        cells = frozenset((int(x), int(y)) for x, y in self.cells)
        if not cells:
            raise ValueError("a shape needs at least one cell")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_cells(cls, cells: Iterable[Cell]) -> "Polyomino":
        return cls(frozenset(cells))

    @classmethod
    def rectangle(cls, width: int, height: int) -> "Polyomino":
        return cls(frozenset((x, y) for x in range(width) for y in range(height)))

    @classmethod
    def plus_shape(cls, arm: int) -> "Polyomino":
        """A plus/cross of 4*arm+1 cells: center plus four arms of length ``arm``."""
        side = 2 * arm + 1
        cells = {(x, arm) for x in range(side)} | {(arm, y) for y in range(side)}
        return cls(frozenset(cells))

    @classmethod
    def from_ascii(cls, art: str) -> "Polyomino":
        """Parse a picture where '#' marks a cell; the first line is the top row."""
        import textwrap

        rows = [line for line in textwrap.dedent(art).splitlines() if line.strip()]
        cells = set()
        for dy, line in enumerate(rows):
            y = len(rows) - 1 - dy
            for x, ch in enumerate(line):
                if ch == "#":
                    cells.add((x, y))
        return cls(frozenset(cells))

    @cached_property
    def squares(self) -> tuple[Cell, ...]:
        """Cell of each square id, in id order."""
        return tuple(sorted(self.cells, key=lambda c: (c[1], c[0])))

    @cached_property
    def id_by_cell(self) -> dict[Cell, int]:
        return {cell: i for i, cell in enumerate(self.squares)}

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class Board:
    """Pasting data for a square-tiled surface.

    ``right[i]`` is the square whose left edge is pasted to i's right edge,
    ``up[i]`` the square whose lower edge is pasted to i's upper edge.
    ``placement`` optionally records a planar cell per square for display.
    """

    n: int
    right: tuple[int, ...]
    up: tuple[int, ...]
    placement: tuple[Cell, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "right", perm.check_permutation(self.right, self.n))
        object.__setattr__(self, "up", perm.check_permutation(self.up, self.n))
        if self.placement is not None:
            pl = tuple((int(x), int(y)) for x, y in self.placement)
            if len(pl) != self.n:
                raise ValueError("placement must give one cell per square")
            object.__setattr__(self, "placement", pl)

    @cached_property
    def left(self) -> tuple[int, ...]:
        return perm.inverse(self.right)

    @cached_property
    def down(self) -> tuple[int, ...]:
        return perm.inverse(self.up)

    @cached_property
    def horizontal_cycles(self) -> tuple[tuple[int, ...], ...]:
        return tuple(perm.cycles(self.right))

    @cached_property
    def vertical_cycles(self) -> tuple[tuple[int, ...], ...]:
        return tuple(perm.cycles(self.up))


@dataclass(frozen=True)
class ComponentTopology:
    """Invariants of one connected component of the surface."""

    squares: tuple[int, ...]
    num_vertices: int
    euler_characteristic: int
    genus: int


@dataclass(frozen=True)
class SurfaceInvariants:
    """Topology of the glued surface.

    ``genus`` is only populated for a connected surface; otherwise the
    per-component values in ``components`` tell the whole story (a single
    Euler characteristic would be misleading for a disjoint union).
    ``cone_angles`` lists every corner point as the integer k of its total
    angle 2*pi*k, smallest first.
    """

    connected: bool
    num_vertices: int
    num_edges: int
    num_faces: int
    euler_characteristic: int
    genus: int | None
    cone_angles: tuple[int, ...]
    components: tuple[ComponentTopology, ...]


def standard_pasting(shape: Polyomino) -> Board:
    """Glue a planar shape the obvious way.

    Neighboring cells are pasted along their shared edge, and each maximal
    horizontal run of cells closes into a cycle: scanning a row left to
    right, the first free left side meets the first free right side, which
    is the right end of that same run.  Columns close the same way
    vertically.
    """
    cells = shape.squares
    id_of = shape.id_by_cell
    n = len(cells)
    right = [0] * n
    up = [0] * n

    rows: dict[int, list[int]] = {}
    cols: dict[int, list[int]] = {}
    for x, y in cells:
        rows.setdefault(y, []).append(x)
        cols.setdefault(x, []).append(y)

    for y, xs in rows.items():
        for run in _runs(sorted(xs)):
            for a, b in zip(run, run[1:] + run[:1]):
                right[id_of[(a, y)]] = id_of[(b, y)]
    for x, ys in cols.items():
        for run in _runs(sorted(ys)):
            for a, b in zip(run, run[1:] + run[:1]):
                up[id_of[(x, a)]] = id_of[(x, b)]

    return Board(n=n, right=tuple(right), up=tuple(up), placement=cells)


def _runs(sorted_values: list[int]) -> list[list[int]]:
    """Split a sorted list into maximal runs of consecutive integers."""
    runs: list[list[int]] = []
    for v in sorted_values:
        if runs and v == runs[-1][-1] + 1:
            runs[-1].append(v)
        else:
            runs.append([v])
    return runs


def board_from_permutations(
    n: int,
    right: Sequence[int],
    up: Sequence[int],
    placement: Sequence[Cell] | None = None,
) -> Board:
    """Build a board from explicit pastings, validating both permutations."""
    return Board(
        n=n,
        right=perm.check_permutation(right, n),
        up=perm.check_permutation(up, n),
        placement=tuple(placement) if placement is not None else None,
    )


def surface_components(board: Board) -> tuple[tuple[int, ...], ...]:
    """Orbits of the squares under the group generated by right and up.

    The surface is connected exactly when there is a single orbit.
    """
    return tuple(perm.orbits(board.n, board.right, board.up))


def commutator(board: Board) -> tuple[int, ...]:
    """The permutation right . up . right^-1 . up^-1 on squares.

    Its cycles index the corner points of the surface: following a square
    around the vertex at its bottom-left corner applies exactly this map,
    and a cycle of length k sits at a vertex of total angle 2*pi*k.
    """
    right, up, left, down = board.right, board.up, board.left, board.down
    return tuple(right[up[left[down[i]]]] for i in range(board.n))


def _corner_roots(board: Board) -> list[int]:
    """Union-find roots of the 4n corner slots after all edge gluings.

    Slot layout: 4*i + {0: BL, 1: BR, 2: TL, 3: TR}.  Unions run in square
    order, right gluings before up gluings, so representatives are stable.
    """
    uf = UnionFind(4 * board.n)
    for i in range(board.n):
        j = board.right[i]
        uf.union(4 * i + _BR, 4 * j + _BL)
        uf.union(4 * i + _TR, 4 * j + _TL)
    for i in range(board.n):
        j = board.up[i]
        uf.union(4 * i + _TL, 4 * j + _BL)
        uf.union(4 * i + _TR, 4 * j + _BR)
    return [uf.find(s) for s in range(4 * board.n)]


def surface_invariants(board: Board) -> SurfaceInvariants:
    """Connectivity, Euler characteristic, genus, and cone angles.

    Counting the CW structure: every square is a face (F = n), every glued
    edge pair an edge (E = 2n), and the vertices are the identification
    classes of the 4n square corners.  chi = V - E + F then gives the genus
    of each connected piece via chi = 2 - 2g.
    """
    n = board.n
    roots = _corner_roots(board)
    num_vertices = len(set(roots))

    comps = surface_components(board)
    comp_invariants = []
    for comp in comps:
        comp_roots = {roots[4 * i + c] for i in comp for c in range(4)}
        v = len(comp_roots)
        chi = v - len(comp)  # V - 2n_c + n_c
        comp_invariants.append(
            ComponentTopology(
                squares=comp,
                num_vertices=v,
                euler_characteristic=chi,
                genus=(2 - chi) // 2,
            )
        )

    chi = num_vertices - n
    connected = len(comps) == 1
    angles = tuple(sorted(len(c) for c in perm.cycles(commutator(board))))
    return SurfaceInvariants(
        connected=connected,
        num_vertices=num_vertices,
        num_edges=2 * n,
        num_faces=n,
        euler_characteristic=chi,
        genus=(2 - chi) // 2 if connected else None,
        cone_angles=angles,
        components=tuple(comp_invariants),
    )
