// Pure board logic: square->cycle lookup, gestures to MoveSpecs, and the
// tile movement plan for animating a move (including wraparound hops).
// Precomputed from the puzzle descriptor so a tap never needs the server.

import type { Axis, Direction, MoveSpec, PuzzleDescriptor } from "./types.js";

export interface TileShift {
  fromSquare: number;
  toSquare: number;
  wrap: boolean; // target is not a lattice neighbor: exits one side, enters at the paste partner
}

export class BoardModel {
  private readonly cycleBySquare: Map<string, number>;
  readonly width: number;
  readonly height: number;
  readonly minX: number;
  readonly minY: number;

  constructor(readonly puzzle: PuzzleDescriptor) {
    this.cycleBySquare = new Map();
    for (const axis of ["horizontal", "vertical"] as Axis[]) {
      this.puzzle.cycles[axis].forEach((cycle, cid) => {
        for (const sq of cycle) {
          this.cycleBySquare.set(`${axis}:${sq}`, cid);
        }
      });
    }
    const xs = puzzle.squares.map((s) => s.x);
    const ys = puzzle.squares.map((s) => s.y);
    this.minX = Math.min(...xs);
    this.minY = Math.min(...ys);
    this.width = Math.max(...xs) - this.minX + 1;
    this.height = Math.max(...ys) - this.minY + 1;
  }

  cycleOf(squareId: number, axis: Axis): { cycleId: number; cycle: number[] } | null {
    const cid = this.cycleBySquare.get(`${axis}:${squareId}`);
    if (cid === undefined) return null;
    return { cycleId: cid, cycle: this.puzzle.cycles[axis][cid] };
  }

  /** Map a push gesture on a square to its move; null if the square is pinned. */
  moveForPush(squareId: number, dx: number, dy: number): MoveSpec | null {
    const horizontal = Math.abs(dx) >= Math.abs(dy);
    const axis: Axis = horizontal ? "horizontal" : "vertical";
    const found = this.cycleOf(squareId, axis);
    if (!found || found.cycle.length < 2) return null;
    // pushing right/up shifts colors toward the pasted neighbor (forward)
    let direction: Direction = (horizontal ? dx > 0 : dy > 0) ? "forward" : "backward";
    if (found.cycle.length === 2) direction = "forward"; // a swap is its own inverse
    return { axis, cycle_id: found.cycleId, direction };
  }

  /** Where each tile of the move's cycle travels, in screen terms. */
  shiftPlan(move: MoveSpec): TileShift[] {
    const cycle = this.puzzle.cycles[move.axis][move.cycle_id];
    const plan: TileShift[] = [];
    const n = cycle.length;
    for (let t = 0; t < n; t++) {
      const from = cycle[t];
      const to = move.direction === "forward" ? cycle[(t + 1) % n] : cycle[(t - 1 + n) % n];
      const a = this.puzzle.squares[from];
      const b = this.puzzle.squares[to];
      const wrap = Math.abs(a.x - b.x) + Math.abs(a.y - b.y) !== 1;
      plan.push({ fromSquare: from, toSquare: to, wrap });
    }
    return plan;
  }

  /** Local mirror of the server's move application, for optimistic rendering. */
  applyMove(colors: number[], move: MoveSpec): number[] {
    const cycle = this.puzzle.cycles[move.axis][move.cycle_id];
    const out = [...colors];
    const n = cycle.length;
    for (let t = 0; t < n; t++) {
      const target = move.direction === "forward" ? cycle[(t + 1) % n] : cycle[(t - 1 + n) % n];
      out[target] = colors[cycle[t]];
    }
    return out;
  }

  rgbOfSquare(colors: number[], squareId: number): string {
    return this.puzzle.colors[colors[squareId]].rgb;
  }

  /** Screen cell (column, row from the top) of a square; y is flipped. */
  screenCell(squareId: number): { col: number; row: number } {
    const sq = this.puzzle.squares[squareId];
    return { col: sq.x - this.minX, row: this.height - 1 - (sq.y - this.minY) };
  }
}
