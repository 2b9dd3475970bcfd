// DOM rendering of the board: one tile per square, drag-to-push gestures,
// and slide animations where wrapping tiles exit one side and re-enter at
// their paste partner, making the gluing visible.

import { BoardModel } from "./boardmodel.js";
import type { MoveSpec } from "./types.js";

const CELL = 64;
const GAP = 4;
const ANIM_MS = 180;
const DRAG_THRESHOLD = 12;

export class BoardView {
  private readonly tiles = new Map<number, HTMLDivElement>();
  private readonly field: HTMLDivElement;
  private colors: number[] = [];
  private drag: { square: number; x: number; y: number } | null = null;
  private animating = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly model: BoardModel,
    private readonly onPush: (move: MoveSpec) => void,
  ) {
    this.field = document.createElement("div");
    this.field.className = "board-field";
    this.field.style.width = `${model.width * CELL}px`;
    this.field.style.height = `${model.height * CELL}px`;
    root.appendChild(this.field);
    for (const sq of model.puzzle.squares) {
      const tile = document.createElement("div");
      tile.className = "tile";
      const { col, row } = model.screenCell(sq.id);
      tile.style.left = `${col * CELL + GAP / 2}px`;
      tile.style.top = `${row * CELL + GAP / 2}px`;
      tile.style.width = `${CELL - GAP}px`;
      tile.style.height = `${CELL - GAP}px`;
      tile.dataset.square = String(sq.id);
      this.tiles.set(sq.id, tile);
      this.field.appendChild(tile);
    }
    this.field.addEventListener("pointerdown", (e) => this.pointerDown(e));
    this.field.addEventListener("pointerup", (e) => this.pointerUp(e));
    this.field.addEventListener("pointercancel", () => (this.drag = null));
  }

  render(colors: number[]): void {
    this.colors = [...colors];
    for (const [id, tile] of this.tiles) {
      tile.style.background = this.model.rgbOfSquare(colors, id);
    }
  }

  currentColors(): number[] {
    return [...this.colors];
  }

  /** Slide the move's tiles, then settle on the shifted coloring. */
  animateMove(move: MoveSpec, after: number[]): void {
    if (this.animating) {
      this.render(after);
      return;
    }
    this.animating = true;
    const before = this.colors;
    const plan = this.model.shiftPlan(move);
    const movers: HTMLDivElement[] = [];
    const pushVector = this.pushVector(move, plan);

    for (const shift of plan) {
      const color = this.model.rgbOfSquare(before, shift.fromSquare);
      if (!shift.wrap) {
        movers.push(this.spawnMover(color, shift.fromSquare, shift.toSquare, null));
      } else {
        // exit past the board edge, twin enters from outside the partner side
        movers.push(this.spawnMover(color, shift.fromSquare, shift.fromSquare, pushVector));
        movers.push(this.spawnMover(color, shift.toSquare, shift.toSquare, null, pushVector));
      }
      const tile = this.tiles.get(shift.toSquare)!;
      tile.style.visibility = "hidden";
    }
    this.render(after);
    window.setTimeout(() => {
      for (const mover of movers) mover.remove();
      for (const shift of plan) this.tiles.get(shift.toSquare)!.style.visibility = "";
      this.animating = false;
    }, ANIM_MS + 40);
  }

  highlightHint(move: MoveSpec | null): void {
    for (const tile of this.tiles.values()) tile.classList.remove("hinted");
    if (!move) return;
    const cycle = this.model.puzzle.cycles[move.axis][move.cycle_id];
    for (const sq of cycle) this.tiles.get(sq)!.classList.add("hinted");
  }

  private pushVector(move: MoveSpec, plan: { fromSquare: number; toSquare: number; wrap: boolean }[]): [number, number] {
    const step = plan.find((s) => !s.wrap);
    if (step) {
      const a = this.model.screenCell(step.fromSquare);
      const b = this.model.screenCell(step.toSquare);
      return [b.col - a.col, b.row - a.row];
    }
    // 2-cycles of adjacent squares always have a non-wrap step; fall back
    return move.axis === "horizontal" ? [move.direction === "forward" ? 1 : -1, 0] : [0, move.direction === "forward" ? -1 : 1];
  }

  private spawnMover(
    color: string,
    fromSquare: number,
    toSquare: number,
    exitVector: [number, number] | null,
    enterVector?: [number, number],
  ): HTMLDivElement {
    const mover = document.createElement("div");
    mover.className = "tile mover";
    mover.style.background = color;
    mover.style.width = `${CELL - GAP}px`;
    mover.style.height = `${CELL - GAP}px`;
    const from = this.model.screenCell(fromSquare);
    const to = this.model.screenCell(toSquare);
    let startCol = from.col;
    let startRow = from.row;
    if (enterVector) {
      startCol = to.col - enterVector[0];
      startRow = to.row - enterVector[1];
      mover.style.opacity = "0";
    }
    mover.style.left = `${startCol * CELL + GAP / 2}px`;
    mover.style.top = `${startRow * CELL + GAP / 2}px`;
    this.field.appendChild(mover);
    void mover.offsetWidth; // flush layout so the transition runs
    mover.style.transition = `left ${ANIM_MS}ms ease, top ${ANIM_MS}ms ease, opacity ${ANIM_MS}ms ease`;
    const endCol = exitVector ? from.col + exitVector[0] : to.col;
    const endRow = exitVector ? from.row + exitVector[1] : to.row;
    mover.style.left = `${endCol * CELL + GAP / 2}px`;
    mover.style.top = `${endRow * CELL + GAP / 2}px`;
    mover.style.opacity = exitVector ? "0" : "1";
    return mover;
  }

  private pointerDown(e: PointerEvent): void {
    const square = this.squareAt(e);
    if (square === null) return;
    this.drag = { square, x: e.clientX, y: e.clientY };
  }

  private pointerUp(e: PointerEvent): void {
    if (!this.drag) return;
    const dx = e.clientX - this.drag.x;
    const dy = this.drag.y - e.clientY; // screen y grows downward; board y upward
    const square = this.drag.square;
    this.drag = null;
    if (Math.abs(dx) < DRAG_THRESHOLD && Math.abs(dy) < DRAG_THRESHOLD) return;
    const move = this.model.moveForPush(square, dx, dy);
    if (move) this.onPush(move);
  }

  private squareAt(e: PointerEvent): number | null {
    const target = e.target as HTMLElement;
    const raw = target.dataset?.square;
    return raw === undefined ? null : Number(raw);
  }
}
