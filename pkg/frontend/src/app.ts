// Controller: one session at a time, board on the left, live graph on the
// right. The board animates optimistically; the server's delta always wins
// on disagreement. Deltas arrive both from POST responses and the event
// stream; sequence numbers keep the fold exactly-once.

import { ApiClient, sseEvents } from "./api.js";
import { BoardModel } from "./boardmodel.js";
import { BoardView } from "./boardview.js";
import { GraphModel, sameColors } from "./graphmodel.js";
import { GraphView } from "./graphview.js";
import type { GraphDelta, MoveSpec, PuzzleDescriptor, SessionInfo } from "./types.js";

export class App {
  private api: ApiClient;
  private session: SessionInfo | null = null;
  private board: BoardModel | null = null;
  private boardView: BoardView | null = null;
  private graph: GraphModel | null = null;
  private graphView: GraphView | null = null;
  private streamAbort: AbortController | null = null;
  private epoch = 0;

  private readonly picker: HTMLSelectElement;
  private readonly shuffleInput: HTMLInputElement;
  private readonly banner: HTMLElement;
  private readonly status: HTMLElement;
  private readonly boardHost: HTMLElement;
  private readonly canvas: HTMLCanvasElement;

  constructor(root: HTMLElement, api: ApiClient = new ApiClient()) {
    this.api = api;
    root.innerHTML = `
      <header>
        <h1>tileshift</h1>
        <div class="controls">
          <select id="picker"></select>
          <label>shuffle <input id="shuffle-m" type="number" min="0" value="12" /></label>
          <button id="new-session">new game</button>
          <button id="reshuffle">shuffle</button>
          <button id="reset">reset</button>
          <button id="hint">hint</button>
        </div>
      </header>
      <main>
        <section class="board-pane">
          <div id="board"></div>
          <div id="banner" class="banner hidden">solved!</div>
          <div id="status" class="status"></div>
        </section>
        <section class="graph-pane">
          <canvas id="graph" width="800" height="640"></canvas>
        </section>
      </main>`;
    this.picker = root.querySelector("#picker")!;
    this.shuffleInput = root.querySelector("#shuffle-m")!;
    this.banner = root.querySelector("#banner")!;
    this.status = root.querySelector("#status")!;
    this.boardHost = root.querySelector("#board")!;
    this.canvas = root.querySelector("#graph")!;
    root.querySelector("#new-session")!.addEventListener("click", () => void this.startSession());
    root.querySelector("#reshuffle")!.addEventListener("click", () => void this.reshuffle());
    root.querySelector("#reset")!.addEventListener("click", () => void this.reset());
    root.querySelector("#hint")!.addEventListener("click", () => void this.hint());
  }

  async init(): Promise<void> {
    const { puzzles } = await this.api.listPuzzles();
    this.picker.innerHTML = "";
    for (const p of puzzles) {
      const option = document.createElement("option");
      option.value = p.id;
      option.textContent = `${p.id} (${p.squares} squares)`;
      this.picker.appendChild(option);
    }
    const preferred = puzzles.find((p) => p.id === "cross-1-4-4") ?? puzzles[0];
    if (preferred) {
      this.picker.value = preferred.id;
      await this.startSession();
    }
  }

  async startSession(): Promise<void> {
    this.stopStream();
    const shuffleMoves = Math.max(0, Number(this.shuffleInput.value) || 0);
    const session = await this.api.createSession({ puzzle_id: this.picker.value, shuffle_moves: shuffleMoves });
    this.adoptSession(session, session.puzzle!);
    this.subscribe();
  }

  private adoptSession(session: SessionInfo, puzzle: PuzzleDescriptor): void {
    this.session = session;
    this.epoch = session.graph?.epoch ?? 0;
    this.board = new BoardModel(puzzle);
    this.boardHost.innerHTML = "";
    this.boardView = new BoardView(this.boardHost, this.board, (mv) => void this.push(mv));
    this.boardView.render(session.current);
    this.graph = session.graph
      ? GraphModel.fromSnapshot(session.graph, puzzle.home)
      : new GraphModel(session.current, puzzle.home);
    this.graph.seq = session.seq;
    this.graphView?.stop();
    this.graphView = new GraphView(this.canvas, this.graph, puzzle.colors.map((c) => c.rgb), puzzle.home);
    this.graphView.start();
    this.updateStatus(session.solved);
  }

  private async push(move: MoveSpec): Promise<void> {
    if (!this.session || !this.board || !this.boardView) return;
    const optimistic = this.board.applyMove(this.boardView.currentColors(), move);
    this.boardView.animateMove(move, optimistic);
    this.boardView.highlightHint(null);
    try {
      const delta = await this.api.postMove(this.session.id, move);
      this.applyDelta(delta);
    } catch {
      await this.resync(); // server disagreed or vanished: it wins
    }
  }

  private applyDelta(delta: GraphDelta): void {
    if (!this.graph || !this.graphView || !this.boardView) return;
    if (delta.seq <= this.graph.seq) return; // already folded (stream + POST race)
    if (delta.seq > this.graph.seq + 1) {
      void this.resync();
      return;
    }
    const previous = this.graph.currentId;
    const effect = this.graph.apply(delta);
    if (effect.addedNode) this.graphView.noteNode(effect.addedNode.id, previous);
    if (effect.addedEdge) this.graphView.noteEdge(effect.addedEdge[0], effect.addedEdge[1]);
    const serverColors = this.graph.currentColors();
    if (!sameColors(serverColors, this.boardView.currentColors())) {
      this.boardView.render(serverColors); // reconcile: the delta is the truth
    }
    this.updateStatus(effect.solved);
  }

  private async resync(): Promise<void> {
    if (!this.session || !this.board) return;
    const [info, snapshot] = await Promise.all([
      this.api.getSession(this.session.id),
      this.api.getGraph(this.session.id),
    ]);
    this.graph = GraphModel.fromSnapshot(snapshot, this.board.puzzle.home);
    this.graphView?.adoptModel(this.graph);
    this.boardView?.render(info.current);
    this.epoch = snapshot.epoch;
    this.updateStatus(info.solved);
  }

  private subscribe(): void {
    if (!this.session) return;
    const sid = this.session.id;
    this.streamAbort = new AbortController();
    const signal = this.streamAbort.signal;
    void (async () => {
      while (!signal.aborted && this.session?.id === sid) {
        try {
          const since = this.graph?.seq ?? 0;
          for await (const event of sseEvents(this.api.eventsUrl(sid, since), signal)) {
            if (event.event === "reset") {
              await this.resync();
            } else {
              this.applyDelta(JSON.parse(event.data) as GraphDelta);
            }
          }
        } catch {
          if (signal.aborted) return;
          await new Promise((r) => setTimeout(r, 1500)); // reconnect with replay
        }
      }
    })();
  }

  private stopStream(): void {
    this.streamAbort?.abort();
    this.streamAbort = null;
  }

  private async reshuffle(): Promise<void> {
    if (!this.session) return;
    const m = Math.max(0, Number(this.shuffleInput.value) || 0);
    await this.api.shuffle(this.session.id, m);
    await this.reloadAfterEpochChange();
  }

  private async reset(): Promise<void> {
    if (!this.session) return;
    await this.api.reset(this.session.id);
    await this.reloadAfterEpochChange();
  }

  private async reloadAfterEpochChange(): Promise<void> {
    if (!this.session || !this.board) return;
    const info = await this.api.getSession(this.session.id);
    const snapshot = await this.api.getGraph(this.session.id);
    this.session = { ...this.session, ...info };
    this.graph = GraphModel.fromSnapshot(snapshot, this.board.puzzle.home);
    this.graphView?.adoptModel(this.graph);
    this.boardView?.render(info.current);
    this.epoch = snapshot.epoch;
    this.updateStatus(info.solved);
  }

  private async hint(): Promise<void> {
    if (!this.session || !this.boardView) return;
    try {
      const hint = await this.api.getHint(this.session.id);
      this.boardView.highlightHint(hint.move);
    } catch {
      this.boardView.highlightHint(null);
    }
  }

  private updateStatus(solved: boolean): void {
    this.banner.classList.toggle("hidden", !solved);
    if (this.graph) {
      this.status.textContent = `explored: ${this.graph.nodeCount} configurations, ${this.graph.edgeCount} moves`;
    }
  }
}
