// Canvas view of the explored graph. Nodes are drawn as little pies of
// their configuration's colors; the layout keeps simulating on animation
// frames so fresh nodes visibly shove their way in.

import { ForceLayout } from "./layout.js";
import { GraphModel, sameColors } from "./graphmodel.js";

export class GraphView {
  private readonly layout = new ForceLayout();
  private frame = 0;
  private running = false;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private model: GraphModel,
    private palette: string[],
    private homeColors: number[],
  ) {
    this.adoptModel(model);
  }

  adoptModel(model: GraphModel): void {
    this.model = model;
    this.layout.nodes.clear();
    this.layout.edges.length = 0;
    for (const node of model.nodes.values()) this.layout.addNode(node.id);
    for (const [a, b] of model.edges) this.layout.addEdge(a, b);
    this.layout.settle(120);
  }

  setPalette(palette: string[], homeColors: number[]): void {
    this.palette = palette;
    this.homeColors = homeColors;
  }

  noteNode(id: number, nearId?: number): void {
    this.layout.addNode(id, nearId);
  }

  noteEdge(a: number, b: number): void {
    this.layout.addEdge(a, b);
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    const loop = () => {
      if (!this.running) return;
      this.layout.tick();
      this.draw();
      this.frame = requestAnimationFrame(loop);
    };
    this.frame = requestAnimationFrame(loop);
  }

  stop(): void {
    this.running = false;
    cancelAnimationFrame(this.frame);
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    const { minX, minY, maxX, maxY } = this.layout.bounds();
    const pad = 30;
    const scale = Math.min(
      (width - 2 * pad) / Math.max(maxX - minX, 1),
      (height - 2 * pad) / Math.max(maxY - minY, 1),
      3,
    );
    const ox = width / 2 - ((minX + maxX) / 2) * scale;
    const oy = height / 2 - ((minY + maxY) / 2) * scale;
    const sx = (x: number) => x * scale + ox;
    const sy = (y: number) => y * scale + oy;

    ctx.strokeStyle = "rgba(148, 163, 184, 0.45)";
    ctx.lineWidth = 1;
    for (const [a, b] of this.layout.edges) {
      const na = this.layout.nodes.get(a)!;
      const nb = this.layout.nodes.get(b)!;
      ctx.beginPath();
      ctx.moveTo(sx(na.x), sy(na.y));
      ctx.lineTo(sx(nb.x), sy(nb.y));
      ctx.stroke();
    }

    for (const node of this.model.nodes.values()) {
      const pos = this.layout.nodes.get(node.id);
      if (!pos) continue;
      const x = sx(pos.x);
      const y = sy(pos.y);
      const r = node.id === this.model.currentId ? 10 : 7;
      const colors = node.colors;
      const arc = (2 * Math.PI) / colors.length;
      for (let i = 0; i < colors.length; i++) {
        ctx.beginPath();
        ctx.moveTo(x, y);
        ctx.arc(x, y, r, i * arc - Math.PI / 2, (i + 1) * arc - Math.PI / 2);
        ctx.closePath();
        ctx.fillStyle = this.palette[colors[i]] ?? "#888";
        ctx.fill();
      }
      if (sameColors(colors, this.homeColors)) {
        ctx.beginPath();
        ctx.arc(x, y, r + 4, 0, 2 * Math.PI);
        ctx.strokeStyle = "#4ade80";
        ctx.lineWidth = 2.5;
        ctx.stroke();
      }
      if (node.id === this.model.currentId) {
        ctx.beginPath();
        ctx.arc(x, y, r + 2, 0, 2 * Math.PI);
        ctx.strokeStyle = "#f8fafc";
        ctx.lineWidth = 2;
        ctx.stroke();
      }
    }
  }
}
