// Incremental force-directed layout: pairwise repulsion, springs along
// edges, a weak centering pull, and velocity damping. New nodes spawn
// next to the node that discovered them so growth reads as exploration.

export interface LayoutNode {
  id: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutOptions {
  repulsion: number;
  springLength: number;
  springStrength: number;
  gravity: number;
  damping: number;
  maxSpeed: number;
}

const DEFAULTS: LayoutOptions = {
  repulsion: 1200,
  springLength: 60,
  springStrength: 0.06,
  gravity: 0.015,
  damping: 0.85,
  maxSpeed: 80,
};

export class ForceLayout {
  readonly nodes = new Map<number, LayoutNode>();
  readonly edges: [number, number][] = [];
  private readonly options: LayoutOptions;
  private spawnAngle = 0;

  constructor(options: Partial<LayoutOptions> = {}) {
    this.options = { ...DEFAULTS, ...options };
  }

  addNode(id: number, nearId?: number): LayoutNode {
    const existing = this.nodes.get(id);
    if (existing) return existing;
    this.spawnAngle += 2.399963; // golden angle keeps siblings fanned out
    const radius = this.options.springLength * 0.6;
    const anchor = nearId !== undefined ? this.nodes.get(nearId) : undefined;
    const node: LayoutNode = {
      id,
      x: (anchor?.x ?? 0) + radius * Math.cos(this.spawnAngle),
      y: (anchor?.y ?? 0) + radius * Math.sin(this.spawnAngle),
      vx: 0,
      vy: 0,
    };
    this.nodes.set(id, node);
    return node;
  }

  addEdge(a: number, b: number): void {
    this.addNode(a);
    this.addNode(b);
    this.edges.push([a, b]);
  }

  /** One simulation step; returns the largest node displacement. */
  tick(dt = 1): number {
    const { repulsion, springLength, springStrength, gravity, damping, maxSpeed } = this.options;
    const nodes = [...this.nodes.values()];

    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = nodes[i];
        const b = nodes[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-4) {
          // coincident nodes: nudge apart deterministically
          dx = 0.01 * (i - j);
          dy = 0.01;
          d2 = dx * dx + dy * dy;
        }
        const f = repulsion / d2;
        const d = Math.sqrt(d2);
        const fx = (f * dx) / d;
        const fy = (f * dy) / d;
        a.vx += fx * dt;
        a.vy += fy * dt;
        b.vx -= fx * dt;
        b.vy -= fy * dt;
      }
    }

    for (const [ia, ib] of this.edges) {
      const a = this.nodes.get(ia)!;
      const b = this.nodes.get(ib)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-3);
      const f = springStrength * (d - springLength);
      const fx = (f * dx) / d;
      const fy = (f * dy) / d;
      a.vx += fx * dt;
      a.vy += fy * dt;
      b.vx -= fx * dt;
      b.vy -= fy * dt;
    }

    let maxMove = 0;
    for (const node of nodes) {
      node.vx -= node.x * gravity * dt;
      node.vy -= node.y * gravity * dt;
      node.vx *= damping;
      node.vy *= damping;
      const speed = Math.sqrt(node.vx * node.vx + node.vy * node.vy);
      if (speed > maxSpeed) {
        node.vx *= maxSpeed / speed;
        node.vy *= maxSpeed / speed;
      }
      node.x += node.vx * dt;
      node.y += node.vy * dt;
      maxMove = Math.max(maxMove, Math.abs(node.vx * dt), Math.abs(node.vy * dt));
    }
    return maxMove;
  }

  /** Run ticks until movement settles or the budget runs out. */
  settle(maxTicks = 300, epsilon = 0.05): number {
    let used = 0;
    while (used < maxTicks && this.tick() > epsilon) {
      used++;
    }
    return used;
  }

  bounds(): { minX: number; minY: number; maxX: number; maxY: number } {
    let minX = Infinity;
    let minY = Infinity;
    let maxX = -Infinity;
    let maxY = -Infinity;
    for (const node of this.nodes.values()) {
      minX = Math.min(minX, node.x);
      minY = Math.min(minY, node.y);
      maxX = Math.max(maxX, node.x);
      maxY = Math.max(maxY, node.y);
    }
    if (!this.nodes.size) return { minX: -1, minY: -1, maxX: 1, maxY: 1 };
    return { minX, minY, maxX, maxY };
  }
}
