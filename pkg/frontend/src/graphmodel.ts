// Client-side fold of GraphDeltas. The invariant this file exists for:
// applying every delta received so far must reproduce the server's
// /graph snapshot exactly, so the view never invents or loses state.

import type { GraphDelta, GraphNode, GraphSnapshot } from "./types.js";

const edgeKey = (a: number, b: number) => (a < b ? `${a}-${b}` : `${b}-${a}`);

export interface DeltaEffect {
  addedNode: GraphNode | null;
  addedEdge: [number, number] | null;
  currentId: number;
  solved: boolean;
}

export class GraphModel {
  readonly nodes = new Map<number, GraphNode>();
  private readonly edgeKeys = new Set<string>();
  readonly edges: [number, number][] = [];
  currentId = 0;
  solved: boolean;
  seq = 0;

  constructor(startColors: number[], homeColors: number[]) {
    this.nodes.set(0, {
      id: 0,
      colors: [...startColors],
      depth_unknown: !sameColors(startColors, homeColors),
    });
    this.solved = sameColors(startColors, homeColors);
  }

  static fromSnapshot(snapshot: GraphSnapshot, homeColors: number[]): GraphModel {
    const model = new GraphModel(snapshot.nodes[0]?.colors ?? homeColors, homeColors);
    model.nodes.clear();
    for (const node of snapshot.nodes) {
      model.nodes.set(node.id, { ...node, colors: [...node.colors] });
    }
    for (const [a, b] of snapshot.edges) {
      model.insertEdge(a, b);
    }
    model.currentId = snapshot.current;
    model.solved = snapshot.solved;
    model.seq = snapshot.seq;
    return model;
  }

  apply(delta: GraphDelta): DeltaEffect {
    let addedNode: GraphNode | null = null;
    let addedEdge: [number, number] | null = null;
    if (delta.new_node) {
      addedNode = { ...delta.new_node, colors: [...delta.new_node.colors] };
      this.nodes.set(addedNode.id, addedNode);
      this.currentId = addedNode.id;
    }
    if (delta.revisit !== null) {
      this.currentId = delta.revisit;
    }
    if (delta.new_edge) {
      const [a, b] = delta.new_edge;
      if (this.insertEdge(a, b)) {
        addedEdge = [a, b];
      }
    }
    this.solved = delta.solved;
    this.seq = delta.seq;
    return { addedNode, addedEdge, currentId: this.currentId, solved: this.solved };
  }

  private insertEdge(a: number, b: number): boolean {
    const key = edgeKey(a, b);
    if (this.edgeKeys.has(key)) return false;
    this.edgeKeys.add(key);
    this.edges.push(a < b ? [a, b] : [b, a]);
    return true;
  }

  get nodeCount(): number {
    return this.nodes.size;
  }

  get edgeCount(): number {
    return this.edges.length;
  }

  currentColors(): number[] {
    return [...(this.nodes.get(this.currentId)?.colors ?? [])];
  }

  matchesSnapshot(snapshot: GraphSnapshot): boolean {
    if (snapshot.nodes.length !== this.nodes.size) return false;
    for (const node of snapshot.nodes) {
      const mine = this.nodes.get(node.id);
      if (!mine || !sameColors(mine.colors, node.colors)) return false;
    }
    const theirs = new Set(snapshot.edges.map(([a, b]) => edgeKey(a, b)));
    if (theirs.size !== this.edgeKeys.size) return false;
    for (const key of this.edgeKeys) {
      if (!theirs.has(key)) return false;
    }
    return snapshot.current === this.currentId;
  }
}

export function sameColors(a: number[], b: number[]): boolean {
  return a.length === b.length && a.every((v, i) => v === b[i]);
}
