// Wire types shared with the HTTP service.

export type Axis = "horizontal" | "vertical";
export type Direction = "forward" | "backward";

export interface MoveSpec {
  axis: Axis;
  cycle_id: number;
  direction: Direction;
}

export interface SquarePos {
  id: number;
  x: number;
  y: number;
}

export interface ColorDef {
  name: string;
  rgb: string;
  count: number;
}

export interface PuzzleDescriptor {
  name: string;
  squares: SquarePos[];
  colors: ColorDef[];
  home: number[];
  cycles: { horizontal: number[][]; vertical: number[][] };
  moves: MoveSpec[];
}

export interface PuzzleListEntry {
  id: string;
  squares: number;
  colors: number;
}

export interface GraphNode {
  id: number;
  colors: number[];
  depth_unknown: boolean;
}

export interface GraphDelta {
  seq: number;
  move_echo: MoveSpec;
  new_node: GraphNode | null;
  new_edge: [number, number] | null;
  revisit: number | null;
  solved: boolean;
}

export interface GraphSnapshot {
  nodes: GraphNode[];
  edges: [number, number][];
  current: number;
  seq: number;
  epoch: number;
  solved: boolean;
}

export interface SessionInfo {
  id: string;
  puzzle_id: string;
  current: number[];
  move_count: number;
  solved: boolean;
  explored: { nodes: number; edges: number };
  seq: number;
  puzzle?: PuzzleDescriptor;
  graph?: GraphSnapshot;
}

export interface HintResponse {
  move: MoveSpec | null;
  optimal: boolean;
  solved: boolean;
}
