// Descriptors mirroring what the service serves for the bundled puzzles.

import type { PuzzleDescriptor } from "../src/types.js";

export const CROSS: PuzzleDescriptor = {
  name: "cross-1-4-4",
  squares: [
    { id: 0, x: 2, y: 0 },
    { id: 1, x: 2, y: 1 },
    { id: 2, x: 0, y: 2 },
    { id: 3, x: 1, y: 2 },
    { id: 4, x: 2, y: 2 },
    { id: 5, x: 3, y: 2 },
    { id: 6, x: 4, y: 2 },
    { id: 7, x: 2, y: 3 },
    { id: 8, x: 2, y: 4 },
  ],
  colors: [
    { name: "pink", rgb: "#E85D9E", count: 1 },
    { name: "blue", rgb: "#2E86AB", count: 4 },
    { name: "purple", rgb: "#7E52A0", count: 4 },
  ],
  home: [2, 2, 1, 1, 0, 1, 1, 2, 2],
  cycles: {
    horizontal: [[2, 3, 4, 5, 6]],
    vertical: [[0, 1, 4, 7, 8]],
  },
  moves: [
    { axis: "horizontal", cycle_id: 0, direction: "forward" },
    { axis: "horizontal", cycle_id: 0, direction: "backward" },
    { axis: "vertical", cycle_id: 0, direction: "forward" },
    { axis: "vertical", cycle_id: 0, direction: "backward" },
  ],
};

export const CHROMA2: PuzzleDescriptor = {
  name: "chroma2",
  squares: [
    { id: 0, x: 0, y: 0 },
    { id: 1, x: 1, y: 0 },
    { id: 2, x: 0, y: 1 },
    { id: 3, x: 1, y: 1 },
  ],
  colors: [
    { name: "red", rgb: "#E4572E", count: 2 },
    { name: "blue", rgb: "#2E86AB", count: 2 },
  ],
  home: [0, 0, 1, 1],
  cycles: {
    horizontal: [
      [0, 1],
      [2, 3],
    ],
    vertical: [
      [0, 2],
      [1, 3],
    ],
  },
  moves: [
    { axis: "horizontal", cycle_id: 0, direction: "forward" },
    { axis: "horizontal", cycle_id: 1, direction: "forward" },
    { axis: "vertical", cycle_id: 0, direction: "forward" },
    { axis: "vertical", cycle_id: 1, direction: "forward" },
  ],
};
