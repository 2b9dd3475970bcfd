// Thin HTTP client for the play service, plus an SSE reader built on
// fetch streams so the same code runs in browsers and in node tests.

import type {
  GraphDelta,
  GraphSnapshot,
  HintResponse,
  MoveSpec,
  PuzzleDescriptor,
  PuzzleListEntry,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, payload.code ?? "error", payload.message ?? response.statusText);
    }
    return payload as T;
  }

  listPuzzles(): Promise<{ puzzles: PuzzleListEntry[] }> {
    return this.request("GET", "/api/puzzles");
  }

  getPuzzle(id: string): Promise<PuzzleDescriptor> {
    return this.request("GET", `/api/puzzles/${id}`);
  }

  createSession(body: {
    puzzle_id: string;
    shuffle_moves?: number;
    seed?: number;
    reveal_shuffle_path?: boolean;
  }): Promise<SessionInfo> {
    return this.request("POST", "/api/sessions", body);
  }

  getSession(sid: string): Promise<SessionInfo> {
    return this.request("GET", `/api/sessions/${sid}`);
  }

  postMove(sid: string, move: MoveSpec): Promise<GraphDelta> {
    return this.request("POST", `/api/sessions/${sid}/moves`, move);
  }

  reset(sid: string): Promise<SessionInfo> {
    return this.request("POST", `/api/sessions/${sid}/reset`);
  }

  shuffle(sid: string, m: number, seed?: number): Promise<SessionInfo> {
    return this.request("POST", `/api/sessions/${sid}/shuffle`, { m, seed });
  }

  getGraph(sid: string): Promise<GraphSnapshot> {
    return this.request("GET", `/api/sessions/${sid}/graph`);
  }

  getHint(sid: string, budget?: number): Promise<HintResponse> {
    const query = budget === undefined ? "" : `?budget=${budget}`;
    return this.request("GET", `/api/sessions/${sid}/hint${query}`);
  }

  eventsUrl(sid: string, since: number): string {
    return `${this.base}/api/sessions/${sid}/events?since=${since}`;
  }
}

export interface SseEvent {
  id?: string;
  event: string;
  data: string;
}

/** Parse one blank-line-terminated SSE block. Returns null for comments. */
export function parseSseBlock(block: string): SseEvent | null {
  let id: string | undefined;
  let event = "message";
  const data: string[] = [];
  let sawField = false;
  for (const line of block.split("\n")) {
    if (!line || line.startsWith(":")) continue;
    const colon = line.indexOf(":");
    const field = colon === -1 ? line : line.slice(0, colon);
    const value = colon === -1 ? "" : line.slice(colon + 1).replace(/^ /, "");
    if (field === "id") id = value;
    else if (field === "event") event = value;
    else if (field === "data") data.push(value);
    else if (field === "retry") continue;
    else continue;
    sawField = true;
  }
  if (!sawField || data.length === 0) return null;
  return { id, event, data: data.join("\n") };
}

/** Consume a server-sent-event stream until aborted or closed. */
export async function* sseEvents(url: string, signal?: AbortSignal): AsyncGenerator<SseEvent> {
  const response = await fetch(url, { headers: { accept: "text/event-stream" }, signal });
  if (!response.ok || !response.body) {
    throw new ApiError(response.status, "stream_error", `event stream failed (${response.status})`);
  }
  const reader = response.body.getReader();
  const decoder = new TextDecoder();
  let buffer = "";
  try {
    for (;;) {
      const { value, done } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let split;
      while ((split = buffer.indexOf("\n\n")) !== -1) {
        const block = buffer.slice(0, split);
        buffer = buffer.slice(split + 2);
        const event = parseSseBlock(block);
        if (event) yield event;
      }
    }
  } finally {
    reader.releaseLock();
    await response.body.cancel().catch(() => {});
  }
}
