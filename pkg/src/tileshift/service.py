"""HTTP session service for interactive play with live graph growth.

Each session owns a current configuration, a move log, and an explored
subgraph that grows move by move: reaching a configuration for the first
time appends a node, traversing a move-pair for the first time appends an
edge.  Every move emits a GraphDelta on the session's event stream, and
snapshots are always the fold of the deltas emitted so far.

Within a session moves are serialized under a lock; sessions are fully
independent of each other.
"""

from __future__ import annotations

import json
import random
import threading
import time
import uuid
from pathlib import Path
from typing import Iterator

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from .errors import (
    BudgetExceeded,
    InvalidMove,
    NoMovesAvailable,
    ParseError,
    TileshiftError,
    UnknownPuzzle,
    UnknownSession,
    Unsolvable,
    ValidationError,
)
from .puzzle import (
    RNG_ALGORITHM,
    MoveSpec,
    Puzzle,
    apply_move,
    enumerate_moves,
    move_cycles,
    normalize_move,
    shuffle,
)
from .puzzleio import bundled_names, document_to_puzzle, load_bundled, load_puzzle, puzzle_to_document
from .space import StateCodec

DEFAULT_HINT_BUDGET = 200_000


class CreateSessionBody(BaseModel):
    puzzle_id: str
    shuffle_moves: int = Field(default=0, ge=0)
    seed: int | None = None
    reveal_shuffle_path: bool = False


class MoveBody(BaseModel):
    axis: str
    cycle_id: int
    direction: str


class ShuffleBody(BaseModel):
    m: int = Field(ge=0)
    seed: int | None = None


def puzzle_descriptor(puzzle: Puzzle) -> dict:
    """Everything a client needs to render the board and map taps to moves."""
    board = puzzle.board
    placement = board.placement or tuple((i, 0) for i in range(board.n))
    cycles = move_cycles(board)
    return {
        "name": puzzle.name,
        "squares": [{"id": i, "x": x, "y": y} for i, (x, y) in enumerate(placement)],
        "colors": [{"name": c.name, "rgb": c.rgb, "count": c.count} for c in puzzle.scheme.colors],
        "home": list(puzzle.home),
        "cycles": {
            "horizontal": [list(c) for c in cycles["horizontal"]],
            "vertical": [list(c) for c in cycles["vertical"]],
        },
        "moves": [
            {"axis": m.axis, "cycle_id": m.cycle_id, "direction": m.direction}
            for m in enumerate_moves(board)
        ],
    }


class _ExploredGraph:
    """Session-local graph of visited configurations and traversed moves."""

    def __init__(self, codec: StateCodec):
        self.codec = codec
        self.id_by_code: dict[int, int] = {}
        self.colors: list[list[int]] = []
        self.depth_unknown: list[bool] = []
        self.edges: set[tuple[int, int]] = set()

    def add_node(self, cfg, depth_unknown: bool) -> int:
        code = self.codec.encode(cfg)
        nid = len(self.colors)
        self.id_by_code[code] = nid
        self.colors.append(list(cfg))
        self.depth_unknown.append(depth_unknown)
        return nid

    def lookup(self, cfg) -> int | None:
        return self.id_by_code.get(self.codec.encode(cfg))

    def add_edge(self, a: int, b: int) -> bool:
        edge = (a, b) if a < b else (b, a)
        if edge in self.edges:
            return False
        self.edges.add(edge)
        return True

    def node_doc(self, nid: int) -> dict:
        return {"id": nid, "colors": list(self.colors[nid]), "depth_unknown": self.depth_unknown[nid]}


class Session:
    """One live play session; all mutation happens under ``lock``."""

    def __init__(
        self,
        sid: str,
        puzzle_id: str,
        puzzle: Puzzle,
        shuffle_moves: int = 0,
        seed: int | None = None,
        reveal_shuffle_path: bool = False,
        created_at: float | None = None,
    ):
        if seed is None:
            seed = random.randrange(2**63)  # concrete seed so the session replays exactly
        self.id = sid
        self.puzzle_id = puzzle_id
        self.puzzle = puzzle
        self.seed = seed
        self.shuffle_moves = shuffle_moves
        self.reveal_shuffle_path = reveal_shuffle_path
        self.created_at = created_at if created_at is not None else time.time()
        self.lock = threading.Lock()
        self.new_delta = threading.Condition(self.lock)
        self.epoch = 0
        self.move_log: list[tuple[MoveSpec, float]] = []
        self.deltas: list[dict] = []
        self._codec = StateCodec(puzzle.board.n, puzzle.scheme.num_colors)
        self._init_exploration(shuffle_moves, seed)

    def _init_exploration(self, shuffle_moves: int, seed: int) -> None:
        puzzle = self.puzzle
        if shuffle_moves > 0:
            start, path = shuffle(puzzle, shuffle_moves, seed=seed)
        else:
            start, path = puzzle.home, []
        self.start = start
        self.explored = _ExploredGraph(self._codec)
        if self.reveal_shuffle_path and path:
            cfg = puzzle.home
            self.explored.add_node(cfg, depth_unknown=False)
            prev = 0
            for mv in path:
                cfg = apply_move(cfg, mv, puzzle.board)
                nid = self.explored.lookup(cfg)
                if nid is None:
                    nid = self.explored.add_node(cfg, depth_unknown=cfg != puzzle.home)
                if nid != prev:
                    self.explored.add_edge(prev, nid)
                prev = nid
            self.current_id = prev
        else:
            self.current_id = self.explored.add_node(start, depth_unknown=start != puzzle.home)
        self.current = start

    # -- queries ---------------------------------------------------------

    @property
    def solved(self) -> bool:
        return self.current == self.puzzle.home

    def info(self) -> dict:
        with self.lock:
            return self._info_locked()

    def _info_locked(self) -> dict:
        return {
            "id": self.id,
            "puzzle_id": self.puzzle_id,
            "current": list(self.current),
            "move_count": len(self.move_log),
            "solved": self.solved,
            "explored": {"nodes": len(self.explored.colors), "edges": len(self.explored.edges)},
            "seq": len(self.deltas),
            "epoch": self.epoch,
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
            "created_at": self.created_at,
        }

    def graph_snapshot(self) -> dict:
        with self.lock:
            return {
                "nodes": [self.explored.node_doc(i) for i in range(len(self.explored.colors))],
                "edges": sorted([list(e) for e in self.explored.edges]),
                "current": self.current_id,
                "seq": len(self.deltas),
                "epoch": self.epoch,
                "solved": self.solved,
            }

    # -- mutation --------------------------------------------------------

    def play(self, mv: MoveSpec, ts: float | None = None) -> dict:
        with self.lock:
            mv = normalize_move(self.puzzle.board, mv)
            new_cfg = apply_move(self.current, mv, self.puzzle.board)
            self.move_log.append((mv, ts if ts is not None else time.time()))

            prev_id = self.current_id
            new_node = None
            new_edge = None
            revisit = None
            nid = self.explored.lookup(new_cfg)
            if nid is None:
                nid = self.explored.add_node(new_cfg, depth_unknown=new_cfg != self.puzzle.home)
                new_node = self.explored.node_doc(nid)
                self.explored.add_edge(prev_id, nid)
                new_edge = sorted((prev_id, nid))
            else:
                revisit = nid
                if nid != prev_id and self.explored.add_edge(prev_id, nid):
                    new_edge = sorted((prev_id, nid))

            self.current = new_cfg
            self.current_id = nid
            delta = {
                "seq": len(self.deltas) + 1,
                "move_echo": {"axis": mv.axis, "cycle_id": mv.cycle_id, "direction": mv.direction},
                "new_node": new_node,
                "new_edge": new_edge,
                "revisit": revisit,
                "solved": self.solved,
            }
            self.deltas.append(delta)
            self.new_delta.notify_all()
            return delta

    def reset(self) -> dict:
        """Back to the session's start state with a fresh exploration."""
        with self.lock:
            self.move_log.clear()
            self.deltas.clear()
            self.epoch += 1
            self._init_exploration(self.shuffle_moves, self.seed)
            self.new_delta.notify_all()
            return self._info_locked()

    def reshuffle(self, m: int, seed: int | None = None) -> dict:
        with self.lock:
            if seed is None:
                seed = random.randrange(2**63)
            self.move_log.clear()
            self.deltas.clear()
            self.epoch += 1
            self.shuffle_moves = m
            self.seed = seed
            self._init_exploration(m, seed)
            self.new_delta.notify_all()
            return self._info_locked()

    # -- persistence -----------------------------------------------------

    def base_events(self) -> list[dict]:
        """Minimal event stream that replays to exactly this session state."""
        create = {
            "op": "create",
            "sid": self.id,
            "puzzle_id": self.puzzle_id,
            "shuffle_moves": self.shuffle_moves,
            "seed": self.seed,
            "reveal_shuffle_path": self.reveal_shuffle_path,
            "created_at": self.created_at,
        }
        out = [create]
        out.extend(
            {"op": "move", "sid": self.id, "move": {"axis": mv.axis, "cycle_id": mv.cycle_id, "direction": mv.direction}, "ts": ts}
            for mv, ts in self.move_log
        )
        return out


class SessionService:
    """Puzzle registry plus session store, with optional JSONL persistence."""

    def __init__(self, puzzle_dir: str | None = None, state_file: str | None = None):
        self.lock = threading.Lock()
        self.puzzles: dict[str, Puzzle] = {}
        self.sessions: dict[str, Session] = {}
        self.state_path = Path(state_file) if state_file else None
        self._state_fh = None
        for name in bundled_names():
            puzzle = load_bundled(name)
            self.puzzles[puzzle.name] = puzzle
        if puzzle_dir:
            for path in sorted(Path(puzzle_dir).glob("*.json")):
                puzzle = load_puzzle(path)
                self.puzzles[puzzle.name] = puzzle
        if self.state_path is not None:
            self._load_state()

    # -- puzzles ---------------------------------------------------------

    def list_puzzles(self) -> list[dict]:
        with self.lock:
            return [
                {"id": name, "squares": p.board.n, "colors": p.scheme.num_colors}
                for name, p in sorted(self.puzzles.items())
            ]

    def get_puzzle(self, puzzle_id: str) -> Puzzle:
        with self.lock:
            try:
                return self.puzzles[puzzle_id]
            except KeyError:
                raise UnknownPuzzle(f"no puzzle registered as {puzzle_id!r}") from None

    def register_puzzle(self, doc: dict) -> str:
        puzzle = document_to_puzzle(doc)
        with self.lock:
            self.puzzles[puzzle.name] = puzzle
        self._append({"op": "puzzle", "doc": puzzle_to_document(puzzle)})
        return puzzle.name

    # -- sessions --------------------------------------------------------

    def create_session(
        self,
        puzzle_id: str,
        shuffle_moves: int = 0,
        seed: int | None = None,
        reveal_shuffle_path: bool = False,
        sid: str | None = None,
        created_at: float | None = None,
        persist: bool = True,
    ) -> Session:
        puzzle = self.get_puzzle(puzzle_id)
        session = Session(
            sid=sid or uuid.uuid4().hex,
            puzzle_id=puzzle_id,
            puzzle=puzzle,
            shuffle_moves=shuffle_moves,
            seed=seed,
            reveal_shuffle_path=reveal_shuffle_path,
            created_at=created_at,
        )
        with self.lock:
            self.sessions[session.id] = session
        if persist:
            self._append(session.base_events()[0])
        return session

    def get_session(self, sid: str) -> Session:
        with self.lock:
            try:
                return self.sessions[sid]
            except KeyError:
                raise UnknownSession(f"no session {sid!r}") from None

    def play_move(self, sid: str, mv: MoveSpec) -> dict:
        session = self.get_session(sid)
        delta = session.play(mv)
        self._append({"op": "move", "sid": sid, "move": delta["move_echo"], "ts": session.move_log[-1][1]})
        return delta

    def reset_session(self, sid: str) -> dict:
        session = self.get_session(sid)
        info = session.reset()
        self._append({"op": "reset", "sid": sid})
        return info

    def shuffle_session(self, sid: str, m: int, seed: int | None = None) -> dict:
        session = self.get_session(sid)
        info = session.reshuffle(m, seed)
        self._append({"op": "shuffle", "sid": sid, "m": m, "seed": session.seed})
        return info

    # -- persistence -----------------------------------------------------

    def _append(self, event: dict) -> None:
        if self.state_path is None:
            return
        with self.lock:
            if self._state_fh is None:
                self._state_fh = self.state_path.open("a", encoding="utf-8")
            self._state_fh.write(json.dumps(event) + "\n")
            self._state_fh.flush()

    def _load_state(self) -> None:
        if not self.state_path.exists():
            return
        events = []
        with self.state_path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        for ev in events:
            op = ev.get("op")
            try:
                if op == "puzzle":
                    puzzle = document_to_puzzle(ev["doc"])
                    self.puzzles[puzzle.name] = puzzle
                elif op == "create":
                    self.create_session(
                        ev["puzzle_id"],
                        shuffle_moves=ev.get("shuffle_moves", 0),
                        seed=ev.get("seed"),
                        reveal_shuffle_path=ev.get("reveal_shuffle_path", False),
                        sid=ev["sid"],
                        created_at=ev.get("created_at"),
                        persist=False,
                    )
                elif op == "move":
                    mv = MoveSpec(ev["move"]["axis"], ev["move"]["cycle_id"], ev["move"]["direction"])
                    self.sessions[ev["sid"]].play(mv, ts=ev.get("ts"))
                elif op == "reset":
                    self.sessions[ev["sid"]].reset()
                elif op == "shuffle":
                    self.sessions[ev["sid"]].reshuffle(ev["m"], ev.get("seed"))
            except (KeyError, TileshiftError):
                continue  # skip events for vanished puzzles/sessions
        self._compact()

    def _compact(self) -> None:
        """Rewrite the log as the minimal event stream reproducing the state."""
        events: list[dict] = []
        bundled = set(bundled_names())
        for name, puzzle in self.puzzles.items():
            if name not in bundled:
                events.append({"op": "puzzle", "doc": puzzle_to_document(puzzle)})
        for session in self.sessions.values():
            events.extend(session.base_events())
        tmp = self.state_path.with_suffix(".tmp")
        with tmp.open("w", encoding="utf-8") as fh:
            for ev in events:
                fh.write(json.dumps(ev) + "\n")
        tmp.replace(self.state_path)


def event_stream(session: Session, since: int = 0, keepalive: float = 15.0) -> Iterator[str]:
    """Server-sent events: ordered GraphDelta replay plus live updates.

    Never yields while holding the session lock, so a slow consumer cannot
    stall the players.
    """
    yield "retry: 2000\n\n"
    with session.lock:
        epoch = session.epoch
        last = min(since, len(session.deltas))
    while True:
        reset_event = None
        with session.lock:
            if session.epoch != epoch:
                epoch = session.epoch
                last = 0
                reset_event = f"event: reset\ndata: {json.dumps({'epoch': epoch})}\n\n"
            pending = list(session.deltas[last:])
            if not pending and reset_event is None:
                session.new_delta.wait(timeout=keepalive)
                if session.epoch != epoch:
                    continue
                pending = list(session.deltas[last:])
        if reset_event:
            yield reset_event
        if pending:
            for delta in pending:
                yield f"id: {delta['seq']}\ndata: {json.dumps(delta)}\n\n"
            last += len(pending)
        elif not reset_event:
            yield ": keepalive\n\n"


def create_app(puzzle_dir: str | None = None, state_file: str | None = None, ui_dir: str | None = None):
    """Wire the service into a FastAPI application."""
    service = SessionService(puzzle_dir=puzzle_dir, state_file=state_file)
    app = FastAPI(title="tileshift", version="0.1.0")
    app.state.service = service

    _STATUS = {
        UnknownPuzzle: 404,
        UnknownSession: 404,
        ValidationError: 422,
        ParseError: 422,
        InvalidMove: 422,
        NoMovesAvailable: 409,
        BudgetExceeded: 409,
        Unsolvable: 409,
    }

    @app.exception_handler(TileshiftError)
    async def _tileshift_error(request: Request, exc: TileshiftError):
        status = 422
        for klass, code in _STATUS.items():
            if isinstance(exc, klass):
                status = code
                break
        body = {"code": _snake(type(exc).__name__), "message": str(exc)}
        if getattr(exc, "field", None):
            body["field"] = exc.field
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        field = ".".join(str(p) for p in first.get("loc", ()) if p not in ("body",))
        return JSONResponse(
            status_code=422,
            content={"code": "validation_error", "message": first.get("msg", "invalid request"), "field": field},
        )

    @app.get("/api/puzzles")
    def list_puzzles():
        return {"puzzles": service.list_puzzles()}

    @app.get("/api/puzzles/{puzzle_id}")
    def get_puzzle(puzzle_id: str):
        return puzzle_descriptor(service.get_puzzle(puzzle_id))

    @app.post("/api/puzzles", status_code=201)
    def register_puzzle(doc: dict):
        return {"id": service.register_puzzle(doc)}

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = service.create_session(
            body.puzzle_id,
            shuffle_moves=body.shuffle_moves,
            seed=body.seed,
            reveal_shuffle_path=body.reveal_shuffle_path,
        )
        info = session.info()
        info["puzzle"] = puzzle_descriptor(session.puzzle)
        info["graph"] = session.graph_snapshot()
        return info

    @app.get("/api/sessions/{sid}")
    def get_session(sid: str):
        return service.get_session(sid).info()

    @app.post("/api/sessions/{sid}/moves")
    def post_move(sid: str, body: MoveBody):
        try:
            mv = MoveSpec(axis=body.axis, cycle_id=body.cycle_id, direction=body.direction)
        except ValueError as e:
            raise InvalidMove(str(e)) from e
        return service.play_move(sid, mv)

    @app.post("/api/sessions/{sid}/reset")
    def post_reset(sid: str):
        return service.reset_session(sid)

    @app.post("/api/sessions/{sid}/shuffle")
    def post_shuffle(sid: str, body: ShuffleBody):
        return service.shuffle_session(sid, body.m, body.seed)

    @app.get("/api/sessions/{sid}/graph")
    def get_graph(sid: str):
        return service.get_session(sid).graph_snapshot()

    @app.get("/api/sessions/{sid}/hint")
    def get_hint(sid: str, budget: int = DEFAULT_HINT_BUDGET, strict: bool = False):
        from .solver import hint as solver_hint

        session = service.get_session(sid)
        with session.lock:
            current = session.current
        found = solver_hint(session.puzzle, current, budget=budget, allow_greedy=not strict)
        if found is None:
            return {"move": None, "optimal": True, "solved": True}
        return {
            "move": {"axis": found.move.axis, "cycle_id": found.move.cycle_id, "direction": found.move.direction},
            "optimal": found.optimal,
            "solved": False,
        }

    @app.get("/api/sessions/{sid}/events")
    def get_events(sid: str, request: Request, since: int = 0):
        session = service.get_session(sid)
        header = request.headers.get("last-event-id")
        if header and header.isdigit():
            since = int(header)
        return StreamingResponse(event_stream(session, since=since), media_type="text/event-stream")

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _snake(name: str) -> str:
    out = []
    for i, ch in enumerate(name):
        if ch.isupper() and i and not name[i - 1].isupper():
            out.append("_")
        out.append(ch.lower())
    return "".join(out)
