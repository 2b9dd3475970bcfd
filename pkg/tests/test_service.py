import json
import random
import socket
import threading
import time

import httpx
import pytest
from fastapi.testclient import TestClient

from tileshift.puzzle import MoveSpec, apply_move
from tileshift.puzzleio import load_bundled, puzzle_to_document
from tileshift.service import create_app


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def make_session(client, puzzle_id="chroma2", **kwargs):
    body = {"puzzle_id": puzzle_id, **kwargs}
    r = client.post("/api/sessions", json=body)
    assert r.status_code == 201, r.text
    return r.json()


def fold_deltas(start_colors, deltas):
    """The client-side fold the snapshots must agree with."""
    nodes = {0: list(start_colors)}
    edges = set()
    current = 0
    for d in deltas:
        if d["new_node"]:
            nodes[d["new_node"]["id"]] = d["new_node"]["colors"]
            current = d["new_node"]["id"]
        if d["revisit"] is not None:
            current = d["revisit"]
        if d["new_edge"]:
            edges.add(tuple(sorted(d["new_edge"])))
    return nodes, edges, current


class TestPuzzleEndpoints:
    def test_list(self, client):
        ids = [p["id"] for p in client.get("/api/puzzles").json()["puzzles"]]
        assert ids == ["chroma2", "chroma3", "chroma3-3-6", "cross-1-4-4", "grid5-hole"]

    def test_descriptor(self, client):
        doc = client.get("/api/puzzles/cross-1-4-4").json()
        assert len(doc["squares"]) == 9
        assert [c["count"] for c in doc["colors"]] == [1, 4, 4]
        assert doc["cycles"]["horizontal"] == [[2, 3, 4, 5, 6]]
        assert len(doc["moves"]) == 4

    def test_unknown_404(self, client):
        r = client.get("/api/puzzles/zzz")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_puzzle"

    def test_register_and_play(self, client):
        doc = puzzle_to_document(load_bundled("chroma2"))
        doc["name"] = "my-copy"
        r = client.post("/api/puzzles", json=doc)
        assert r.status_code == 201
        assert r.json()["id"] == "my-copy"
        session = make_session(client, "my-copy")
        assert session["puzzle"]["name"] == "my-copy"

    def test_register_invalid_422(self, client):
        doc = puzzle_to_document(load_bundled("chroma2"))
        doc["home"] = [0, 0, 0, 0]
        r = client.post("/api/puzzles", json=doc)
        assert r.status_code == 422
        assert r.json()["field"] == "home"


class TestSessions:
    def test_fresh_session_is_solved(self, client):
        s = make_session(client, shuffle_moves=0)
        assert s["solved"] is True
        assert s["explored"] == {"nodes": 1, "edges": 0}
        assert s["current"] == s["puzzle"]["home"]

    def test_fixed_seed_reproducible(self, client):
        a = make_session(client, "cross-1-4-4", shuffle_moves=30, seed=9)
        b = make_session(client, "cross-1-4-4", shuffle_moves=30, seed=9)
        assert a["current"] == b["current"]
        assert a["id"] != b["id"]

    def test_unknown_puzzle(self, client):
        r = client.post("/api/sessions", json={"puzzle_id": "zzz"})
        assert r.status_code == 404

    def test_first_move_adds_node_and_edge(self, client):
        s = make_session(client, shuffle_moves=3, seed=11)
        delta = client.post(f"/api/sessions/{s['id']}/moves", json={"axis": "vertical", "cycle_id": 0, "direction": "forward"}).json()
        assert delta["seq"] == 1
        assert delta["new_node"]["id"] == 1
        assert delta["new_edge"] == [0, 1]
        assert delta["revisit"] is None

    def test_move_then_inverse_revisits(self, client):
        s = make_session(client, shuffle_moves=3, seed=11)
        mv = {"axis": "vertical", "cycle_id": 0, "direction": "forward"}
        client.post(f"/api/sessions/{s['id']}/moves", json=mv)
        back = client.post(f"/api/sessions/{s['id']}/moves", json=mv).json()
        assert back["revisit"] == 0
        assert back["new_node"] is None
        assert back["new_edge"] is None

    def test_noop_move_is_self_revisit_without_edge(self, client):
        # both squares of the row share a color: the swap changes nothing
        s = make_session(client, "chroma2", shuffle_moves=0)
        delta = client.post(f"/api/sessions/{s['id']}/moves", json={"axis": "horizontal", "cycle_id": 0, "direction": "forward"}).json()
        assert delta["revisit"] == 0
        assert delta["new_edge"] is None

    def test_invalid_move_422(self, client):
        s = make_session(client)
        r = client.post(f"/api/sessions/{s['id']}/moves", json={"axis": "horizontal", "cycle_id": 9, "direction": "forward"})
        assert r.status_code == 422
        assert r.json()["code"] == "invalid_move"

    def test_invalid_axis_422(self, client):
        s = make_session(client)
        r = client.post(f"/api/sessions/{s['id']}/moves", json={"axis": "diagonal", "cycle_id": 0, "direction": "forward"})
        assert r.status_code == 422
        assert r.json()["code"] == "invalid_move"

    def test_shuffled_start_within_m_of_home(self, client, cross):
        from tileshift.space import distance, enumerate_space

        s = make_session(client, "cross-1-4-4", shuffle_moves=50, seed=9)
        graph = enumerate_space(cross)
        start_code = graph.codec.encode(tuple(s["current"]))
        assert distance(graph, graph.codes[0], start_code) <= 50

    def test_solved_flag_tracks_home(self, client):
        s = make_session(client, shuffle_moves=0)
        mv = {"axis": "vertical", "cycle_id": 0, "direction": "forward"}
        out = client.post(f"/api/sessions/{s['id']}/moves", json=mv).json()
        assert out["solved"] is False
        back = client.post(f"/api/sessions/{s['id']}/moves", json=mv).json()
        assert back["solved"] is True

    def test_move_log_replay_matches_current(self, client, chroma2):
        s = make_session(client, shuffle_moves=4, seed=2)
        rng = random.Random(0)
        moves = s["puzzle"]["moves"]
        cfg = tuple(s["current"])
        for _ in range(20):
            mv = rng.choice(moves)
            client.post(f"/api/sessions/{s['id']}/moves", json=mv)
            cfg = apply_move(cfg, MoveSpec(mv["axis"], mv["cycle_id"], mv["direction"]), chroma2.board)
        info = client.get(f"/api/sessions/{s['id']}").json()
        assert tuple(info["current"]) == cfg
        assert info["move_count"] == 20

    def test_reset_restores_start(self, client):
        s = make_session(client, "cross-1-4-4", shuffle_moves=10, seed=4)
        start = s["current"]
        client.post(f"/api/sessions/{s['id']}/moves", json=s["puzzle"]["moves"][0])
        info = client.post(f"/api/sessions/{s['id']}/reset").json()
        assert info["current"] == start
        assert info["move_count"] == 0
        assert info["explored"] == {"nodes": 1, "edges": 0}

    def test_shuffle_endpoint(self, client):
        s = make_session(client, "cross-1-4-4")
        info = client.post(f"/api/sessions/{s['id']}/shuffle", json={"m": 25, "seed": 77}).json()
        again = client.post(f"/api/sessions/{s['id']}/shuffle", json={"m": 25, "seed": 77}).json()
        assert info["current"] == again["current"]
        assert info["explored"]["nodes"] == 1

    def test_reveal_shuffle_path_seeds_graph(self, client):
        s = make_session(client, "cross-1-4-4", shuffle_moves=15, seed=3, reveal_shuffle_path=True)
        graph = client.get(f"/api/sessions/{s['id']}/graph").json()
        assert len(graph["nodes"]) > 1
        assert graph["nodes"][0]["depth_unknown"] is False  # home anchors the path
        assert len(graph["edges"]) >= len(graph["nodes"]) - 1


class TestSnapshotDeltaCoherence:
    def test_random_interleavings(self, client):
        s = make_session(client, "chroma2", shuffle_moves=5, seed=13)
        sid = s["id"]
        moves = s["puzzle"]["moves"]
        rng = random.Random(99)
        deltas = []
        snapshots = 0
        for _ in range(400):
            if rng.random() < 0.6:
                mv = rng.choice(moves)
                deltas.append(client.post(f"/api/sessions/{sid}/moves", json=mv).json())
            else:
                snapshots += 1
                snap = client.get(f"/api/sessions/{sid}/graph").json()
                nodes, edges, current = fold_deltas(s["current"], deltas)
                assert snap["seq"] == len(deltas)
                assert {n["id"]: n["colors"] for n in snap["nodes"]} == nodes
                assert {tuple(e) for e in snap["edges"]} == edges
                assert snap["current"] == current
        assert snapshots > 50


class TestSessionIsolation:
    def test_connected_fuzz(self, client):
        a = make_session(client, "chroma2", shuffle_moves=3, seed=1)
        b = make_session(client, "cross-1-4-4", shuffle_moves=3, seed=2)
        errors = []

        def hammer(sid, moves, count):
            try:
                rng = random.Random(sid)
                for _ in range(count):
                    mv = rng.choice(moves)
                    r = client.post(f"/api/sessions/{sid}/moves", json=mv)
                    assert r.status_code == 200
            except Exception as e:  # surface failures from worker threads
                errors.append(e)

        threads = [
            threading.Thread(target=hammer, args=(a["id"], a["puzzle"]["moves"], 60)),
            threading.Thread(target=hammer, args=(b["id"], b["puzzle"]["moves"], 60)),
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        info_a = client.get(f"/api/sessions/{a['id']}").json()
        info_b = client.get(f"/api/sessions/{b['id']}").json()
        assert info_a["move_count"] == 60
        assert info_b["move_count"] == 60
        assert len(info_a["current"]) == 4
        assert len(info_b["current"]) == 9


class TestExploredSubgraphAudit:
    def test_explored_is_subgraph_of_true_space(self, client, chroma2):
        from tileshift.space import enumerate_space

        true_graph = enumerate_space(chroma2, track_move_labels=False)
        true_edges = {
            frozenset((true_graph.configuration(a), true_graph.configuration(b))) for a, b in true_graph.edges
        }
        s = make_session(client, "chroma2", shuffle_moves=6, seed=33)
        rng = random.Random(5)
        for _ in range(80):
            client.post(f"/api/sessions/{s['id']}/moves", json=rng.choice(s["puzzle"]["moves"]))
        snap = client.get(f"/api/sessions/{s['id']}/graph").json()
        colors_by_id = {n["id"]: tuple(n["colors"]) for n in snap["nodes"]}
        for a, b in snap["edges"]:
            assert frozenset((colors_by_id[a], colors_by_id[b])) in true_edges


class TestHintEndpoint:
    def test_hint_on_solved(self, client):
        s = make_session(client, shuffle_moves=0)
        out = client.get(f"/api/sessions/{s['id']}/hint").json()
        assert out == {"move": None, "optimal": True, "solved": True}

    def test_optimal_hint(self, client):
        s = make_session(client, "cross-1-4-4", shuffle_moves=12, seed=6)
        out = client.get(f"/api/sessions/{s['id']}/hint").json()
        assert out["optimal"] is True
        assert out["move"]["axis"] in ("horizontal", "vertical")

    def test_strict_budget_409(self, client):
        s = make_session(client, "grid5-hole", shuffle_moves=60, seed=6)
        r = client.get(f"/api/sessions/{s['id']}/hint", params={"budget": 10, "strict": "true"})
        assert r.status_code == 409
        assert r.json()["code"] == "budget_exceeded"

    def test_greedy_hint_flagged(self, client):
        s = make_session(client, "grid5-hole", shuffle_moves=60, seed=6)
        out = client.get(f"/api/sessions/{s['id']}/hint", params={"budget": 10}).json()
        assert out["optimal"] is False
        assert out["move"] is not None


class TestPersistence:
    def test_sessions_survive_restart(self, tmp_path):
        state = tmp_path / "sessions.jsonl"
        with TestClient(create_app(state_file=str(state))) as client:
            s = make_session(client, "chroma2", shuffle_moves=4, seed=8)
            sid = s["id"]
            for mv in (s["puzzle"]["moves"][0], s["puzzle"]["moves"][2]):
                client.post(f"/api/sessions/{sid}/moves", json=mv)
            before_info = client.get(f"/api/sessions/{sid}").json()
            before_graph = client.get(f"/api/sessions/{sid}/graph").json()

        with TestClient(create_app(state_file=str(state))) as client:
            after_info = client.get(f"/api/sessions/{sid}").json()
            after_graph = client.get(f"/api/sessions/{sid}/graph").json()
        for key in ("current", "move_count", "solved", "explored"):
            assert after_info[key] == before_info[key]
        assert after_graph["nodes"] == before_graph["nodes"]
        assert after_graph["edges"] == before_graph["edges"]

    def test_registered_puzzles_survive(self, tmp_path):
        state = tmp_path / "sessions.jsonl"
        doc = puzzle_to_document(load_bundled("chroma2"))
        doc["name"] = "persisted"
        with TestClient(create_app(state_file=str(state))) as client:
            client.post("/api/puzzles", json=doc)
        with TestClient(create_app(state_file=str(state))) as client:
            assert client.get("/api/puzzles/persisted").status_code == 200

    def test_compaction_folds_resets(self, tmp_path):
        state = tmp_path / "sessions.jsonl"
        with TestClient(create_app(state_file=str(state))) as client:
            s = make_session(client, "chroma2", shuffle_moves=4, seed=8)
            for _ in range(5):
                client.post(f"/api/sessions/{s['id']}/moves", json=s["puzzle"]["moves"][0])
            client.post(f"/api/sessions/{s['id']}/reset")
        raw_before = state.read_text().strip().splitlines()
        with TestClient(create_app(state_file=str(state))):
            pass
        raw_after = state.read_text().strip().splitlines()
        assert len(raw_after) < len(raw_before)
        ops = [json.loads(line)["op"] for line in raw_after]
        assert ops == ["create"]


def _free_port():
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


@pytest.fixture(scope="module")
def live_server():
    import uvicorn

    port = _free_port()
    config = uvicorn.Config(create_app(), host="127.0.0.1", port=port, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{port}"
    for _ in range(200):
        try:
            httpx.get(f"{base}/api/puzzles", timeout=1)
            break
        except Exception:
            time.sleep(0.05)
    yield base
    server.should_exit = True
    thread.join(timeout=5)


def read_sse_events(url, want, timeout=10):
    events = []
    with httpx.stream("GET", url, timeout=timeout) as resp:
        assert resp.status_code == 200
        buf = ""
        for chunk in resp.iter_text():
            buf += chunk
            while "\n\n" in buf:
                block, buf = buf.split("\n\n", 1)
                if block.strip() and not block.startswith(":"):
                    events.append(block)
            if len(events) >= want:
                break
    return events[:want]


class TestEventStream:
    def test_replay_and_ids(self, live_server):
        r = httpx.post(f"{live_server}/api/sessions", json={"puzzle_id": "chroma2", "shuffle_moves": 3, "seed": 11})
        sid = r.json()["id"]
        mv = {"axis": "vertical", "cycle_id": 0, "direction": "forward"}
        httpx.post(f"{live_server}/api/sessions/{sid}/moves", json=mv)
        httpx.post(f"{live_server}/api/sessions/{sid}/moves", json=mv)
        events = read_sse_events(f"{live_server}/api/sessions/{sid}/events?since=0", want=3)
        assert events[0].startswith("retry:")
        first = json.loads(events[1].split("data: ", 1)[1])
        second = json.loads(events[2].split("data: ", 1)[1])
        assert (first["seq"], second["seq"]) == (1, 2)
        assert first["new_node"]["id"] == 1
        assert second["revisit"] == 0

    def test_resume_from_sequence_number(self, live_server):
        r = httpx.post(f"{live_server}/api/sessions", json={"puzzle_id": "chroma2", "shuffle_moves": 3, "seed": 11})
        sid = r.json()["id"]
        mv = {"axis": "vertical", "cycle_id": 0, "direction": "forward"}
        for _ in range(3):
            httpx.post(f"{live_server}/api/sessions/{sid}/moves", json=mv)
        events = read_sse_events(f"{live_server}/api/sessions/{sid}/events?since=2", want=2)
        delta = json.loads(events[1].split("data: ", 1)[1])
        assert delta["seq"] == 3

    def test_live_delivery(self, live_server):
        r = httpx.post(f"{live_server}/api/sessions", json={"puzzle_id": "chroma2", "shuffle_moves": 3, "seed": 11})
        sid = r.json()["id"]
        mv = {"axis": "horizontal", "cycle_id": 1, "direction": "forward"}

        def push_later():
            time.sleep(0.3)
            httpx.post(f"{live_server}/api/sessions/{sid}/moves", json=mv)

        t = threading.Thread(target=push_later)
        t.start()
        events = read_sse_events(f"{live_server}/api/sessions/{sid}/events", want=2)
        t.join()
        delta = json.loads(events[1].split("data: ", 1)[1])
        assert delta["move_echo"] == mv

    def test_reset_emits_epoch_event(self, live_server):
        r = httpx.post(f"{live_server}/api/sessions", json={"puzzle_id": "chroma2", "shuffle_moves": 3, "seed": 11})
        sid = r.json()["id"]
        mv = {"axis": "vertical", "cycle_id": 0, "direction": "forward"}
        httpx.post(f"{live_server}/api/sessions/{sid}/moves", json=mv)

        def reset_later():
            time.sleep(0.3)
            httpx.post(f"{live_server}/api/sessions/{sid}/reset")

        t = threading.Thread(target=reset_later)
        t.start()
        events = read_sse_events(f"{live_server}/api/sessions/{sid}/events", want=3)
        t.join()
        assert any(e.startswith("event: reset") for e in events)
