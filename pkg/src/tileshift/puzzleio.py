"""The puzzle document: a small JSON format tying board, colors, and home.

The schema file shipped at ``puzzles/puzzle.schema.json`` is the contract
shared with the HTTP service and the web client.  Structural problems
raise ParseError with location context; semantic breaches raise
ValidationError naming the broken invariant.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import NotAPermutation, ParseError, ValidationError
from .puzzle import Color, ColorScheme, Puzzle
from .surface import Polyomino, board_from_permutations, standard_pasting

_RGB_RE = re.compile(r"^#[0-9a-fA-F]{6}$")


def _schema() -> dict:
    global _SCHEMA_CACHE
    if _SCHEMA_CACHE is None:
        text = resources.files("tileshift").joinpath("puzzles/puzzle.schema.json").read_text("utf-8")
        _SCHEMA_CACHE = json.loads(text)
    return _SCHEMA_CACHE


_SCHEMA_CACHE: dict | None = None


def parse_document(text: str) -> dict:
    """JSON text -> validated document dict (structure only)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from e
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<document root>"
        raise ParseError(f"document does not match the puzzle schema at {where}: {e.message}")
    return doc


def document_to_puzzle(doc: dict) -> Puzzle:
    """Build a validated Puzzle from a parsed document."""
    squares = doc["squares"]
    n = len(squares)
    ids = sorted(sq["id"] for sq in squares)
    if ids != list(range(n)):
        raise ValidationError("square ids must be exactly 0..N-1", field="squares")
    placement: list[tuple[int, int]] = [(0, 0)] * n
    for sq in squares:
        placement[sq["id"]] = (int(sq["x"]), int(sq["y"]))
    if len(set(placement)) != n:
        raise ValidationError("square positions must be distinct", field="squares")

    pasting = doc["pasting"]
    if pasting == "standard":
        shape = Polyomino.from_cells(placement)
        for sid, cell in enumerate(placement):
            if shape.id_by_cell[cell] != sid:
                raise ValidationError(
                    "standard pasting requires row-major ids (bottom row first, left to right)",
                    field="squares",
                )
        board = standard_pasting(shape)
    else:
        try:
            board = board_from_permutations(n, pasting["right"], pasting["up"], placement)
        except NotAPermutation as e:
            raise ValidationError(f"pasting arrays must be permutations of 0..N-1: {e}", field="pasting") from e

    colors = []
    for c in doc["colors"]:
        if not _RGB_RE.match(c["rgb"]):
            raise ValidationError(f"rgb {c['rgb']!r} is not of the form #RRGGBB", field="colors")
        colors.append(Color(name=c["name"], rgb=c["rgb"], count=int(c["count"])))
    names = [c.name for c in colors]
    if len(set(names)) != len(names):
        raise ValidationError("color names must be unique", field="colors")
    scheme = ColorScheme(tuple(colors))
    if scheme.total != n:
        raise ValidationError(
            f"color counts sum to {scheme.total} but the board has {n} squares",
            field="colors",
        )

    home = doc["home"]
    if len(home) != n:
        raise ValidationError(f"home lists {len(home)} squares, board has {n}", field="home")
    tally = [0] * scheme.num_colors
    for c in home:
        if not 0 <= c < scheme.num_colors:
            raise ValidationError(f"home color index {c} out of range", field="home")
        tally[c] += 1
    if tuple(tally) != scheme.counts:
        raise ValidationError(
            f"home color counts {tuple(tally)} do not satisfy the scheme {scheme.counts}",
            field="home",
        )

    return Puzzle(board=board, scheme=scheme, home=tuple(home), name=doc["name"])


def puzzle_to_document(puzzle: Puzzle) -> dict:
    """Serialize with explicit pasting arrays (always reloadable verbatim)."""
    board = puzzle.board
    placement = board.placement or tuple((i, 0) for i in range(board.n))
    return {
        "name": puzzle.name,
        "squares": [{"id": i, "x": x, "y": y} for i, (x, y) in enumerate(placement)],
        "pasting": {"right": list(board.right), "up": list(board.up)},
        "colors": [{"name": c.name, "rgb": c.rgb, "count": c.count} for c in puzzle.scheme.colors],
        "home": list(puzzle.home),
    }


def loads_puzzle(text: str) -> Puzzle:
    return document_to_puzzle(parse_document(text))


def load_puzzle(path: str | Path) -> Puzzle:
    try:
        text = Path(path).read_text("utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    return loads_puzzle(text)


def save_puzzle(puzzle: Puzzle, path: str | Path) -> None:
    Path(path).write_text(json.dumps(puzzle_to_document(puzzle), indent=2) + "\n", "utf-8")


def bundled_names() -> list[str]:
    root = resources.files("tileshift").joinpath("puzzles")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json") and "schema" not in p.name)


def load_bundled(name: str) -> Puzzle:
    path = resources.files("tileshift").joinpath(f"puzzles/{name}.json")
    if not path.is_file():
        raise ParseError(f"no bundled puzzle named {name!r}; available: {', '.join(bundled_names())}")
    return loads_puzzle(path.read_text("utf-8"))
