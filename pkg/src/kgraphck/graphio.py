"""Graph and generator file formats.

A graph file is JSON with fields rank, vertices, edges, squares; edges are
[id, color, range, source] rows and squares are [e, f, f2, e2] rows.  Ids
are strings and may not contain '.', which the path-token syntax reserves
as the edge separator.  Path tokens are either a vertex id (the degree-0
path) or edge ids joined by '.'.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import DuplicateId, ParseError, UnknownColor
from .kgraph import Edge, KGraph, Path, SkeletonSpec, compose


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParseError(msg)


def spec_from_dict(doc: Any) -> SkeletonSpec:
    _require(isinstance(doc, dict), "graph document must be a JSON object")
    for key in ("rank", "vertices", "edges", "squares"):
        _require(key in doc, f"missing field {key!r}")
    rank = doc["rank"]
    _require(isinstance(rank, int) and rank >= 1, "rank must be an integer >= 1")

    vertices = doc["vertices"]
    _require(
        isinstance(vertices, list) and all(isinstance(v, str) for v in vertices),
        "vertices must be a list of strings",
    )
    seen: set[str] = set()
    for v in vertices:
        _require("." not in v, f"vertex id {v!r} contains '.'")
        if v in seen:
            raise DuplicateId(f"vertex {v!r} declared twice")
        seen.add(v)

    edges = []
    eids: set[str] = set()
    for row in doc["edges"]:
        _require(
            isinstance(row, list) and len(row) == 4,
            f"edge row {row!r} must be [id, color, range, source]",
        )
        eid, color, rng, src = row
        _require(isinstance(eid, str) and "." not in eid, f"bad edge id {eid!r}")
        if eid in eids or eid in seen:
            raise DuplicateId(f"id {eid!r} declared twice")
        eids.add(eid)
        if not isinstance(color, int) or not 1 <= color <= rank:
            raise UnknownColor(f"edge {eid!r} has color {color!r}, expected 1..{rank}")
        _require(rng in seen, f"edge {eid!r} has unknown range {rng!r}")
        _require(src in seen, f"edge {eid!r} has unknown source {src!r}")
        edges.append(Edge(eid, color, rng, src))

    squares = []
    for row in doc["squares"]:
        _require(
            isinstance(row, list) and len(row) == 4 and all(isinstance(x, str) for x in row),
            f"square row {row!r} must be [e, f, f2, e2]",
        )
        squares.append(tuple(row))

    return SkeletonSpec(rank, tuple(vertices), tuple(edges), tuple(squares))


def parse_graph(path: str) -> SkeletonSpec:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return spec_from_dict(doc)


def spec_to_dict(spec: SkeletonSpec) -> dict:
    """Canonical document form: sorted ids, squares oriented low-color first."""
    edges = {e.id: e for e in spec.edges}

    def orient(square: tuple[str, str, str, str]) -> tuple[str, str, str, str]:
        e, f, f2, e2 = square
        if edges[e].color > edges[f].color:
            return (f2, e2, e, f)
        return square

    return {
        "rank": spec.rank,
        "vertices": sorted(spec.vertices),
        "edges": [
            [e.id, e.color, e.range, e.source]
            for e in sorted(spec.edges, key=lambda e: e.id)
        ],
        "squares": sorted(list(orient(s)) for s in spec.squares),
    }


def emit_graph(spec: SkeletonSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2, sort_keys=True) + "\n"


# -- path tokens -----------------------------------------------------------------


def parse_path(graph: KGraph, token: str) -> Path:
    """A vertex id, or '.'-joined edge ids read range-to-source."""
    if token in graph.vertices:
        return graph.vertex_path(token)
    word = token.split(".")
    try:
        pieces = [graph.edge_path(eid) for eid in word]
    except KeyError as exc:
        raise ParseError(f"unknown edge {exc.args[0]!r} in path {token!r}") from exc
    out = pieces[0]
    for piece in pieces[1:]:
        out = compose(out, piece)
    return out


def parse_families(graph: KGraph, doc: Any):
    """Generator documents: {"families": [[token, ...], ...]}."""
    from .alignment import PathFamily

    _require(isinstance(doc, dict) and "families" in doc, "expected {'families': [...]}")
    out = []
    for row in doc["families"]:
        _require(isinstance(row, list) and row, f"family {row!r} must be a nonempty list")
        members = [parse_path(graph, tok) for tok in row]
        out.append(PathFamily(graph, members[0].range, members))
    return out
