"""Text graph format and JSON helpers.

Graph files look like::

    dimergraph v1
    v b1 b
    v w1 w
    e e1 b1 w1 3/2
    r b1 e1
    r w1 e1
    outer 0

Blank lines and ``#`` comments are ignored.  Weights are exact: ``p/q``,
integers and decimals are all read without rounding.
"""

from __future__ import annotations

import json
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from .errors import BadRotation, GraphFormatError, NotBipartite
from .graph import BLACK, WHITE, Edge, PlanarBipartiteGraph, Vertex

HEADER = "dimergraph v1"


def parse_rational(text: str) -> Fraction:
    """Exact rational from ``p/q``, an integer or a decimal string."""
    text = str(text).strip()
    try:
        if "/" in text:
            p, q = text.split("/")
            return Fraction(int(p), int(q))
        return Fraction(Decimal(text))
    except (ValueError, ZeroDivisionError, InvalidOperation):
        raise GraphFormatError(f"not an exact rational: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_json(x) -> dict:
    """``{"exact": "p/q", "decimal": float}``."""
    x = Fraction(x)
    return {"exact": format_rational(x), "decimal": float(x)}


def parse_graph(text: str) -> PlanarBipartiteGraph:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    if not lines or " ".join(lines[0]) != HEADER:
        raise GraphFormatError(f"missing header line {HEADER!r}")
    vertices: list[Vertex] = []
    vindex: dict[str, int] = {}
    edges: list[Edge] = []
    eindex: dict[str, int] = {}
    rot: dict[str, list[str]] = {}
    outer = None
    for lineno, tok in enumerate(lines[1:], start=2):
        kind = tok[0]
        if kind == "v":
            if len(tok) != 3 or tok[2] not in (BLACK, WHITE):
                raise GraphFormatError(f"line {lineno}: expected 'v <id> <b|w>'")
            if tok[1] in vindex:
                raise GraphFormatError(f"line {lineno}: duplicate vertex {tok[1]!r}")
            vindex[tok[1]] = len(vertices)
            vertices.append(Vertex(tok[1], tok[2]))
        elif kind == "e":
            if len(tok) not in (4, 5):
                raise GraphFormatError(f"line {lineno}: expected 'e <id> <black> <white> [weight]'")
            name, b, w = tok[1:4]
            if name in eindex:
                raise GraphFormatError(f"line {lineno}: duplicate edge {name!r}")
            for v in (b, w):
                if v not in vindex:
                    raise GraphFormatError(f"line {lineno}: unknown vertex {v!r}")
            if vertices[vindex[b]].color != BLACK or vertices[vindex[w]].color != WHITE:
                raise NotBipartite(f"line {lineno}: edge {name!r} must join a black vertex to a white vertex")
            weight = parse_rational(tok[4]) if len(tok) == 5 else Fraction(1)
            eindex[name] = len(edges)
            edges.append(Edge(name, vindex[b], vindex[w], weight))
        elif kind == "r":
            if len(tok) < 2 or tok[1] not in vindex:
                raise GraphFormatError(f"line {lineno}: rotation for unknown vertex")
            if tok[1] in rot:
                raise GraphFormatError(f"line {lineno}: duplicate rotation for {tok[1]!r}")
            rot[tok[1]] = tok[2:]
        elif kind == "outer":
            if len(tok) != 2 or not tok[1].isdigit():
                raise GraphFormatError(f"line {lineno}: expected 'outer <face-index>'")
            outer = int(tok[1])
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {kind!r}")
    rotation = []
    for v in vertices:
        names = rot.get(v.name)
        if names is None:
            raise BadRotation(f"no rotation given for vertex {v.name!r}")
        try:
            rotation.append([eindex[n] for n in names])
        except KeyError as exc:
            raise BadRotation(f"rotation of {v.name!r} names unknown edge {exc.args[0]!r}") from None
    return PlanarBipartiteGraph(vertices, edges, rotation, outer=outer)


def read_graph(path) -> PlanarBipartiteGraph:
    return parse_graph(Path(path).read_text())


def format_graph(graph: PlanarBipartiteGraph) -> str:
    out = [HEADER]
    for v in graph.vertices:
        out.append(f"v {v.name} {v.color}")
    for e in graph.edges:
        b, w = graph.vertices[e.black].name, graph.vertices[e.white].name
        weight = "" if e.weight == 1 else " " + format_rational(e.weight)
        out.append(f"e {e.name} {b} {w}{weight}")
    for v, order in zip(graph.vertices, graph.rotation):
        out.append(" ".join(["r", v.name] + [graph.edges[e].name for e in order]))
    out.append(f"outer {graph.outer}")
    return "\n".join(out) + "\n"


def write_graph(graph: PlanarBipartiteGraph, path) -> None:
    Path(path).write_text(format_graph(graph))


def read_weights(path, graph) -> list[Fraction]:
    """JSON object ``{edge-id: weight}``; unlisted edges keep their weight."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise GraphFormatError("weights file must hold a JSON object")
    w = list(graph.weights())
    for name, value in data.items():
        try:
            e = graph.edge_index(name)
        except KeyError:
            raise GraphFormatError(f"weights file names unknown edge {name!r}") from None
        w[e] = parse_rational(value)
    return w


def read_matrix_connection(path, graph, n: int):
    """JSON object ``{edge-id: n x n matrix}``; unlisted edges carry the identity."""
    from .multiweb import MatrixLocalSystem

    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise GraphFormatError("connection file must hold a JSON object")
    mats = [None] * graph.n_edges
    for name, m in data.items():
        try:
            e = graph.edge_index(name)
        except KeyError:
            raise GraphFormatError(f"connection names unknown edge {name!r}") from None
        if len(m) != n or any(len(r) != n for r in m):
            raise GraphFormatError(f"matrix for edge {name!r} is not {n}x{n}")
        mats[e] = [[parse_rational(x) for x in r] for r in m]
    return MatrixLocalSystem.from_partial(graph, n, mats)
