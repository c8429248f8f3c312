"""Standard graphs: grids, torus grids, annuli and the built-in test corpus."""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import OddTorusSide, OddVertexCount, ValidationError
from .graph import (
    BLACK,
    WHITE,
    Edge,
    PlanarBipartiteGraph,
    TorusGridGraph,
    Vertex,
    graph_from_positions,
)


def _color(x: int, y: int) -> str:
    return BLACK if (x + y) % 2 == 0 else WHITE


def make_grid(rows: int, cols: int) -> PlanarBipartiteGraph:
    """``rows x cols`` vertex grid.  Vertex ``"x,y"`` sits at ``(x, y)``.

    Horizontal edges are named ``h{x},{y}`` (from ``(x,y)`` to ``(x+1,y)``),
    vertical ones ``v{x},{y}``.  ``(0,0)`` is black.
    """
    if rows < 1 or cols < 1:
        raise ValidationError("grid sides must be positive")
    if rows * cols % 2:
        raise OddVertexCount(f"a {rows}x{cols} grid has an odd number of vertices")
    names = {(x, y): f"{x},{y}" for y in range(rows) for x in range(cols)}
    colored = [(names[x, y], _color(x, y)) for y in range(rows) for x in range(cols)]
    pairs, enames = [], []
    for y in range(rows):
        for x in range(cols - 1):
            pairs.append((names[x, y], names[x + 1, y]))
            enames.append(f"h{x},{y}")
    for x in range(cols):
        for y in range(rows - 1):
            pairs.append((names[x, y], names[x, y + 1]))
            enames.append(f"v{x},{y}")
    g = graph_from_positions(colored, pairs, {n: p for p, n in names.items()})
    return _rename_edges(g, enames)


def _rename_edges(g: PlanarBipartiteGraph, names, outer=None) -> PlanarBipartiteGraph:
    edges = [Edge(n, e.black, e.white, e.weight) for n, e in zip(names, g.edges)]
    return PlanarBipartiteGraph(
        g.vertices, edges, g.rotation, outer=g.outer if outer is None else outer, positions=g.positions
    )


def make_torus_grid(n: int) -> TorusGridGraph:
    """``n x n`` square grid on a torus (multi-edges appear for ``n = 2``)."""
    if n < 2 or n % 2:
        raise OddTorusSide(f"torus side must be even and >= 2, got {n}")
    index = {}
    vertices = []
    for y in range(n):
        for x in range(n):
            index[x, y] = len(vertices)
            vertices.append(Vertex(f"{x},{y}", _color(x, y)))
    edges, disp = [], []
    for y in range(n):
        for x in range(n):
            for kind, (dx, dy) in (("h", (1, 0)), ("v", (0, 1))):
                a = (x, y)
                b = ((x + dx) % n, (y + dy) % n)
                if _color(*a) == BLACK:
                    blk, wht, step = a, b, (dx, dy)
                else:
                    blk, wht, step = b, a, (-dx, -dy)
                edges.append(Edge(f"{kind}{x},{y}", index[blk], index[wht]))
                disp.append(step)
    positions = [(float(x), float(y)) for y in range(n) for x in range(n)]
    return TorusGridGraph(n, vertices, edges, positions, disp)


def make_c4(weights=None) -> PlanarBipartiteGraph:
    """The 4-cycle b1 w1 b2 w2; edge ``e{i}`` is the i-th edge in cyclic order."""
    colored = [("b1", BLACK), ("w1", WHITE), ("b2", BLACK), ("w2", WHITE)]
    pos = {"b1": (0, 0), "w1": (1, 0), "b2": (1, 1), "w2": (0, 1)}
    pairs = [("b1", "w1"), ("w1", "b2"), ("b2", "w2"), ("w2", "b1")]
    g = graph_from_positions(colored, pairs, pos, weights)
    return _rename_edges(g, ["e1", "e2", "e3", "e4"])


def make_k2(weight=1) -> PlanarBipartiteGraph:
    return graph_from_positions([("b", BLACK), ("w", WHITE)], [("b", "w")], {"b": (0, 0), "w": (1, 0)}, [weight])


def make_path(n: int) -> PlanarBipartiteGraph:
    """Path on ``n`` vertices (``n`` even) drawn on a line."""
    if n % 2:
        raise OddVertexCount("path must have an even number of vertices")
    colored = [(str(i), BLACK if i % 2 == 0 else WHITE) for i in range(n)]
    pairs = [(str(i), str(i + 1)) for i in range(n - 1)]
    return graph_from_positions(colored, pairs, {str(i): (i, 0) for i in range(n)})


def make_annulus(rings: int, around: int) -> PlanarBipartiteGraph:
    """Concentric ``around``-gons joined by spokes; vertex ``"r:i"``.

    The innermost polygon bounds the hole face (see :func:`ring_face`).
    """
    if around < 4 or around % 2:
        raise ValidationError("around must be even and >= 4")
    colored, pos, pairs = [], {}, []
    for r in range(rings):
        for i in range(around):
            name = f"{r}:{i}"
            colored.append((name, _color(r, i)))
            t = 2 * math.pi * i / around + math.pi / around
            pos[name] = ((r + 1) * math.cos(t), (r + 1) * math.sin(t))
    for r in range(rings):
        for i in range(around):
            pairs.append((f"{r}:{i}", f"{r}:{(i + 1) % around}"))
    for r in range(rings - 1):
        for i in range(around):
            pairs.append((f"{r}:{i}", f"{r + 1}:{i}"))
    return graph_from_positions(colored, pairs, pos)


def ring_face(g: PlanarBipartiteGraph, ring: int = 0) -> int:
    """Index of the bounded face whose boundary is the given annulus ring."""
    return find_face(g, [v.name for v in g.vertices if v.name.split(":")[0] == str(ring)])


def find_face(g: PlanarBipartiteGraph, vertex_names) -> int:
    """Bounded face whose boundary visits exactly the named vertices."""
    target = {g.vertex_index(n) for n in vertex_names}
    for f in g.bounded_faces:
        if set(g.face_vertices(f.index)) == target:
            return f.index
    raise ValidationError(f"no bounded face with vertices {sorted(vertex_names)}")


def grid_face(g: PlanarBipartiteGraph, x: int, y: int) -> int:
    """Unit square of a grid with lower-left corner ``(x, y)``."""
    return find_face(g, [f"{x},{y}", f"{x + 1},{y}", f"{x},{y + 1}", f"{x + 1},{y + 1}"])


def make_theta() -> PlanarBipartiteGraph:
    """Two vertices joined by three parallel edges."""
    vertices = [Vertex("b", BLACK), Vertex("w", WHITE)]
    edges = [Edge(f"e{i}", 0, 1) for i in range(3)]
    # drawn with b on the left: e0 arcs above, e1 straight, e2 arcs below
    rotation = [[2, 1, 0], [0, 1, 2]]
    g = PlanarBipartiteGraph(vertices, edges, rotation, outer=0)
    outer = next(f.index for f in g.faces if set(f.edges) == {0, 2})
    return PlanarBipartiteGraph(vertices, edges, rotation, outer=outer)


def _nested_squares(spokes) -> PlanarBipartiteGraph:
    inner = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
    colored, pos, pairs = [], {}, []
    for i, p in enumerate(inner):
        colored.append((f"i{i}", BLACK if i % 2 == 0 else WHITE))
        pos[f"i{i}"] = p
    for i, p in enumerate(inner):
        colored.append((f"o{i}", WHITE if i % 2 == 0 else BLACK))
        pos[f"o{i}"] = (2 * p[0], 2 * p[1])
    for ring in "io":
        for i in range(4):
            pairs.append((f"{ring}{i}", f"{ring}{(i + 1) % 4}"))
    for i in spokes:
        pairs.append((f"i{i}", f"o{i}"))
    return graph_from_positions(colored, pairs, pos)


def make_cube() -> PlanarBipartiteGraph:
    """Cube graph drawn as two nested squares with four spokes."""
    return _nested_squares(range(4))


def make_degenerate() -> PlanarBipartiteGraph:
    """Degenerate graph: two squares joined by two "diagonal" spokes.

    Both spokes run from an inner black corner to an outer white corner, so no
    dimer cover can use them.  Cycle space has dimension 3, the matching
    polytope only 2.
    """
    return _nested_squares((0, 2))


def builtin_corpus() -> dict[str, PlanarBipartiteGraph]:
    """Named planar corpus used by the self-tests."""
    return {
        "K2": make_k2(),
        "C4": make_c4(),
        "P4": make_path(4),
        "grid2x3": make_grid(2, 3),
        "grid2x4": make_grid(2, 4),
        "grid3x4": make_grid(3, 4),
        "grid4x4": make_grid(4, 4),
        "annular_C4": make_c4(),
        "annulus_w2": make_annulus(3, 4),
        "pants": make_grid(3, 4),
        "degenerate": make_degenerate(),
        "theta": make_theta(),
        "cube": make_cube(),
    }


def corpus_holes(name: str, g: PlanarBipartiteGraph) -> tuple[int, ...]:
    """Designated hole faces for the surface graphs of the corpus."""
    if name == "annular_C4":
        return (g.bounded_faces[0].index,)
    if name == "annulus_w2":
        return (ring_face(g, 0),)
    if name == "pants":
        return (grid_face(g, 0, 0), grid_face(g, 2, 0))
    return ()


def unit_weights(g) -> list[Fraction]:
    return [Fraction(1)] * g.n_edges
