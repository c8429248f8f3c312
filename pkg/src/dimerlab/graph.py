"""Bipartite graphs with an explicit combinatorial embedding.

A planar graph is stored as a rotation system: for every vertex, the
counterclockwise cyclic order of its incident edges.  Faces are traced from
the rotation with the "face on the left" convention, so bounded faces come
out counterclockwise and the outer face clockwise.

Edges are stored once, oriented black -> white.  A *dart* is an edge with a
direction and is encoded as an integer: ``2*e`` runs black -> white and
``2*e + 1`` runs white -> black.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadRotation,
    NonPlanarEmbedding,
    NotBipartite,
    NotConnected,
    ValidationError,
)

BLACK = "b"
WHITE = "w"


@dataclass(frozen=True)
class Vertex:
    name: str
    color: str


@dataclass(frozen=True)
class Edge:
    name: str
    black: int
    white: int
    weight: Fraction = Fraction(1)


@dataclass(frozen=True)
class Face:
    """A face given by its boundary walk of darts (face on the left)."""

    index: int
    darts: tuple[int, ...]
    is_outer: bool = False

    @property
    def length(self) -> int:
        return len(self.darts)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.darts)


def dart_edge(d: int) -> int:
    return d >> 1


def dart_is_black_to_white(d: int) -> bool:
    return d & 1 == 0


class BipartiteGraph:
    """Finite connected bipartite multigraph (no embedding required)."""

    torus = False

    def __init__(
        self,
        vertices: Sequence[Vertex],
        edges: Sequence[Edge],
        positions: Sequence[tuple[float, float]] | None = None,
    ):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.positions = tuple(positions) if positions is not None else None
        nv = len(self.vertices)
        for v in self.vertices:
            if v.color not in (BLACK, WHITE):
                raise ValidationError(f"vertex {v.name!r} has color {v.color!r}")
        names = [v.name for v in self.vertices]
        if len(set(names)) != nv:
            raise ValidationError("duplicate vertex names")
        enames = [e.name for e in self.edges]
        if len(set(enames)) != len(enames):
            raise ValidationError("duplicate edge names")
        self._vindex = {n: i for i, n in enumerate(names)}
        self._eindex = {n: i for i, n in enumerate(enames)}
        inc: list[list[int]] = [[] for _ in range(nv)]
        for i, e in enumerate(self.edges):
            if not (0 <= e.black < nv and 0 <= e.white < nv):
                raise ValidationError(f"edge {e.name!r} has an unknown endpoint")
            if e.black == e.white:
                raise NotBipartite(f"edge {e.name!r} is a self-loop")
            if self.vertices[e.black].color != BLACK or self.vertices[e.white].color != WHITE:
                raise NotBipartite(f"edge {e.name!r} does not join a black vertex to a white vertex")
            if e.weight <= 0:
                raise ValidationError(f"edge {e.name!r} has non-positive weight {e.weight}")
            inc[e.black].append(i)
            inc[e.white].append(i)
        self._incident = tuple(tuple(x) for x in inc)
        self.blacks = tuple(i for i, v in enumerate(self.vertices) if v.color == BLACK)
        self.whites = tuple(i for i, v in enumerate(self.vertices) if v.color == WHITE)
        if nv and not self._is_connected():
            raise NotConnected("graph is not connected")

    # -- basic queries -------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> tuple[int, ...]:
        """Incident edges of ``v`` (in counterclockwise order when embedded)."""
        return self._incident[v]

    def other(self, e: int, v: int) -> int:
        edge = self.edges[e]
        return edge.white if v == edge.black else edge.black

    def vertex_index(self, name: str) -> int:
        return self._vindex[name]

    def edge_index(self, name: str) -> int:
        return self._eindex[name]

    def tail(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.black if d & 1 == 0 else e.white

    def head(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.white if d & 1 == 0 else e.black

    def weights(self) -> tuple[Fraction, ...]:
        return tuple(e.weight for e in self.edges)

    def _is_connected(self) -> bool:
        seen = {0}
        todo = [0]
        while todo:
            v = todo.pop()
            for e in self._incident[v]:
                u = self.other(e, v)
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return len(seen) == self.n_vertices

    def __repr__(self) -> str:
        return f"{type(self).__name__}(V={self.n_vertices}, E={self.n_edges})"


class PlanarBipartiteGraph(BipartiteGraph):
    """Bipartite graph embedded in the plane through a rotation system.

    ``rotation[v]`` lists the edges at ``v`` in counterclockwise order.  The
    outer face is chosen, in order of precedence, by the explicit ``outer``
    face index, by negative signed area when ``positions`` are known, or as the
    longest face (ties: smallest contained edge index, then face index).
    """

    def __init__(
        self,
        vertices: Sequence[Vertex],
        edges: Sequence[Edge],
        rotation: Sequence[Sequence[int]],
        outer: int | None = None,
        positions: Sequence[tuple[float, float]] | None = None,
    ):
        super().__init__(vertices, edges, positions)
        if len(rotation) != self.n_vertices:
            raise BadRotation("rotation must list every vertex")
        rot = []
        for v, order in enumerate(rotation):
            order = tuple(order)
            if sorted(order) != sorted(self._incident[v]):
                raise BadRotation(
                    f"rotation at {self.vertices[v].name!r} does not list exactly its incident edges"
                )
            rot.append(order)
        self.rotation = tuple(rot)
        self._incident = self.rotation
        self._pos_in_rot = [{e: i for i, e in enumerate(r)} for r in self.rotation]
        walks = self._trace_faces()
        if self.n_vertices - self.n_edges + len(walks) != 2:
            raise NonPlanarEmbedding(
                f"Euler check failed: V - E + F = {self.n_vertices - self.n_edges + len(walks)}"
            )
        if outer is None:
            outer = self._choose_outer(walks)
        elif not 0 <= outer < len(walks):
            raise ValidationError(f"outer face index {outer} out of range")
        self.faces = tuple(Face(i, w, i == outer) for i, w in enumerate(walks))
        self.outer = outer
        left = [0] * (2 * self.n_edges)
        for f in self.faces:
            for d in f.darts:
                left[d] = f.index
        self._left_face = tuple(left)

    def _next_dart(self, d: int) -> int:
        v = self.head(d)
        e = d >> 1
        rot = self.rotation[v]
        e2 = rot[self._pos_in_rot[v][e] - 1]
        return 2 * e2 + (0 if self.edges[e2].black == v else 1)

    def _trace_faces(self) -> list[tuple[int, ...]]:
        seen = [False] * (2 * self.n_edges)
        walks = []
        for start in range(2 * self.n_edges):
            if seen[start]:
                continue
            walk = []
            d = start
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = self._next_dart(d)
            if d != start:
                raise BadRotation("face tracing did not close up")
            walks.append(tuple(walk))
        return walks

    def _signed_area(self, walk: Sequence[int]) -> float:
        pts = [self.positions[self.tail(d)] for d in walk]
        return 0.5 * sum(
            pts[i - 1][0] * pts[i][1] - pts[i][0] * pts[i - 1][1] for i in range(len(pts))
        )

    def _choose_outer(self, walks: list[tuple[int, ...]]) -> int:
        if self.positions is not None and len(walks) > 1:
            areas = [self._signed_area(w) for w in walks]
            neg = [i for i, a in enumerate(areas) if a < -1e-12]
            if len(neg) == 1:
                return neg[0]
        return min(
            range(len(walks)),
            key=lambda i: (-len(walks[i]), min(d >> 1 for d in walks[i]), i),
        )

    # -- faces ---------------------------------------------------------
    @property
    def bounded_faces(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if not f.is_outer)

    def left_face(self, d: int) -> int:
        return self._left_face[d]

    def edge_faces(self, e: int) -> tuple[int, int]:
        """Faces on the left of the black->white and white->black darts of ``e``."""
        return self._left_face[2 * e], self._left_face[2 * e + 1]

    def face_vertices(self, f: int) -> tuple[int, ...]:
        return tuple(self.tail(d) for d in self.faces[f].darts)


class TorusGridGraph(BipartiteGraph):
    """Square grid on an ``n x n`` torus; usable only by enumeration code.

    ``displacement[e]`` is the lattice step from the black to the white end of
    edge ``e`` in the universal cover.
    """

    torus = True

    def __init__(self, n, vertices, edges, positions, displacement):
        super().__init__(vertices, edges, positions)
        self.n = n
        self.displacement = tuple(displacement)


# ---------------------------------------------------------------------------
# constructors


def rotation_from_positions(
    n_vertices: int, edges: Sequence[Edge], positions: Sequence[tuple[float, float]]
) -> list[list[int]]:
    """Counterclockwise rotation of a straight-line drawing."""
    rot: list[list[tuple[float, int]]] = [[] for _ in range(n_vertices)]
    for i, e in enumerate(edges):
        for a, b in ((e.black, e.white), (e.white, e.black)):
            dx = positions[b][0] - positions[a][0]
            dy = positions[b][1] - positions[a][1]
            rot[a].append((math.atan2(dy, dx), i))
    return [[i for _, i in sorted(r)] for r in rot]


def graph_from_positions(
    colored: Sequence[tuple[str, str]],
    edge_pairs: Sequence[tuple[str, str]],
    positions: Mapping[str, tuple[float, float]],
    weights: Sequence | None = None,
    outer: int | None = None,
) -> PlanarBipartiteGraph:
    """Build a planar graph from a straight-line drawing.

    ``colored`` is a list of ``(name, color)``; each pair in ``edge_pairs``
    may be given in either order.  Edge ``i`` is named ``e{i}``.
    """
    vertices = [Vertex(n, c) for n, c in colored]
    index = {v.name: i for i, v in enumerate(vertices)}
    edges = []
    for i, (a, b) in enumerate(edge_pairs):
        ia, ib = index[a], index[b]
        if vertices[ia].color == WHITE:
            ia, ib = ib, ia
        w = Fraction(weights[i]) if weights is not None else Fraction(1)
        edges.append(Edge(f"e{i}", ia, ib, w))
    pos = [tuple(map(float, positions[v.name])) for v in vertices]
    rot = rotation_from_positions(len(vertices), edges, pos)
    return PlanarBipartiteGraph(vertices, edges, rot, outer=outer, positions=pos)


def with_weights(graph: PlanarBipartiteGraph, weights: Iterable) -> PlanarBipartiteGraph:
    """Copy of ``graph`` with new edge weights (same embedding and faces)."""
    edges = [Edge(e.name, e.black, e.white, Fraction(w)) for e, w in zip(graph.edges, weights)]
    return PlanarBipartiteGraph(
        graph.vertices, edges, graph.rotation, outer=graph.outer, positions=graph.positions
    )


# ---------------------------------------------------------------------------
# cycle space and gauge bookkeeping


def cycle_dimension(graph: BipartiteGraph) -> int:
    return graph.n_edges - graph.n_vertices + 1


def spanning_tree(graph: BipartiteGraph) -> tuple[int, ...]:
    """Breadth-first spanning tree from vertex 0, lowest edge index first."""
    seen = {0}
    tree = []
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e in sorted(graph.incident(v)):
            u = graph.other(e, v)
            if u not in seen:
                seen.add(u)
                tree.append(e)
                queue.append(u)
    return tuple(sorted(tree))


def face_schedule(
    graph: PlanarBipartiteGraph, tree: Sequence[int] | None = None
) -> list[tuple[int, int]]:
    """Order in which bounded-face constraints fix the non-tree edges.

    The duals of the non-tree edges form a spanning tree of the dual graph.
    Rooting it at the outer face and visiting faces deepest first, each face
    has exactly one undetermined edge when reached: the one towards its dual
    parent.  Returns ``[(face, edge), ...]`` in that order.
    """
    if tree is None:
        tree = spanning_tree(graph)
    in_tree = set(tree)
    adj: dict[int, list[tuple[int, int]]] = {f.index: [] for f in graph.faces}
    for e in range(graph.n_edges):
        if e in in_tree:
            continue
        f1, f2 = graph.edge_faces(e)
        adj[f1].append((e, f2))
        adj[f2].append((e, f1))
    depth = {graph.outer: 0}
    parent_edge: dict[int, int] = {}
    order = []
    queue = deque([graph.outer])
    while queue:
        f = queue.popleft()
        for e, g in sorted(adj[f]):
            if g not in depth:
                depth[g] = depth[f] + 1
                parent_edge[g] = e
                order.append(g)
                queue.append(g)
    if len(depth) != len(graph.faces):
        raise NonPlanarEmbedding("dual of the cotree is not a spanning tree")
    order.sort(key=lambda f: (-depth[f], f))
    return [(f, parent_edge[f]) for f in order]


def doubled_edges(face: Face) -> set[int]:
    """Edges traversed in both directions by a face walk (bridges, pendants)."""
    seen: dict[int, int] = {}
    for d in face.darts:
        seen[d >> 1] = seen.get(d >> 1, 0) + 1
    return {e for e, c in seen.items() if c == 2}


def unused_edges(graph: BipartiteGraph) -> set[int]:
    """Edges contained in no dimer cover (found by enumeration)."""
    from .oracle import enumerate_dimer_covers
    from .errors import NoPerfectMatching

    covers = enumerate_dimer_covers(graph)
    if not covers:
        raise NoPerfectMatching("graph has no dimer cover")
    used = set().union(*map(set, covers))
    return set(range(graph.n_edges)) - used


@dataclass(frozen=True)
class NondegeneracyReport:
    nondegenerate: bool
    rank: int
    cycle_dimension: int
    unused_edges: frozenset[int]

    def __bool__(self) -> bool:
        return self.nondegenerate


def check_nondegenerate(graph: BipartiteGraph) -> NondegeneracyReport:
    """Compare dim of the matching polytope with the cycle-space dimension.

    The polytope dimension is the rank of ``{f_m - f_m0}`` over all covers.
    """
    from .exact import rank_rational
    from .oracle import enumerate_dimer_covers
    from .errors import NoPerfectMatching

    covers = enumerate_dimer_covers(graph)
    if not covers:
        raise NoPerfectMatching("graph has no dimer cover")
    base = set(covers[0])
    rows = []
    for m in covers[1:]:
        ms = set(m)
        rows.append([(e in ms) - (e in base) for e in range(graph.n_edges)])
    rank = rank_rational(rows) if rows else 0
    d = cycle_dimension(graph)
    used = set().union(*map(set, covers))
    unused = frozenset(set(range(graph.n_edges)) - used)
    return NondegeneracyReport(rank == d, rank, d, unused)
