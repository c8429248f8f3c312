"""SL_3 skein reduction of 3-webs drawn on a fixed planar bipartite graph.

A web here is a multiplicity vector whose vertex sums are 0 or 3.  Its
trivalent vertices are joined by chains of edges with multiplicities
alternating 1, 2, ..., 1; such a chain plays the role of a single web edge.
The moves never leave the graph: deleting a chain sets it to 0, and joining
two chains through a vertex flips multiplicities 1 <-> 2 along one of them.

Moves and their magnitudes:

* a multiplicity-3 edge is removed (factor 1),
* a contractible loop is removed (factor 3),
* a contractible bigon is collapsed onto one of its sides (factor 2),
* a contractible square is replaced by its two resolutions (factor 1 each).

The sign of each coefficient is ``sigma(W) sigma(W')`` where ``sigma`` is
the sign of the trace at the identity connection, which absorbs the sign
conventions of the coloring trace.  A face is contractible when the region
it bounds (for the web component on its own) contains neither a hole face
nor the outer face.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import NonTermination
from .graph import PlanarBipartiteGraph
from .multiweb import MatrixLocalSystem, _components, web_traces
from .oracle import check_multiweb

STEP_CAP = 10_000

LOOP, BIGON, SQUARE, TRIPLE = "loop", "bigon", "square", "triple"
FACTORS = {TRIPLE: 1, LOOP: 3, BIGON: 2, SQUARE: 1}


@dataclass(frozen=True)
class Chain:
    """Maximal path between trivalent vertices (``ends = ()`` for a closed loop)."""

    edges: tuple[int, ...]
    ends: tuple[int, ...]


@dataclass(frozen=True)
class WebFace:
    component: tuple[int, ...]
    faces: frozenset[int]
    chains: tuple[Chain, ...]
    trivalent: frozenset[int]
    contractible: bool
    simple: bool


@dataclass(frozen=True)
class Move:
    kind: str
    face: WebFace | None
    results: tuple[tuple[tuple[int, ...], int], ...]


def _web_degree(graph, m) -> list[int]:
    deg = [0] * graph.n_vertices
    for e, k in enumerate(m):
        if k:
            deg[graph.edges[e].black] += 1
            deg[graph.edges[e].white] += 1
    return deg


def chains(graph, m: Sequence[int], comp: Sequence[int]) -> list[Chain]:
    deg = _web_degree(graph, m)
    in_comp = set(comp)
    tri = sorted({v for e in comp for v in (graph.edges[e].black, graph.edges[e].white) if deg[v] == 3})
    seen: set[int] = set()
    out = []

    def step(v, e):
        path = [e]
        u = graph.other(e, v)
        while deg[u] != 3:
            nxt = [f for f in graph.incident(u) if f in in_comp and f != path[-1] and m[f]]
            if not nxt:
                break
            path.append(nxt[0])
            u = graph.other(nxt[0], u)
        return path, u

    for t in tri:
        for e in graph.rotation[t]:
            if e in in_comp and e not in seen:
                path, u = step(t, e)
                seen |= set(path)
                out.append(Chain(tuple(path), (t, u)))
    rest = [e for e in comp if e not in seen]
    if rest and not tri:
        out.append(Chain(tuple(rest), ()))
    return out


def _regions(graph: PlanarBipartiteGraph, walls: set[int]) -> list[frozenset[int]]:
    """Faces of ``graph`` grouped into the regions cut out by the wall edges."""
    seen: set[int] = set()
    out = []
    for f0 in range(len(graph.faces)):
        if f0 in seen:
            continue
        region = {f0}
        queue = deque([f0])
        while queue:
            f = queue.popleft()
            for d in graph.faces[f].darts:
                if d >> 1 in walls:
                    continue
                g = graph.left_face(d ^ 1)
                if g not in region:
                    region.add(g)
                    queue.append(g)
        seen |= region
        out.append(frozenset(region))
    return out


def web_faces(graph: PlanarBipartiteGraph, m: Sequence[int], holes: Sequence[int] = ()) -> list[WebFace]:
    """Faces of every web component drawn on its own, sorted by lowest graph face."""
    check_multiweb(graph, m, 3, partial=True)
    deg = _web_degree(graph, m)
    out = []
    for comp in _components(graph, m):
        cs = chains(graph, m, comp)
        walls = set(comp)
        for region in _regions(graph, walls):
            bounding = []
            simple = True
            for c in cs:
                touching = [sum(graph.left_face(2 * e + s) in region for s in (0, 1)) for e in c.edges]
                if 2 in touching:
                    simple = False
                if any(touching):
                    bounding.append(c)
            if not bounding:
                continue
            tri = frozenset(v for c in bounding for v in c.ends if deg[v] == 3)
            contractible = graph.outer not in region and not (region & set(holes))
            out.append(WebFace(comp, region, tuple(bounding), tri, contractible, simple))
    out.sort(key=lambda f: (min(f.faces), f.component))
    return out


def is_reduced(graph: PlanarBipartiteGraph, m: Sequence[int], holes: Sequence[int] = ()) -> bool:
    """No multiplicity-3 edge and no contractible face with 0, 2 or 4 trivalent vertices."""
    if any(k == 3 for k in m):
        return False
    return not any(f.contractible and len(f.trivalent) in (0, 2, 4) for f in web_faces(graph, m, holes))


def _set(m: list[int], edges, value=None):
    for e in edges:
        m[e] = 0 if value is None else 3 - m[e]


def _bigon(m, face: WebFace):
    a, b = sorted(face.chains, key=lambda c: min(c.edges))
    out = list(m)
    _set(out, b.edges)
    _set(out, a.edges, "flip")
    return [tuple(out)]


def _square(m, face: WebFace):
    c1 = min(face.chains, key=lambda c: min(c.edges))
    opposite = [c for c in face.chains if not set(c.ends) & set(c1.ends)]
    others = [c for c in face.chains if c is not c1 and c not in opposite]
    results = []
    for gone, kept in (([c1] + opposite, others), (others, [c1] + opposite)):
        out = list(m)
        for c in gone:
            _set(out, c.edges)
        for c in kept:
            _set(out, c.edges, "flip")
        results.append(tuple(out))
    return results


def _is_square(face: WebFace) -> bool:
    if len(face.chains) != 4 or len(face.trivalent) != 4:
        return False
    if any(len(set(c.ends)) != 2 for c in face.chains):
        return False
    c1 = face.chains[0]
    return sum(1 for c in face.chains if not set(c.ends) & set(c1.ends)) == 1


def _is_bigon(face: WebFace) -> bool:
    return (
        len(face.chains) == 2
        and len(face.trivalent) == 2
        and all(set(c.ends) == face.trivalent for c in face.chains)
    )


def identity_sign(graph, m: Sequence[int]) -> int:
    val = web_traces(graph, m, [MatrixLocalSystem.identity(graph, 3)])[0]
    if val == 0:
        raise ValueError("web has zero trace at the identity connection")
    return 1 if val > 0 else -1


def find_move(graph: PlanarBipartiteGraph, m: Sequence[int], holes: Sequence[int] = ()) -> Move | None:
    """First applicable move: triple edges, then faces in order of their lowest graph face."""
    triples = [e for e, k in enumerate(m) if k == 3]
    if triples:
        out = list(m)
        out[triples[0]] = 0
        return _signed(graph, m, TRIPLE, None, [tuple(out)])
    for face in web_faces(graph, m, holes):
        if not face.contractible or not face.simple:
            continue
        if not face.trivalent and len(face.chains) == 1 and not face.chains[0].ends:
            out = list(m)
            _set(out, face.component)
            return _signed(graph, m, LOOP, face, [tuple(out)])
        if _is_bigon(face):
            return _signed(graph, m, BIGON, face, _bigon(m, face))
        if _is_square(face):
            return _signed(graph, m, SQUARE, face, _square(m, face))
    return None


def _signed(graph, m, kind, face, webs) -> Move:
    s = identity_sign(graph, m)
    return Move(kind, face, tuple((w, FACTORS[kind] * s * identity_sign(graph, w)) for w in webs))


def skein_reduce(graph: PlanarBipartiteGraph, m: Sequence[int], holes: Sequence[int] = (), step_cap: int = STEP_CAP) -> list[tuple[tuple[int, ...], int]]:
    """``[(reduced web, coefficient), ...]`` with ``Tr(m) = sum coeff * Tr(web)`` for flat connections.

    Moves are applied depth first in the fixed order of :func:`find_move`;
    equal reduced webs are merged and zero coefficients dropped.
    """
    check_multiweb(graph, m, 3, partial=True)
    stack = [(tuple(m), 1)]
    out: dict[tuple[int, ...], int] = {}
    steps = 0
    while stack:
        steps += 1
        if steps > step_cap:
            raise NonTermination(f"skein reduction exceeded {step_cap} steps")
        w, c = stack.pop()
        move = find_move(graph, w, holes)
        if move is None:
            out[w] = out.get(w, 0) + c
            continue
        for w2, c2 in reversed(move.results):
            stack.append((w2, c * c2))
    return sorted((w, c) for w, c in out.items() if c)
