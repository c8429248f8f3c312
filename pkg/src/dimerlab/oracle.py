"""Brute-force ground truth on small graphs.

Everything here is exponential and meant only as an oracle for the
determinant-based code: dimer covers, n-multiwebs, double-dimer loop
decompositions with enclosed areas, and Tait colorings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import NotTrivalent, TooLarge, ValidationError
from .graph import BipartiteGraph, PlanarBipartiteGraph

DEFAULT_CAP = 30

Multiweb = tuple[int, ...]


def _check_cap(graph: BipartiteGraph, cap: int) -> None:
    if graph.n_vertices > cap:
        raise TooLarge(f"{graph.n_vertices} vertices exceeds enumeration cap {cap}")


def enumerate_dimer_covers(graph: BipartiteGraph, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """All dimer covers as sorted tuples of edge indices, in sorted order.

    Backtracks on the lowest-index uncovered vertex.
    """
    _check_cap(graph, cap)
    nv = graph.n_vertices
    if nv % 2:
        return []
    covered = [False] * nv
    chosen: list[int] = []
    out: list[tuple[int, ...]] = []

    def rec(start: int) -> None:
        v = start
        while v < nv and covered[v]:
            v += 1
        if v == nv:
            out.append(tuple(sorted(chosen)))
            return
        covered[v] = True
        for e in sorted(graph.incident(v)):
            u = graph.other(e, v)
            if not covered[u]:
                covered[u] = True
                chosen.append(e)
                rec(v + 1)
                chosen.pop()
                covered[u] = False
        covered[v] = False

    rec(0)
    return sorted(out)


def has_perfect_matching(graph: BipartiteGraph) -> bool:
    """Augmenting-path matching test; no size cap."""
    match_w: dict[int, int] = {}

    def augment(b: int, seen: set[int]) -> bool:
        for e in graph.incident(b):
            w = graph.edges[e].white
            if w in seen:
                continue
            seen.add(w)
            if w not in match_w or augment(match_w[w], seen):
                match_w[w] = b
                return True
        return False

    if len(graph.blacks) != len(graph.whites):
        return False
    return all(augment(b, set()) for b in graph.blacks)


def enumerate_multiwebs(graph: BipartiteGraph, n: int, cap: int = DEFAULT_CAP) -> list[Multiweb]:
    """All multiplicity functions ``E -> {0..n}`` summing to ``n`` at every vertex.

    Returned as tuples indexed by edge, in sorted order.
    """
    if n < 1:
        raise ValidationError("multiweb order must be >= 1")
    _check_cap(graph, cap)
    ne = graph.n_edges
    last = [-1] * graph.n_vertices
    for i, e in enumerate(graph.edges):
        last[e.black] = max(last[e.black], i)
        last[e.white] = max(last[e.white], i)
    closes: list[list[int]] = [[] for _ in range(ne)]
    for v, i in enumerate(last):
        closes[i].append(v)
    residual = [n] * graph.n_vertices
    mult = [0] * ne
    out: list[Multiweb] = []

    def rec(i: int) -> None:
        if i == ne:
            out.append(tuple(mult))
            return
        e = graph.edges[i]
        hi = min(residual[e.black], residual[e.white])
        for k in range(hi + 1):
            residual[e.black] -= k
            residual[e.white] -= k
            if all(residual[v] == 0 for v in closes[i]):
                mult[i] = k
                rec(i + 1)
            residual[e.black] += k
            residual[e.white] += k
        mult[i] = 0

    rec(0)
    return sorted(out)


def cover_to_multiweb(graph: BipartiteGraph, cover: Sequence[int]) -> Multiweb:
    m = [0] * graph.n_edges
    for e in cover:
        m[e] += 1
    return tuple(m)


def check_multiweb(graph: BipartiteGraph, m: Sequence[int], n: int, partial: bool = False) -> None:
    """Raise unless ``m`` sums to ``n`` (or, if ``partial``, to 0 or ``n``) at every vertex."""
    from .errors import WrongOrder

    if len(m) != graph.n_edges:
        raise WrongOrder(f"multiweb has {len(m)} entries for {graph.n_edges} edges")
    sums = [0] * graph.n_vertices
    for e, k in zip(graph.edges, m):
        if not 0 <= k <= n:
            raise WrongOrder(f"multiplicity {k} outside 0..{n}")
        sums[e.black] += k
        sums[e.white] += k
    for v, s in enumerate(sums):
        if s != n and not (partial and s == 0):
            raise WrongOrder(f"vertex {graph.vertices[v].name!r} has multiplicity sum {s}, expected {n}")


# ---------------------------------------------------------------------------
# double dimers


@dataclass(frozen=True)
class LoopDecomposition:
    """Loops of a double-dimer cover.

    ``loops[i]`` is the cyclic edge sequence of a loop, starting at its
    lowest edge and leaving that edge's black end first; ``areas[i]`` is the
    number of bounded faces it encloses (``None`` on a torus).
    """

    loops: tuple[tuple[int, ...], ...]
    doubled: tuple[int, ...]
    areas: tuple[int | None, ...]
    enclosed: tuple[frozenset[int], ...] = ()

    @property
    def n_loops(self) -> int:
        return len(self.loops)


def trace_loops(graph: BipartiteGraph, edges: Sequence[int]) -> list[tuple[int, ...]]:
    """Split a set of edges forming vertex-disjoint cycles into cycles."""
    at: dict[int, list[int]] = {}
    for e in edges:
        for v in (graph.edges[e].black, graph.edges[e].white):
            at.setdefault(v, []).append(e)
    for v, es in at.items():
        if len(es) != 2:
            raise ValidationError(f"vertex {graph.vertices[v].name!r} has {len(es)} loop edges")
    remaining = set(edges)
    loops = []
    while remaining:
        start = min(remaining)
        loop = [start]
        remaining.discard(start)
        v = graph.edges[start].white
        prev = start
        while True:
            a, b = at[v]
            nxt = b if a == prev else a
            if nxt == start:
                break
            loop.append(nxt)
            remaining.discard(nxt)
            v = graph.other(nxt, v)
            prev = nxt
        loops.append(tuple(loop))
    return loops


def enclosed_faces(graph: PlanarBipartiteGraph, walls: Sequence[int]) -> frozenset[int]:
    """Faces not reachable from the outer face without crossing a wall edge."""
    wall = set(walls)
    seen = {graph.outer}
    queue = deque([graph.outer])
    while queue:
        f = queue.popleft()
        for d in graph.faces[f].darts:
            if d >> 1 in wall:
                continue
            g = graph.left_face(d ^ 1)
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return frozenset(range(len(graph.faces))) - seen


def decompose_double_dimer(graph: BipartiteGraph, m2: Sequence[int]) -> LoopDecomposition:
    ones = [e for e, k in enumerate(m2) if k == 1]
    doubled = tuple(e for e, k in enumerate(m2) if k == 2)
    loops = tuple(trace_loops(graph, ones))
    if isinstance(graph, PlanarBipartiteGraph):
        enc = tuple(enclosed_faces(graph, loop) for loop in loops)
        areas = tuple(len(x) for x in enc)
    else:
        enc = ()
        areas = tuple(None for _ in loops)
    return LoopDecomposition(loops, doubled, areas, enc)


def double_dimer_measure(graph: BipartiteGraph, cap: int = DEFAULT_CAP) -> list[tuple[Multiweb, int]]:
    """Double-dimer covers with their weights ``2**(number of loops)``.

    The total weight is checked against the squared number of dimer covers.
    """
    out = []
    for m2 in enumerate_multiwebs(graph, 2, cap):
        ones = [e for e, k in enumerate(m2) if k == 1]
        out.append((m2, 2 ** len(trace_loops(graph, ones))))
    n_covers = len(enumerate_dimer_covers(graph, cap))
    total = sum(w for _, w in out)
    if total != n_covers**2:
        raise AssertionError(f"double-dimer weights sum to {total}, expected {n_covers ** 2}")
    return out


def superpose(graph: BipartiteGraph, m: Sequence[int], m2: Sequence[int]) -> Multiweb:
    a, b = cover_to_multiweb(graph, m), cover_to_multiweb(graph, m2)
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Tait colorings


def tait_colorings(web, m: Sequence[int] | None = None) -> int:
    """Number of proper 3-edge-colorings of a trivalent web.

    ``web`` is either a graph together with a multiweb ``m`` whose nonzero
    multiplicities are all 1, or a plain list of vertex pairs describing an
    abstract cubic multigraph.
    """
    if m is not None:
        if any(k not in (0, 1) for k in m):
            raise NotTrivalent("web has an edge of multiplicity > 1")
        pairs = [(web.edges[e].black, web.edges[e].white) for e, k in enumerate(m) if k]
    else:
        pairs = [tuple(p) for p in web]
    deg: dict = {}
    for a, b in pairs:
        if a == b:
            raise NotTrivalent("web has a self-loop")
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if any(d != 3 for d in deg.values()):
        raise NotTrivalent("every vertex of the web must have degree 3")
    used: dict = {v: set() for v in deg}
    count = 0

    def rec(i: int) -> None:
        nonlocal count
        if i == len(pairs):
            count += 1
            return
        a, b = pairs[i]
        for c in (1, 2, 3):
            if c in used[a] or c in used[b]:
                continue
            used[a].add(c)
            used[b].add(c)
            rec(i + 1)
            used[a].discard(c)
            used[b].discard(c)

    rec(0)
    return count
