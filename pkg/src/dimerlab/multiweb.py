"""SL_n local systems, block Kasteleyn matrices and multiweb traces.

A matrix local system stores ``phi_bw`` for every edge (a map from the
fibre at the black end to the fibre at the white end); walking an edge from
white to black uses the inverse.  The block Kasteleyn matrix replaces each
signed scalar entry by ``+-phi_bw``; its determinant is the sum of multiweb
traces over all n-multiwebs.

Flat connections on an annulus or a pair of pants are built by cutting along
dual paths from the holes to the outer face, and lamination coefficients are
recovered from the determinant by exact interpolation in the traces.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ._parallel import pmap
from .errors import BadHoleFace, IllConditioned, Singular, ValidationError, WrongOrder
from .exact import det_float, det_rational, invert_rational, solve_overdetermined
from .graph import PlanarBipartiteGraph
from .kasteleyn import _require_planar, kasteleyn_signs
from .oracle import DEFAULT_CAP, check_multiweb, decompose_double_dimer, enumerate_multiwebs, trace_loops

Mat = tuple[tuple, ...]


# ---------------------------------------------------------------------------
# small matrices (exact Fractions or complex floats)


def _is_exact(M: Mat) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in M for x in row)


def eye(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat(rows) -> Mat:
    """Normalize a nested sequence to a tuple matrix (ints become Fractions)."""
    out = []
    for r in rows:
        out.append(tuple(Fraction(x) if isinstance(x, (int, Fraction, str)) else complex(x) for x in r))
    return tuple(out)


def mat_mul(A: Mat, B: Mat) -> Mat:
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_inv(A: Mat) -> Mat:
    if _is_exact(A):
        return tuple(map(tuple, invert_rational(A)))
    return tuple(tuple(complex(x) for x in r) for r in np.linalg.inv(np.asarray(A, dtype=complex)))


def mat_det(A: Mat):
    return det_rational(A) if _is_exact(A) else det_float(A)


def trace(A: Mat):
    return sum(A[i][i] for i in range(len(A)))


def minor(A: Mat, rows: Sequence[int], cols: Sequence[int]):
    sub = [[A[r][c] for c in cols] for r in rows]
    if len(sub) == 1:
        return sub[0][0]
    if len(sub) == 2:
        return sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
    return mat_det(sub)


def random_sl(n: int, rng: np.random.Generator, steps: int = 4) -> Mat:
    """Random element of SL_n with small rational entries.

    A product of elementary matrices with rational off-diagonal entries and
    rational diagonal scalings ``diag(.., t, .., 1/t, ..)``.
    """
    M = eye(n)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        p = int(rng.integers(-3, 4)) or 1
        q = int(rng.integers(1, 4))
        E = [list(r) for r in eye(n)]
        if rng.random() < 0.5:
            E[i][j] = Fraction(p, q)
        else:
            t = Fraction(p, q)
            E[i][i], E[j][j] = t, 1 / t
        M = mat_mul(M, tuple(map(tuple, E)))
    return M


# ---------------------------------------------------------------------------
# local systems


@dataclass(frozen=True)
class MatrixLocalSystem:
    """``mats[e]`` is ``phi_bw`` for edge ``e``; every matrix has determinant 1."""

    n: int
    mats: tuple[Mat, ...]

    def __post_init__(self):
        if self.n not in (2, 3):
            raise WrongOrder(f"matrix local systems are supported for n = 2, 3 (got {self.n})")
        for e, M in enumerate(self.mats):
            if len(M) != self.n or any(len(r) != self.n for r in M):
                raise ValidationError(f"matrix on edge {e} is not {self.n}x{self.n}")
            d = mat_det(M)
            if (d != 1) if _is_exact(M) else abs(d - 1) > 1e-9:
                raise ValidationError(f"matrix on edge {e} has determinant {d}, not 1")
        object.__setattr__(self, "_inv", {})

    @property
    def exact(self) -> bool:
        return all(_is_exact(M) for M in self.mats)

    @classmethod
    def identity(cls, graph, n: int) -> "MatrixLocalSystem":
        return cls(n, tuple(eye(n) for _ in range(graph.n_edges)))

    @classmethod
    def from_partial(cls, graph, n: int, mats: Sequence) -> "MatrixLocalSystem":
        """``mats[e]`` may be ``None`` for the identity."""
        if len(mats) != graph.n_edges:
            raise ValidationError(f"expected {graph.n_edges} matrices, got {len(mats)}")
        return cls(n, tuple(eye(n) if M is None else mat(M) for M in mats))

    @classmethod
    def random(cls, graph, n: int, rng: np.random.Generator) -> "MatrixLocalSystem":
        return cls(n, tuple(random_sl(n, rng) for _ in range(graph.n_edges)))

    def inverse(self, e: int) -> Mat:
        inv = self._inv
        if e not in inv:
            inv[e] = mat_inv(self.mats[e])
        return inv[e]

    def transport(self, d: int) -> Mat:
        """Parallel transport along dart ``d`` (even darts run black to white)."""
        return self.mats[d >> 1] if d & 1 == 0 else self.inverse(d >> 1)

    def monodromy(self, darts: Sequence[int]) -> Mat:
        """Product of transports along a dart path, later darts on the left."""
        M = eye(self.n)
        for d in darts:
            M = mat_mul(self.transport(d), M)
        return M

    def to_json(self, graph) -> dict:
        from .formats import format_rational

        def fmt(x):
            return format_rational(x) if isinstance(x, Fraction) else [x.real, x.imag]

        return {graph.edges[e].name: [[fmt(x) for x in r] for r in M] for e, M in enumerate(self.mats)}


def face_monodromy(graph: PlanarBipartiteGraph, phi: MatrixLocalSystem, f: int) -> Mat:
    """Monodromy around face ``f`` along its boundary walk (counterclockwise for bounded faces)."""
    return phi.monodromy(graph.faces[f].darts)


def loop_darts(graph, loop: Sequence[int], start: int = 0, reverse: bool = False) -> list[int]:
    """Darts of a cyclic edge sequence, from position ``start``, optionally reversed."""
    edges = list(loop[start:]) + list(loop[:start])
    if reverse:
        edges = [edges[0]] + edges[:0:-1]
    if len(edges) == 1:
        raise ValidationError("a loop needs at least two edges")
    e0, e1 = graph.edges[edges[0]], graph.edges[edges[1]]
    v = e0.black if e0.white in (e1.black, e1.white) else e0.white
    darts = []
    for e in edges:
        edge = graph.edges[e]
        if v == edge.black:
            darts.append(2 * e)
            v = edge.white
        else:
            darts.append(2 * e + 1)
            v = edge.black
    return darts


# ---------------------------------------------------------------------------
# block Kasteleyn matrix


@dataclass(frozen=True)
class BlockKasteleynMatrix:
    """White x black array of n x n blocks ``sign_e * phi_bw`` (parallel edges add)."""

    n: int
    blocks: Mapping[tuple[int, int], Mat]
    whites: tuple[int, ...]
    blacks: tuple[int, ...]
    signs: tuple[int, ...]

    def flat(self) -> list[list]:
        n = self.n
        zero = Fraction(0) if all(_is_exact(B) for B in self.blocks.values()) else 0j
        size = n * len(self.whites)
        M = [[zero] * (n * len(self.blacks)) for _ in range(size)]
        for (i, j), B in self.blocks.items():
            for r in range(n):
                for c in range(n):
                    M[i * n + r][j * n + c] = B[r][c]
        return M

    def det(self):
        if len(self.whites) != len(self.blacks):
            return Fraction(0)
        M = self.flat()
        if all(_is_exact(B) for B in self.blocks.values()):
            return det_rational(M)
        return det_float(M)


def block_kasteleyn(graph: PlanarBipartiteGraph, phi: MatrixLocalSystem) -> BlockKasteleynMatrix:
    g = _require_planar(graph)
    if len(phi.mats) != g.n_edges:
        raise ValidationError("local system does not match the graph")
    signs = kasteleyn_signs(g)
    row = {w: i for i, w in enumerate(g.whites)}
    col = {b: j for j, b in enumerate(g.blacks)}
    blocks: dict[tuple[int, int], Mat] = {}
    for e, edge in enumerate(g.edges):
        key = (row[edge.white], col[edge.black])
        B = phi.mats[e] if signs[e] > 0 else tuple(tuple(-x for x in r) for r in phi.mats[e])
        if key in blocks:
            B = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(blocks[key], B))
        blocks[key] = B
    return BlockKasteleynMatrix(phi.n, blocks, g.whites, g.blacks, signs)


def block_det(graph: PlanarBipartiteGraph, phi: MatrixLocalSystem):
    return block_kasteleyn(graph, phi).det()


# ---------------------------------------------------------------------------
# traces


def _loop_trace(graph, phi: MatrixLocalSystem, m: Sequence[int], cache: dict | None = None):
    ones = [e for e, k in enumerate(m) if k == 1]
    out = Fraction(1) if phi.exact else 1.0
    for loop in trace_loops(graph, ones):
        if cache is not None and loop in cache:
            val = cache[loop]
        else:
            val = trace(phi.monodromy(loop_darts(graph, loop)))
            if cache is not None:
                cache[loop] = val
        out = out * val
    return out


def _perm_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def _components(graph, m: Sequence[int]) -> list[tuple[int, ...]]:
    parent = list(range(graph.n_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e, k in enumerate(m):
        if k:
            a, b = find(graph.edges[e].black), find(graph.edges[e].white)
            parent[a] = b
    comps: dict[int, list[int]] = {}
    for e, k in enumerate(m):
        if k:
            comps.setdefault(find(graph.edges[e].black), []).append(e)
    return [tuple(c) for c in sorted(comps.values())]


def _nonzero(v) -> bool:
    return bool(v.any()) if isinstance(v, np.ndarray) else v != 0


class _Factor:
    __slots__ = ("scope", "table")

    def __init__(self, scope: tuple, table: dict):
        self.scope = scope
        self.table = table


def _join(f: _Factor, g: _Factor) -> _Factor:
    shared = [v for v in f.scope if v in g.scope]
    extra = [v for v in g.scope if v not in f.scope]
    gi = [g.scope.index(v) for v in shared]
    ei = [g.scope.index(v) for v in extra]
    fi = [f.scope.index(v) for v in shared]
    index: dict = {}
    for a, val in g.table.items():
        index.setdefault(tuple(a[i] for i in gi), []).append((tuple(a[i] for i in ei), val))
    table: dict = {}
    for a, val in f.table.items():
        for rest, val2 in index.get(tuple(a[i] for i in fi), ()):
            key = a + rest
            table[key] = table.get(key, 0) + val * val2
    return _Factor(f.scope + tuple(extra), table)


def _sum_out(f: _Factor, var) -> _Factor:
    i = f.scope.index(var)
    table: dict = {}
    for a, val in f.table.items():
        key = a[:i] + a[i + 1:]
        table[key] = table.get(key, 0) + val
    return _Factor(f.scope[:i] + f.scope[i + 1:], {k: v for k, v in table.items() if _nonzero(v)})


def _contract(factors: list[_Factor]):
    """Sum-product over all variables, eliminating the cheapest variable first."""
    factors = list(factors)
    while True:
        variables = {v for f in factors for v in f.scope}
        if not variables:
            break

        def cost(v):
            scope = set()
            for f in factors:
                if v in f.scope:
                    scope |= set(f.scope)
            return (len(scope), v)

        v = min(variables, key=cost)
        touching = [f for f in factors if v in f.scope]
        factors = [f for f in factors if v not in f.scope]
        prod = touching[0]
        for f in touching[1:]:
            prod = _join(prod, f)
        factors.append(_sum_out(prod, v))
    out = 1
    for f in factors:
        out = out * f.table.get((), 0)
    return out


_COLORS = (0, 1, 2)


class _Batch:
    """Several local systems evaluated together.

    Exact systems are scaled edge by edge to integer matrices ``d_e phi_e``
    so the contraction runs on vectors of Python integers; the common
    denominator of a component is ``prod_e d_e^{m_e}``.
    """

    def __init__(self, phis: Sequence[MatrixLocalSystem]):
        self.phis = list(phis)
        self.exact = all(p.exact for p in self.phis)
        self.scale: list[list[int]] = []
        self.ints: list[list[Mat]] = []
        for p in self.phis:
            sc, ms = [], []
            for M in p.mats:
                if self.exact:
                    d = math.lcm(*(Fraction(x).denominator for r in M for x in r))
                    ms.append(tuple(tuple(int(x * d) for x in r) for r in M))
                else:
                    d = 1
                    ms.append(M)
                sc.append(d)
            self.scale.append(sc)
            self.ints.append(ms)

    def minor(self, e: int, S, T):
        vals = [minor(ms[e], S, T) for ms in self.ints]
        return np.array(vals, dtype=object if self.exact else complex)

    def finish(self, raw, comp, m) -> list:
        if not isinstance(raw, np.ndarray):
            raw = np.array([raw] * len(self.phis), dtype=object)
        if not self.exact:
            return [complex(x) for x in raw]
        out = []
        for k, x in enumerate(raw):
            den = 1
            for e in comp:
                den *= self.scale[k][e] ** m[e]
            out.append(Fraction(int(x), den))
        return out


def _component_trace(graph: PlanarBipartiteGraph, batch: _Batch, comp: Sequence[int], m: Sequence[int]) -> list:
    """Signed sum over half-edge colorings of one connected component."""
    domains = {e: list(itertools.combinations(_COLORS, m[e])) for e in comp}
    factors = []
    for e in comp:
        table = {}
        for si, S in enumerate(domains[e]):
            for ti, T in enumerate(domains[e]):
                val = batch.minor(e, S, T)
                if val.any():
                    table[(si, ti)] = val
        factors.append(_Factor((("S", e), ("T", e)), table))
    verts = sorted({graph.edges[e].black for e in comp} | {graph.edges[e].white for e in comp})
    in_comp = set(comp)
    for v in verts:
        white = graph.vertices[v].color == "w"
        # counterclockwise at black vertices, clockwise at white ones
        order = graph.rotation[v][::-1] if white else graph.rotation[v]
        es = [e for e in order if e in in_comp]
        side = "S" if white else "T"
        table = {}
        for choice in itertools.product(*(range(len(domains[e])) for e in es)):
            seq = [c for e, i in zip(es, choice) for c in domains[e][i]]
            if sorted(seq) == list(_COLORS):
                table[choice] = _perm_sign(seq)
        factors.append(_Factor(tuple((side, e) for e in es), table))
    return batch.finish(_contract(factors), comp, m)


def _coloring_traces(graph, batch: _Batch, m: Sequence[int], cache: dict | None = None) -> list:
    out = [Fraction(1) if batch.exact else 1.0 for _ in batch.phis]
    for comp in _components(graph, m):
        key = tuple((e, m[e]) for e in comp)
        if cache is not None and key in cache:
            vals = cache[key]
        else:
            vals = _component_trace(graph, batch, comp, m)
            if cache is not None:
                cache[key] = vals
        out = [a * b for a, b in zip(out, vals)]
    return out


def multiweb_trace(graph: PlanarBipartiteGraph, m: Sequence[int], phi: MatrixLocalSystem, n: int | None = None, cache: dict | None = None):
    """Trace of an n-multiweb under the local system ``phi``.

    n = 2: product over loops of the trace of the loop monodromy (doubled
    edges contribute ``det = 1``).  n = 3: signed sum over colorings of the
    half-edges by subsets of {1, 2, 3}, each edge weighted by the minor of
    ``phi_bw`` with rows the white-side colors and columns the black-side
    colors.  A vertex contributes the sign of the permutation of colors read
    counterclockwise around a black vertex and clockwise around a white one,
    the colors of a multiple edge taken in increasing order.
    """
    n = phi.n if n is None else n
    if n != phi.n:
        raise WrongOrder(f"multiweb order {n} does not match local system order {phi.n}")
    check_multiweb(graph, m, n)
    if n == 2:
        return _loop_trace(graph, phi, m, cache)
    return _coloring_traces(graph, _Batch([phi]), m, cache)[0]


def web_traces(graph: PlanarBipartiteGraph, m: Sequence[int], phis: Sequence[MatrixLocalSystem], partial: bool = True) -> list:
    """Trace of one web under several local systems.

    With ``partial`` the multiplicities may sum to 0 at some vertices; those
    vertices simply do not take part.
    """
    phis = list(phis)
    if not phis:
        return []
    n = phis[0].n
    check_multiweb(graph, m, n, partial=partial)
    if n == 2:
        return [_loop_trace(graph, phi, m) for phi in phis]
    return _coloring_traces(graph, _Batch(phis), m)


def trace_sums(graph: PlanarBipartiteGraph, phis: Sequence[MatrixLocalSystem], cap: int = DEFAULT_CAP, webs=None) -> list:
    """``sum_m Tr(phi_m)`` for each local system (all of the same order)."""
    phis = list(phis)
    if not phis:
        return []
    n = phis[0].n
    if any(p.n != n for p in phis):
        raise WrongOrder("local systems of different orders")
    webs = enumerate_multiwebs(graph, n, cap) if webs is None else webs
    for m in webs:
        check_multiweb(graph, m, n)
    if n == 2:
        out = []
        for phi in phis:
            cache: dict = {}
            total = Fraction(0) if phi.exact else 0.0
            for m in webs:
                total = total + _loop_trace(graph, phi, m, cache)
            out.append(total)
        return out
    batch = _Batch(phis)
    cache = {}
    totals = [Fraction(0) if batch.exact else 0.0 for _ in phis]
    for m in webs:
        totals = [a + b for a, b in zip(totals, _coloring_traces(graph, batch, m, cache))]
    return totals


def trace_sum(graph: PlanarBipartiteGraph, phi: MatrixLocalSystem, cap: int = DEFAULT_CAP, webs=None):
    return trace_sums(graph, [phi], cap, webs)[0]


@dataclass(frozen=True)
class SlnCheck:
    holds: bool
    det: object
    trace_sum: object
    sign: int


def _compare(d, s, sign, exact) -> bool:
    if exact:
        return d == sign * s
    return abs(d - sign * s) <= 1e-9 * max(1.0, abs(d))


def verify_sln_sums(graph: PlanarBipartiteGraph, phis: Sequence[MatrixLocalSystem], cap: int = DEFAULT_CAP, webs=None) -> list[SlnCheck]:
    """Compare ``det K~(phi)`` with the sum of multiweb traces, for each ``phi``.

    The relative sign of the two sides depends only on conventions, so it is
    read off at the identity connection and then required to hold exactly
    (rational input) or to relative accuracy 1e-9 (floating input).
    """
    g = _require_planar(graph)
    phis = list(phis)
    if not phis:
        return []
    n = phis[0].n
    webs = enumerate_multiwebs(g, n, cap) if webs is None else webs
    ident = MatrixLocalSystem.identity(g, n)
    exact = [p.exact for p in phis]
    exact_sums = trace_sums(g, [ident] + [p for p, x in zip(phis, exact) if x], cap, webs)
    float_phis = [p for p, x in zip(phis, exact) if not x]
    float_sums = iter(trace_sums(g, float_phis, cap, webs) if float_phis else [])
    d0, s0 = block_det(g, ident), exact_sums[0]
    rest = iter(exact_sums[1:])
    if abs(d0) != abs(s0):
        return [SlnCheck(False, d0, s0, 0) for _ in phis]
    sign = 1 if d0 == s0 else -1
    out = []
    for phi, x in zip(phis, exact):
        s = next(rest) if x else next(float_sums)
        d = block_det(g, phi)
        out.append(SlnCheck(_compare(d, s, sign, x), d, s, sign))
    return out


def verify_sln_sum(graph: PlanarBipartiteGraph, phi: MatrixLocalSystem, cap: int = DEFAULT_CAP, webs=None) -> SlnCheck:
    return verify_sln_sums(graph, [phi], cap, webs)[0]


# ---------------------------------------------------------------------------
# flat connections


def _dual_path(graph: PlanarBipartiteGraph, start: int, goal: int, avoid=frozenset()) -> list[int]:
    """Darts crossed by a shortest dual path; each dart has the current face on its left."""
    prev = {start: None}
    queue = [start]
    for f in queue:
        if f == goal:
            break
        for d in graph.faces[f].darts:
            g = graph.left_face(d ^ 1)
            if g == f or g in prev or (g in avoid and g != goal):
                continue
            prev[g] = (f, d)
            queue.append(g)
    if goal not in prev:
        raise BadHoleFace(f"no dual path from face {start} to face {goal}")
    darts = []
    f = goal
    while prev[f] is not None:
        f, d = prev[f]
        darts.append(d)
    return darts[::-1]


def _path_faces(graph, start: int, darts: Sequence[int]) -> set[int]:
    return {start} | {graph.left_face(d ^ 1) for d in darts}


def _cut(graph, n: int, cuts: Sequence[tuple[Sequence[int], Mat]]) -> MatrixLocalSystem:
    mats: list = [eye(n)] * graph.n_edges
    for darts, M in cuts:
        Minv = mat_inv(M)
        for d in darts:
            mats[d >> 1] = M if d & 1 == 0 else Minv
    return MatrixLocalSystem(n, tuple(mats))


def _check_hole(graph: PlanarBipartiteGraph, f: int) -> None:
    if not isinstance(f, (int, np.integer)) or not 0 <= f < len(graph.faces):
        raise BadHoleFace(f"no face with index {f!r}")


def flat_connection(graph: PlanarBipartiteGraph, holes: Sequence[int], mats: Sequence[Mat], n: int | None = None) -> MatrixLocalSystem:
    """Flat connection with monodromy conjugate to ``mats[i]`` around ``holes[i]``.

    Cuts run along dual paths ``holes[0] -> holes[1] -> ... -> outer face``;
    the cut leaving ``holes[i]`` carries ``mats[0] ... mats[i]``.  Each path
    avoids the outer face, the other holes and the faces of earlier paths, so
    every other bounded face sees a transport and its inverse.  The outer
    face gets the inverse of the full product.
    """
    g = _require_planar(graph)
    holes = list(holes)
    for h in holes:
        _check_hole(g, h)
    if len(set(holes)) != len(holes) or g.outer in holes:
        raise BadHoleFace("holes must be distinct bounded faces")
    mats = [mat(M) for M in mats]
    if len(mats) != len(holes):
        raise ValidationError("need one monodromy per hole")
    if n is None:
        if not mats:
            raise ValidationError("matrix size unknown without holes")
        n = len(mats[0])
    used: set[int] = set()
    cuts = []
    P = eye(n)
    for i, h in enumerate(holes):
        goal = holes[i + 1] if i + 1 < len(holes) else g.outer
        avoid = (used | set(holes) | {g.outer}) - {h, goal}
        darts = _dual_path(g, h, goal, avoid=avoid)
        used |= _path_faces(g, h, darts)
        P = mat_mul(P, mats[i])
        cuts.append((darts, P))
    return _cut(g, n, cuts)


def flat_connection_annulus(graph: PlanarBipartiteGraph, hole: int, A: Mat) -> MatrixLocalSystem:
    """Flat connection with monodromy conjugate to ``A`` around face ``hole``.

    ``A`` sits on the edges crossed by a dual path from the hole to the outer
    face.  Choosing the outer face itself as the hole gives the identity
    connection: the surface is then a disk.
    """
    g = _require_planar(graph)
    _check_hole(g, hole)
    A = mat(A)
    if hole == g.outer:
        return MatrixLocalSystem.identity(g, len(A))
    return flat_connection(g, [hole], [A])


def flat_connection_pants(graph: PlanarBipartiteGraph, hole1: int, hole2: int, A: Mat, B: Mat) -> MatrixLocalSystem:
    """Flat connection with monodromies ``A``, ``B`` around two holes and ``(AB)^-1`` around the outside."""
    g = _require_planar(graph)
    if len({hole1, hole2, g.outer}) != 3:
        raise BadHoleFace("the two holes must be distinct bounded faces")
    return flat_connection(g, [hole1, hole2], [A, B])


def gauge_transform(graph, phi: MatrixLocalSystem, gs: Sequence[Mat]) -> MatrixLocalSystem:
    """``phi_bw -> g_w phi_bw g_b^-1``; traces of closed walks are unchanged."""
    inv = [mat_inv(G) for G in gs]
    mats = tuple(mat_mul(gs[e.white], mat_mul(phi.mats[i], inv[e.black])) for i, e in enumerate(graph.edges))
    return MatrixLocalSystem(phi.n, mats)


def random_flat_connection(graph: PlanarBipartiteGraph, n: int, holes: Sequence[int], rng: np.random.Generator) -> MatrixLocalSystem:
    """Random rational monodromies around the holes, then a random rational gauge."""
    if holes:
        phi = flat_connection(graph, holes, [random_sl(n, rng) for _ in holes], n)
    else:
        phi = MatrixLocalSystem.identity(graph, n)
    return gauge_transform(graph, phi, [random_sl(n, rng, steps=2) for _ in range(graph.n_vertices)])


def is_flat(graph: PlanarBipartiteGraph, phi: MatrixLocalSystem, holes: Sequence[int] = ()) -> bool:
    """Identity monodromy around every bounded face that is not a hole."""
    one = eye(phi.n)
    for face in graph.bounded_faces:
        if face.index in holes:
            continue
        M = face_monodromy(graph, phi, face.index)
        if phi.exact:
            if M != one:
                return False
        elif np.max(np.abs(np.asarray(M) - np.eye(phi.n))) > 1e-9:
            return False
    return True


# ---------------------------------------------------------------------------
# lamination coefficients


def _max_loops(graph) -> int:
    return graph.n_vertices // 4


def _to_ints(values) -> tuple[int, ...]:
    out = []
    for v in values:
        if Fraction(v).denominator != 1 or v < 0:
            raise AssertionError(f"coefficient {v} is not a nonnegative integer")
        out.append(int(v))
    return tuple(out)


def annulus_coefficients(graph: PlanarBipartiteGraph, hole: int, J: int | None = None) -> tuple[int, ...]:
    """``(C_0, ..., C_J)`` with ``det K~(A) = sum_j C_j Tr(A)^j`` for flat SL_2 connections.

    The determinant is evaluated at ``A_t = diag(t, 1/t)`` for ``J + 2``
    integers ``t`` (one point beyond what is needed, as a certificate) and the
    Vandermonde system in ``z = t + 1/t`` is solved exactly.
    """
    g = _require_planar(graph)
    _check_hole(g, hole)
    J = _max_loops(g) if J is None else J
    ts = [Fraction(t) for t in range(2, J + 4)]

    def value(t):
        return block_det(g, flat_connection_annulus(g, hole, ((t, 0), (0, 1 / t))))

    dets = pmap(value, ts)
    zs = [t + 1 / t for t in ts]
    rows = [[z**j for j in range(J + 1)] for z in zs]
    try:
        coeffs = solve_overdetermined(rows, dets)
    except (Singular, ValueError) as exc:
        raise IllConditioned(f"annulus interpolation failed: {exc}") from None
    return _to_ints(coeffs)


def winding_classes(graph: PlanarBipartiteGraph, m2: Sequence[int], holes: Sequence[int]):
    """For each loop of a double-dimer cover, which of the ``holes`` it encloses."""
    dec = decompose_double_dimer(graph, m2)
    return [tuple(h in enc for h in holes) for enc in dec.enclosed]


def annulus_oracle(graph: PlanarBipartiteGraph, hole: int, cap: int = DEFAULT_CAP) -> tuple[int, ...]:
    """Coefficients by enumeration: contractible loops weigh 2, winding loops count towards ``j``."""
    g = _require_planar(graph)
    _check_hole(g, hole)
    out: dict[int, int] = {}
    for m2 in enumerate_multiwebs(g, 2, cap):
        classes = winding_classes(g, m2, [hole]) if hole != g.outer else []
        j = sum(1 for (inside,) in classes if inside)
        contractible = (len(classes) - j) if hole != g.outer else len(decompose_double_dimer(g, m2).loops)
        out[j] = out.get(j, 0) + 2**contractible
    J = max(_max_loops(g), max(out))
    return tuple(out.get(j, 0) for j in range(J + 1))


def pants_matrices(x, y, t) -> tuple[Mat, Mat]:
    """SL_2 matrices with ``Tr A = x``, ``Tr B = y`` and ``Tr AB = t^2 + (x - y) t + 2``."""
    A = ((x, -1), (1, 0 * x))
    B = ((t, 1), (t * (y - t) - 1, y - t))
    return mat(A), mat(B)


def pants_monomials(D: int) -> list[tuple[int, int, int]]:
    return [(i, j, k) for s in range(D + 1) for i in range(s + 1) for j in range(s + 1 - i) for k in [s - i - j]]


def pants_coefficients(graph: PlanarBipartiteGraph, hole1: int, hole2: int, D: int | None = None) -> dict[tuple[int, int, int], int]:
    """Nonzero ``C_{i,j,k}`` in ``det K~ = sum C_{ijk} x^i y^j z^k``.

    ``x, y`` are the traces around the two holes and ``z`` the trace around
    both.  Sample points come from a grid in ``(x, y, t)`` with
    ``z = t^2 + (x - y) t + 2``; the overdetermined system in the monomials
    of total degree ``<= D`` is solved exactly.
    """
    g = _require_planar(graph)
    D = _max_loops(g) if D is None else D
    pts = [
        (Fraction(x), Fraction(y), Fraction(t))
        for x in range(3, 4 + D)
        for y in range(3, 4 + D)
        for t in range(D + 1, 2 * D + 3)
    ]

    def value(p):
        A, B = pants_matrices(*p)
        return block_det(g, flat_connection_pants(g, hole1, hole2, A, B))

    dets = pmap(value, pts)
    mons = pants_monomials(D)
    rows = []
    for x, y, t in pts:
        z = t * t + (x - y) * t + 2
        rows.append([x**i * y**j * z**k for i, j, k in mons])
    try:
        coeffs = solve_overdetermined(rows, dets)
    except (Singular, ValueError) as exc:
        raise IllConditioned(f"pants interpolation failed: {exc}") from None
    ints = _to_ints(coeffs)
    return {mon: c for mon, c in zip(mons, ints) if c}


def pants_coefficients_contour(graph: PlanarBipartiteGraph, hole1: int, hole2: int, D: int | None = None, radius: float = 1.0) -> dict[tuple[int, int, int], float]:
    """Floating cross-check: Fourier coefficients of ``det K~`` on a torus ``|x| = |y| = |z| = radius``.

    The polynomial has degree at most ``D`` in each trace, so ``D + 1``
    equally spaced points per circle give the coefficients without aliasing.
    """
    g = _require_planar(graph)
    D = _max_loops(g) if D is None else D
    M = D + 1
    roots = radius * np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.zeros((M, M, M), dtype=complex)
    for a, b, c in itertools.product(range(M), repeat=3):
        x, y, z = roots[a], roots[b], roots[c]
        t = (-(x - y) + cmath.sqrt((x - y) ** 2 - 4 * (2 - z))) / 2
        A, B = pants_matrices(complex(x), complex(y), complex(t))
        vals[a, b, c] = block_det(g, flat_connection_pants(g, hole1, hole2, A, B))
    coef = np.fft.fftn(vals) / M**3
    out = {}
    for i, j, k in itertools.product(range(M), repeat=3):
        c = coef[i, j, k] / radius ** (i + j + k)
        if abs(c) > 1e-8:
            out[(i, j, k)] = float(c.real)
    return out


def pants_oracle(graph: PlanarBipartiteGraph, hole1: int, hole2: int, cap: int = DEFAULT_CAP) -> dict[tuple[int, int, int], int]:
    """``C_{i,j,k}`` by enumerating double-dimer covers and classifying their loops."""
    g = _require_planar(graph)
    out: dict[tuple[int, int, int], int] = {}
    for m2 in enumerate_multiwebs(g, 2, cap):
        ijk = [0, 0, 0]
        free = 0
        for a, b in winding_classes(g, m2, [hole1, hole2]):
            if a and b:
                ijk[2] += 1
            elif a:
                ijk[0] += 1
            elif b:
                ijk[1] += 1
            else:
                free += 1
        key = tuple(ijk)
        out[key] = out.get(key, 0) + 2**free
    return dict(sorted(out.items()))
