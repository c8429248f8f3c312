"""Kasteleyn signs and matrices, partition functions, edge statistics, sampling."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NoPerfectMatching, SharedVertex, Singular, TorusGraph, ValidationError
from .exact import det_rational, invert_rational
from .graph import BipartiteGraph, PlanarBipartiteGraph, face_schedule, spanning_tree

NAIVE_SAMPLER_LIMIT = 40


def _require_planar(graph: BipartiteGraph) -> PlanarBipartiteGraph:
    if getattr(graph, "torus", False) or not isinstance(graph, PlanarBipartiteGraph):
        raise TorusGraph("Kasteleyn operations need a planar embedded graph")
    return graph


def _weights(graph: BipartiteGraph, weights) -> tuple[Fraction, ...]:
    if weights is None:
        return graph.weights()
    w = tuple(Fraction(x) for x in weights)
    if len(w) != graph.n_edges:
        raise ValidationError(f"expected {graph.n_edges} weights, got {len(w)}")
    if any(x <= 0 for x in w):
        raise ValidationError("edge weights must be strictly positive")
    return w


def required_minus_parity(face) -> int:
    """Parity of minus signs a bounded face walk must carry.

    Edges traversed twice (pendant trees, bridges) lengthen the walk but not
    the boundary cycle, hence the correction term.
    """
    counts: dict[int, int] = {}
    for d in face.darts:
        counts[d >> 1] = counts.get(d >> 1, 0) + 1
    doubled = sum(1 for c in counts.values() if c == 2)
    return (face.length // 2 + 1 + doubled) % 2


def kasteleyn_signs(graph: BipartiteGraph) -> tuple[int, ...]:
    """Signs ``+1/-1`` per edge satisfying the face rule on every bounded face.

    Tree edges get ``+1``; each remaining edge is fixed by the one face
    constraint in which it is still undetermined.
    """
    g = _require_planar(graph)
    tree = spanning_tree(g)
    minus = [0] * g.n_edges
    for f, e in face_schedule(g, tree):
        face = g.faces[f]
        others = sum(minus[d >> 1] for d in face.darts if d >> 1 != e)
        minus[e] = (required_minus_parity(face) - others) % 2
    return tuple(-1 if x else 1 for x in minus)


def check_sign_rule(graph: PlanarBipartiteGraph, signs: Sequence[int]) -> bool:
    for face in graph.bounded_faces:
        minus = sum(1 for d in face.darts if signs[d >> 1] < 0) % 2
        if minus != required_minus_parity(face):
            return False
    return True


@dataclass(frozen=True)
class KasteleynMatrix:
    """Rows are white vertices, columns black vertices (both in index order)."""

    entries: tuple[tuple, ...]
    whites: tuple[int, ...]
    blacks: tuple[int, ...]
    signs: tuple[int, ...]

    @property
    def row(self) -> dict[int, int]:
        return {w: i for i, w in enumerate(self.whites)}

    @property
    def col(self) -> dict[int, int]:
        return {b: j for j, b in enumerate(self.blacks)}

    def as_lists(self) -> list[list]:
        return [list(r) for r in self.entries]


def kasteleyn_matrix(graph: BipartiteGraph, weights=None, signs=None, zero=Fraction(0)) -> KasteleynMatrix:
    """Signed weighted white x black matrix; parallel edges add up.

    ``weights`` may hold any ring elements (Fractions, Laurent monomials,
    floats); pass a matching ``zero``.
    """
    g = _require_planar(graph)
    if signs is None:
        signs = kasteleyn_signs(g)
    if weights is None:
        weights = g.weights()
    row = {w: i for i, w in enumerate(g.whites)}
    col = {b: j for j, b in enumerate(g.blacks)}
    M = [[zero] * len(g.blacks) for _ in g.whites]
    for e, edge in enumerate(g.edges):
        c = weights[e]
        M[row[edge.white]][col[edge.black]] = M[row[edge.white]][col[edge.black]] + (c if signs[e] > 0 else -c)
    return KasteleynMatrix(tuple(map(tuple, M)), g.whites, g.blacks, tuple(signs))


def partition_function(graph: BipartiteGraph, weights=None, strict: bool = False) -> Fraction:
    """Weighted number of dimer covers, ``|det K|``.

    Returns 0 when there is no cover; with ``strict`` that raises instead.
    """
    w = _weights(graph, weights)
    g = _require_planar(graph)
    if len(g.whites) != len(g.blacks):
        z = Fraction(0)
    else:
        z = abs(det_rational(kasteleyn_matrix(g, w).entries))
    if strict and z == 0:
        raise NoPerfectMatching("graph has no dimer cover")
    return z


def _inverse(graph: PlanarBipartiteGraph, w) -> tuple[KasteleynMatrix, list[list[Fraction]]]:
    K = kasteleyn_matrix(graph, w)
    if len(K.whites) != len(K.blacks):
        raise NoPerfectMatching("unequal numbers of black and white vertices")
    try:
        inv = invert_rational(K.entries)
    except Singular:
        raise Singular("Kasteleyn matrix is singular: the graph has no dimer cover") from None
    return K, inv


def edge_probabilities(graph: BipartiteGraph, weights=None) -> tuple[Fraction, ...]:
    """Exact probability of every edge under the weighted cover measure."""
    w = _weights(graph, weights)
    g = _require_planar(graph)
    K, inv = _inverse(g, w)
    row, col = K.row, K.col
    out = []
    for e, edge in enumerate(g.edges):
        p = K.signs[e] * w[e] * inv[col[edge.black]][row[edge.white]]
        out.append(p)
    return tuple(out)


def edge_probability(graph: BipartiteGraph, weights, edge) -> Fraction:
    e = graph.edge_index(edge) if isinstance(edge, str) else edge
    return edge_probabilities(graph, weights)[e]


def local_statistics(graph: BipartiteGraph, weights, edges: Iterable) -> Fraction:
    """Probability that all the given (vertex-disjoint) edges are in the cover."""
    w = _weights(graph, weights)
    g = _require_planar(graph)
    es = [g.edge_index(e) if isinstance(e, str) else e for e in edges]
    seen: set[int] = set()
    for e in es:
        for v in (g.edges[e].black, g.edges[e].white):
            if v in seen:
                raise SharedVertex(f"edges share vertex {g.vertices[v].name!r}")
            seen.add(v)
    if not es:
        return Fraction(1)
    K, inv = _inverse(g, w)
    row, col = K.row, K.col
    pref = Fraction(1)
    for e in es:
        pref *= K.signs[e] * w[e]
    minor = [[inv[col[g.edges[ej].black]][row[g.edges[ei].white]] for ej in es] for ei in es]
    return abs(pref * det_rational(minor))


# ---------------------------------------------------------------------------
# exact sampling


class DimerSampler:
    """Exact sampler for the weighted cover measure.

    The lowest-index unmatched white vertex is matched along one of its
    edges with the exact conditional probabilities ``K'_{wb} K'^{-1}_{bw}``
    of the reduced graph.  Reduced inverses come either from scratch
    (``method="naive"``) or from a rank-one update of the parent's inverse
    (``method="rank1"``); both are exact, so samples are identical.
    """

    def __init__(self, graph: BipartiteGraph, weights=None, method: str = "auto"):
        self.graph = _require_planar(graph)
        self.w = _weights(graph, weights)
        if method == "auto":
            method = "naive" if graph.n_vertices < NAIVE_SAMPLER_LIMIT else "rank1"
        if method not in ("naive", "rank1"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        self.K = kasteleyn_matrix(self.graph, self.w)
        if len(self.K.whites) != len(self.K.blacks):
            raise NoPerfectMatching("unequal numbers of black and white vertices")
        self._root = (frozenset(self.K.whites), frozenset(self.K.blacks))
        self._inv: dict = {}
        self._cond: dict = {}
        try:
            self._inv[self._root] = self._fresh_inverse(*self._root)
        except Singular:
            raise NoPerfectMatching("graph has no dimer cover") from None

    def _fresh_inverse(self, whites, blacks):
        ws, bs = sorted(whites), sorted(blacks)
        row, col = self.K.row, self.K.col
        sub = [[self.K.entries[row[w]][col[b]] for b in bs] for w in ws]
        inv = invert_rational(sub) if ws else []
        return {(b, w): inv[j][i] for j, b in enumerate(bs) for i, w in enumerate(ws)}

    @staticmethod
    def _rank1(G, whites, blacks, w, b):
        piv = G[b, w]
        return {
            (bb, ww): G[bb, ww] - G[bb, w] * G[b, ww] / piv
            for bb in blacks
            for ww in whites
        }

    def conditionals(self, state) -> list[tuple[int, Fraction]]:
        """``[(edge, probability), ...]`` for the next white vertex in ``state``."""
        if state in self._cond:
            return self._cond[state]
        whites, blacks = state
        G = self._inv[state]
        w = min(whites)
        out = []
        for e in sorted(self.graph.incident(w)):
            b = self.graph.edges[e].black
            if b in blacks:
                p = self.K.signs[e] * self.w[e] * G[b, w]
                if p < 0:
                    raise AssertionError("negative conditional probability")
                if p:
                    out.append((e, p))
        if sum(p for _, p in out) != 1:
            raise AssertionError("conditional probabilities do not sum to one")
        self._cond[state] = out
        return out

    def _child(self, state, e):
        whites, blacks = state
        edge = self.graph.edges[e]
        child = (whites - {edge.white}, blacks - {edge.black})
        if child not in self._inv:
            if self.method == "naive":
                self._inv[child] = self._fresh_inverse(*child)
            else:
                self._inv[child] = self._rank1(self._inv[state], child[0], child[1], edge.white, edge.black)
        return child

    def sample(self, rng: np.random.Generator) -> tuple[int, ...]:
        state = self._root
        cover = []
        while state[0]:
            u = Fraction(rng.random())
            acc = Fraction(0)
            options = self.conditionals(state)
            choice = options[-1][0]
            for e, p in options:
                acc += p
                if u < acc:
                    choice = e
                    break
            cover.append(choice)
            state = self._child(state, choice)
        return tuple(sorted(cover))


def sample_dimer_covers(graph: BipartiteGraph, weights=None, n: int = 1, seed: int = 0, method: str = "auto"):
    """``n`` independent exact samples, deterministic per seed."""
    sampler = DimerSampler(graph, weights, method)
    rng = np.random.default_rng(seed)
    return [sampler.sample(rng) for _ in range(n)]


def sample_dimer_cover(graph: BipartiteGraph, weights=None, seed: int = 0, method: str = "auto") -> tuple[int, ...]:
    return sample_dimer_covers(graph, weights, 1, seed, method)[0]
