"""Face weights, expected fractional matchings and the inverse of Psi.

Psi sends face weights (edge weights modulo gauge) to the expected
fractional matching.  It is inverted by damped Newton iteration on the
energies ``u_e = log c_e`` of the edges outside a fixed spanning tree; the
Hessian of ``log Z`` in those coordinates is the covariance matrix of the
edge indicators.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateGraph, MaxIterations, TargetOutsidePolytope, ValidationError
from .graph import PlanarBipartiteGraph, check_nondegenerate, face_schedule, spanning_tree
from .kasteleyn import _require_planar, _weights, edge_probabilities, kasteleyn_matrix, kasteleyn_signs, local_statistics
from .oracle import enumerate_dimer_covers

TOL = 1e-10
MAX_ITER = 200
MAX_HALVINGS = 40
ARMIJO = 1e-4
POLISH = 1e-3


def _face_darts_from_black(graph: PlanarBipartiteGraph, f: int) -> tuple[int, ...]:
    darts = graph.faces[f].darts
    k = next(i for i, d in enumerate(darts) if d & 1 == 0)
    return darts[k:] + darts[:k]


def face_weights(graph: PlanarBipartiteGraph, weights=None) -> dict[int, Fraction]:
    """Alternating product of edge weights around each bounded face.

    Faces are walked counterclockwise from a black vertex: the first weight,
    divided by the second, times the third, and so on.
    """
    g = _require_planar(graph)
    w = g.weights() if weights is None else list(weights)
    out = {}
    for face in g.bounded_faces:
        x = Fraction(1) if isinstance(w[0], (int, Fraction)) else 1.0
        for d in _face_darts_from_black(g, face.index):
            x = x * w[d >> 1] if d & 1 == 0 else x / w[d >> 1]
        out[face.index] = x
    return out


def gauge_fix(graph: PlanarBipartiteGraph, X: Mapping[int, object]) -> list:
    """Edge weights equal to 1 on the spanning tree reproducing the face weights ``X``."""
    g = _require_planar(graph)
    tree = spanning_tree(g)
    one = Fraction(1) if all(isinstance(v, (int, Fraction)) for v in X.values()) else 1.0
    c: list = [one] * g.n_edges
    for f, e in face_schedule(g, tree):
        if f not in X:
            raise ValidationError(f"no face weight given for face {f}")
        rest = one
        forward = None
        for d in g.faces[f].darts:
            if d >> 1 == e:
                forward = d & 1 == 0
            else:
                rest = rest * c[d >> 1] if d & 1 == 0 else rest / c[d >> 1]
        ratio = X[f] / rest
        c[e] = ratio if forward else 1 / ratio
    return c


def expected_fractional_matching(graph: PlanarBipartiteGraph, weights=None) -> tuple[Fraction, ...]:
    return edge_probabilities(graph, weights)


def psi(graph: PlanarBipartiteGraph, X: Mapping[int, object]) -> tuple:
    """Forward map: face weights to expected fractional matching (exact for rational ``X``)."""
    c = gauge_fix(graph, X)
    if all(isinstance(v, Fraction) or isinstance(v, int) for v in c):
        return edge_probabilities(graph, c)
    return tuple(_float_state(graph, np.log(np.asarray(c, dtype=float)))[1])


def non_tree_edges(graph: PlanarBipartiteGraph) -> tuple[int, ...]:
    tree = set(spanning_tree(graph))
    return tuple(e for e in range(graph.n_edges) if e not in tree)


def covariance_matrix(graph: PlanarBipartiteGraph, weights=None, edges: Sequence[int] | None = None):
    """Exact covariance of edge indicators (default: the non-tree edges)."""
    g = _require_planar(graph)
    w = _weights(g, weights)
    es = list(non_tree_edges(g) if edges is None else edges)
    p = edge_probabilities(g, w)
    cov = []
    for i in es:
        row = []
        for j in es:
            if i == j:
                joint = p[i]
            elif {g.edges[i].black, g.edges[i].white} & {g.edges[j].black, g.edges[j].white}:
                joint = Fraction(0)
            else:
                joint = local_statistics(g, w, [i, j])
            row.append(joint - p[i] * p[j])
        cov.append(row)
    return cov


# ---------------------------------------------------------------------------
# floating-point state for Newton


class _FloatKasteleyn:
    def __init__(self, graph: PlanarBipartiteGraph):
        self.g = graph
        self.signs = np.array(kasteleyn_signs(graph), dtype=float)
        K = kasteleyn_matrix(graph)
        row, col = K.row, K.col
        self.rows = np.array([row[e.white] for e in graph.edges])
        self.cols = np.array([col[e.black] for e in graph.edges])
        self.n = len(K.whites)

    def state(self, logc: np.ndarray):
        """``(log Z, p, H)`` at log-weights ``logc`` (all edges)."""
        c = np.exp(logc)
        kv = self.signs * c
        K = np.zeros((self.n, self.n))
        np.add.at(K, (self.rows, self.cols), kv)
        sign, logdet = np.linalg.slogdet(K)
        if sign == 0:
            raise TargetOutsidePolytope("Kasteleyn matrix became singular")
        G = np.linalg.inv(K)
        # A[i, j] = K_i * G[b_j, w_i]
        A = kv[:, None] * G[self.cols[None, :], self.rows[:, None]]
        p = np.diag(A).copy()
        H = np.diag(p) - A * A.T
        return logdet, p, H


def _float_state(graph, logc):
    return _FloatKasteleyn(graph).state(logc)


def log_partition_float(graph: PlanarBipartiteGraph, logc: Sequence[float]) -> float:
    return _FloatKasteleyn(graph).state(np.asarray(logc, dtype=float))[0]


def hessian_float(graph: PlanarBipartiteGraph, logc: Sequence[float]) -> np.ndarray:
    """Hessian of ``log Z`` in the energies of all edges (float)."""
    return _FloatKasteleyn(graph).state(np.asarray(logc, dtype=float))[2]


def _validate_target(graph: PlanarBipartiteGraph, f: np.ndarray, covers) -> None:
    if f.shape != (graph.n_edges,):
        raise ValidationError(f"target needs {graph.n_edges} entries")
    sums = np.zeros(graph.n_vertices)
    for e, edge in enumerate(graph.edges):
        sums[edge.black] += f[e]
        sums[edge.white] += f[e]
    if np.max(np.abs(sums - 1)) > 1e-9:
        raise TargetOutsidePolytope("target does not sum to one at every vertex")
    mask = np.zeros((len(covers), graph.n_edges))
    for i, m in enumerate(covers):
        mask[i, list(m)] = 1
    used = mask.any(axis=0)
    always = mask.all(axis=0)
    for e in range(graph.n_edges):
        if always[e]:
            if abs(f[e] - 1) > 1e-9:
                raise TargetOutsidePolytope(f"edge {graph.edges[e].name!r} is forced; target must be 1")
        elif not used[e]:
            if abs(f[e]) > 1e-9:
                raise TargetOutsidePolytope(f"edge {graph.edges[e].name!r} is unused; target must be 0")
        elif not 0 < f[e] < 1:
            raise TargetOutsidePolytope(f"target on edge {graph.edges[e].name!r} is not in (0, 1)")
    diffs = mask[1:] - mask[0]
    r = f - mask[0]
    if len(diffs):
        coef, *_ = np.linalg.lstsq(diffs.T, r, rcond=None)
        resid = np.max(np.abs(diffs.T @ coef - r))
    else:
        resid = np.max(np.abs(r))
    if resid > 1e-9:
        raise TargetOutsidePolytope("target is not in the affine hull of the dimer covers")


def invert_psi(
    graph: PlanarBipartiteGraph,
    target: Sequence,
    tol: float = TOL,
    max_iter: int = MAX_ITER,
) -> dict[int, float]:
    """Face weights ``X`` with ``Psi(X) = target`` (sup-norm residual <= ``tol``)."""
    g = _require_planar(graph)
    report = check_nondegenerate(g)
    if not report:
        raise DegenerateGraph(
            f"matching polytope has dimension {report.rank} < cycle dimension {report.cycle_dimension}"
        )
    f = np.asarray([float(x) for x in target])
    _validate_target(g, f, enumerate_dimer_covers(g))
    nt = list(non_tree_edges(g))
    if not nt:
        return {}
    fk = _FloatKasteleyn(g)
    logc = np.zeros(g.n_edges)
    fnt = f[nt]

    def objective(lc):
        logz, p, H = fk.state(lc)
        return logz - fnt @ lc[nt], p, H

    F, p, H = objective(logc)
    best = math.inf
    stalled = 0
    for _ in range(max_iter):
        resid = np.max(np.abs(p - f))
        # polish well below tol, stop once roundoff stops the progress
        if resid <= POLISH * tol or (resid <= tol and stalled >= 2):
            break
        stalled = stalled + 1 if resid >= best else 0
        best = min(best, resid)
        grad = p[nt] - fnt
        Hn = H[np.ix_(nt, nt)]
        try:
            step = np.linalg.solve(Hn, -grad)
        except np.linalg.LinAlgError:
            raise TargetOutsidePolytope("singular Hessian during Newton iteration") from None
        slope = grad @ step
        slack = 16 * np.finfo(float).eps * max(1.0, abs(F))
        t = 1.0
        for _ in range(MAX_HALVINGS):
            trial = logc.copy()
            trial[nt] += t * step
            try:
                F2, p2, H2 = objective(trial)
            except TargetOutsidePolytope:
                F2 = math.inf
            if F2 <= F + ARMIJO * t * slope + slack:
                break
            t /= 2
        else:
            raise TargetOutsidePolytope("line search failed; target is at or beyond the boundary")
        logc, F, p, H = trial, F2, p2, H2
        if np.max(np.abs(logc)) > 700:
            raise TargetOutsidePolytope("weights diverge; target is on the boundary")
    if np.max(np.abs(p - f)) > tol:
        raise MaxIterations(f"no convergence within {max_iter} iterations")
    c = np.exp(logc)
    return {face: float(x) for face, x in face_weights(g, list(c)).items()}
