"""Random walks on permutations of the vertex set driven by i.i.d. dimer covers.

Each dimer cover ``m`` gives the fixed-point-free involution ``pi_m`` that
swaps the two ends of every edge of ``m``.  The walk starts at the identity
and multiplies on the left by an independent ``pi_m`` at every step, so the
vertex that started at ``v`` sits at ``sigma_t(v)`` after ``t`` steps.

Permutations are tuples ``p`` with ``p[i]`` the image of ``i`` and
``(p * q)[i] = p[q[i]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .errors import GroupTooLarge, NoPerfectMatching, TooLarge, ValidationError
from .graph import BipartiteGraph
from .kasteleyn import DimerSampler, _weights
from .oracle import enumerate_dimer_covers
from ._parallel import pmap

GROUP_CAP = 10080
EXACT_SPECTRUM_LIMIT = 60
TORUS_MAX = 4

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """``p * q``: apply ``q`` first."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycles(p: Perm, labels: Sequence | None = None) -> list[tuple]:
    """Nontrivial cycles of ``p`` (as labels when given)."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(c if labels is None else (labels[k] for k in c)))
    return out


def cycle_string(p: Perm, labels: Sequence | None = None) -> str:
    cs = cycles(p, labels)
    if not cs:
        return "id"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cs)


def matching_involution(graph: BipartiteGraph, cover: Sequence[int]) -> Perm:
    """Involution exchanging the two ends of every edge of the dimer cover."""
    p = [-1] * graph.n_vertices
    for e in cover:
        b, w = graph.edges[e].black, graph.edges[e].white
        if p[b] != -1 or p[w] != -1:
            raise ValidationError("edge set covers a vertex twice")
        p[b], p[w] = w, b
    if -1 in p:
        raise ValidationError("edge set is not a dimer cover")
    return tuple(p)


# ---------------------------------------------------------------------------
# walk models


@dataclass(frozen=True)
class WalkModel:
    """Finite measure on involutions: ``probs[i]`` is the weight of ``involutions[i]``."""

    labels: tuple[str, ...]
    involutions: tuple[Perm, ...]
    probs: tuple[Fraction, ...]
    covers: tuple[tuple[int, ...], ...] = ()
    graph: BipartiteGraph | None = None

    @property
    def n(self) -> int:
        return len(self.labels)

    def float_probs(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])


def walk_model(graph: BipartiteGraph, weights=None) -> WalkModel:
    """Cover measure of ``graph`` by enumeration (weight = product of edge weights)."""
    w = _weights(graph, weights)
    covers = enumerate_dimer_covers(graph)
    if not covers:
        raise NoPerfectMatching("graph has no dimer cover")
    cw = [math.prod((w[e] for e in m), start=Fraction(1)) for m in covers]
    z = sum(cw)
    if z <= 0:
        raise NoPerfectMatching("total cover weight is zero")
    labels = tuple(v.name for v in graph.vertices)
    return WalkModel(
        labels,
        tuple(matching_involution(graph, m) for m in covers),
        tuple(x / z for x in cw),
        tuple(covers),
        graph,
    )


def k4_model() -> WalkModel:
    """The complete graph K4 with its three perfect matchings, uniformly weighted."""
    invs = ((1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))
    return WalkModel(("1", "2", "3", "4"), invs, (Fraction(1, 3),) * 3)


def _sample_indices(model: WalkModel, steps: int, rng: np.random.Generator) -> np.ndarray:
    return rng.choice(len(model.involutions), size=steps, p=model.float_probs())


def apply_quotient(p: Perm, quotient: Sequence[int]) -> Perm:
    """Permutation induced on the classes ``quotient[v]`` (must be well defined)."""
    k = max(quotient) + 1
    out = [-1] * k
    for v, img in enumerate(p):
        a, b = quotient[v], quotient[img]
        if out[a] == -1:
            out[a] = b
        elif out[a] != b:
            raise ValidationError("permutation does not descend to the quotient")
    if -1 in out or sorted(out) != list(range(k)):
        raise ValidationError("quotient classes are not permuted")
    return tuple(out)


def coordinate_quotient(graph: BipartiteGraph, axis: int = 0) -> tuple[int, ...]:
    """Class of each vertex = rank of its ``axis`` coordinate."""
    if graph.positions is None:
        raise ValidationError("graph has no vertex positions")
    values = sorted({graph.positions[v][axis] for v in range(graph.n_vertices)})
    rank = {x: i for i, x in enumerate(values)}
    return tuple(rank[graph.positions[v][axis]] for v in range(graph.n_vertices))


def simulate_walk(
    model: WalkModel | BipartiteGraph,
    steps: int,
    seed: int = 0,
    weights=None,
    quotient: Sequence[int] | None = None,
) -> list[Perm]:
    """Trajectory ``sigma_0 = id, sigma_1, ..., sigma_steps``; deterministic per seed."""
    if steps < 0:
        raise ValidationError("steps must be nonnegative")
    rng = np.random.default_rng(seed)
    if isinstance(model, BipartiteGraph):
        try:
            model = walk_model(model, weights)
        except TooLarge:
            return _simulate_sampled(model, weights, steps, rng, quotient)
    sigma = identity(model.n)
    out = [sigma]
    for i in _sample_indices(model, steps, rng):
        sigma = compose(model.involutions[i], sigma)
        out.append(sigma)
    if quotient is not None:
        out = [apply_quotient(p, quotient) for p in out]
    return out


def _simulate_sampled(graph, weights, steps, rng, quotient):
    sampler = DimerSampler(graph, weights)
    sigma = identity(graph.n_vertices)
    out = [sigma]
    for _ in range(steps):
        sigma = compose(matching_involution(graph, sampler.sample(rng)), sigma)
        out.append(sigma)
    if quotient is not None:
        out = [apply_quotient(p, quotient) for p in out]
    return out


# ---------------------------------------------------------------------------
# group algebra


def _generators(model: WalkModel, quotient) -> dict[Perm, Fraction]:
    gens: dict[Perm, Fraction] = {}
    for p, w in zip(model.involutions, model.probs):
        if quotient is not None:
            p = apply_quotient(p, quotient)
        gens[p] = gens.get(p, Fraction(0)) + w
    return {p: w for p, w in gens.items() if w}


def generated_group(gens: Sequence[Perm], n: int, cap: int = GROUP_CAP) -> list[Perm]:
    """Sorted closure of ``{id}`` under left multiplication by ``gens``."""
    e = identity(n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = compose(g, h)
                if x not in seen:
                    seen.add(x)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"generated group has more than {cap} elements")
                    nxt.append(x)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class GroupOperator:
    """Left multiplication by ``g = sum_m p_m pi_m`` on the group algebra.

    ``matrix[i][j]`` is the coefficient of ``elements[i]`` in ``g * elements[j]``.
    The walk's transition matrix is the transpose.
    """

    elements: tuple[Perm, ...]
    generators: dict
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def transition_matrix(self) -> list[list[Fraction]]:
        return [list(col) for col in zip(*self.matrix)]

    def float_matrix(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])


def group_algebra_operator(
    model: WalkModel, quotient: Sequence[int] | None = None, cap: int = GROUP_CAP
) -> GroupOperator:
    gens = _generators(model, quotient)
    n = max(quotient) + 1 if quotient is not None else model.n
    elems = generated_group(list(gens), n, cap)
    index = {p: i for i, p in enumerate(elems)}
    size = len(elems)
    M = [[Fraction(0)] * size for _ in range(size)]
    for j, h in enumerate(elems):
        for g, w in gens.items():
            M[index[compose(g, h)]][j] += w
    return GroupOperator(tuple(elems), gens, tuple(tuple(r) for r in M))


def operator_spectrum(op: GroupOperator, exact: bool | None = None) -> list:
    """Eigenvalues with multiplicity, in decreasing order.

    Exact (sympy) for operators up to ``EXACT_SPECTRUM_LIMIT`` elements:
    rational eigenvalues come back as ``Fraction``, irrational ones as
    floats.  Larger operators use floating point.
    """
    if exact is None:
        exact = op.size <= EXACT_SPECTRUM_LIMIT
    if not exact:
        vals = np.linalg.eigvals(op.float_matrix())
        vals = [complex(v) for v in vals]
        out = [v.real if abs(v.imag) < 1e-12 else v for v in vals]
        return sorted(out, key=lambda v: (-v.real if isinstance(v, complex) else -v))
    import sympy

    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in op.matrix])
    out = []
    for val, mult in M.eigenvals().items():
        val = sympy.nsimplify(val) if not val.is_Rational else val
        if val.is_Rational:
            v = Fraction(int(val.p), int(val.q))
        else:
            c = complex(val.evalf(30))
            v = c.real if abs(c.imag) < 1e-12 else c
        out.extend([v] * mult)
    return sorted(out, key=lambda v: -float(v.real if isinstance(v, complex) else v))


# ---------------------------------------------------------------------------
# mixing


def walk_period(op: GroupOperator) -> int:
    """Period of the walk on the generated group (1 means aperiodic)."""
    index = {p: i for i, p in enumerate(op.elements)}
    level = {0: 0}
    order = [0]
    d = 0
    for i in order:
        for g in op.generators:
            j = index[compose(g, op.elements[i])]
            if j not in level:
                level[j] = level[i] + 1
                order.append(j)
            else:
                d = gcd(d, level[i] + 1 - level[j])
    return d or 1


@dataclass(frozen=True)
class MixingProfile:
    """Total-variation distance to the uniform law on the generated group.

    ``exact`` profiles hold ``Fraction`` values and no errors.  Monte Carlo
    profiles report the distance of the law of ``sigma_t(0)`` from uniform
    on the orbit of vertex 0, which is a lower bound for the full distance,
    together with standard errors from batch means.
    """

    tv: tuple
    exact: bool
    group_size: int | None
    period: int | None
    stderr: tuple | None = None

    def csv(self) -> str:
        lines = ["t,tv" + ("" if self.stderr is None else ",stderr")]
        for t, v in enumerate(self.tv, start=1):
            row = f"{t},{float(v)!r}"
            if self.stderr is not None:
                row += f",{self.stderr[t - 1]!r}"
            lines.append(row)
        return "\n".join(lines) + "\n"


def mixing_profile(
    model: WalkModel,
    horizon: int,
    quotient: Sequence[int] | None = None,
    cap: int = GROUP_CAP,
    samples: int = 20_000,
    seed: int = 0,
) -> MixingProfile:
    if horizon < 0:
        raise ValidationError("horizon must be nonnegative")
    try:
        op = group_algebra_operator(model, quotient, cap)
    except GroupTooLarge:
        return _mixing_monte_carlo(model, horizon, quotient, samples, seed)
    size = op.size
    u = Fraction(1, size)
    index = {p: i for i, p in enumerate(op.elements)}
    steps = [[(index[compose(g, h)], w) for g, w in op.generators.items()] for h in op.elements]
    dist = [Fraction(0)] * size
    dist[index[identity(len(op.elements[0]))]] = Fraction(1)
    tv = []
    for _ in range(horizon):
        new = [Fraction(0)] * size
        for i, mass in enumerate(dist):
            if mass:
                for j, w in steps[i]:
                    new[j] += mass * w
        dist = new
        tv.append(sum(abs(x - u) for x in dist) / 2)
    return MixingProfile(tuple(tv), True, size, walk_period(op))


def _orbit(model: WalkModel, quotient, start: int = 0) -> set[int]:
    gens = list(_generators(model, quotient))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for g in gens:
            if g[v] not in seen:
                seen.add(g[v])
                stack.append(g[v])
    return seen


def _mixing_monte_carlo(model, horizon, quotient, samples, seed, batches: int = 20):
    gens = _generators(model, quotient)
    perms = list(gens)
    p = np.array([float(w) for w in gens.values()])
    table = np.array(perms, dtype=np.int64)
    orbit = sorted(_orbit(model, quotient))
    k = table.shape[1]
    rng = np.random.default_rng(seed)
    pos = np.zeros(samples, dtype=np.int64)
    tv, err = [], []
    bsize = samples // batches
    for _ in range(horizon):
        choice = rng.choice(len(perms), size=samples, p=p)
        pos = table[choice, pos]
        counts = np.bincount(pos, minlength=k)[orbit] / samples
        tv.append(float(np.abs(counts - 1 / len(orbit)).sum() / 2))
        per = []
        for b in range(batches):
            c = np.bincount(pos[b * bsize:(b + 1) * bsize], minlength=k)[orbit] / bsize
            per.append(np.abs(c - 1 / len(orbit)).sum() / 2)
        err.append(float(np.std(per, ddof=1) / math.sqrt(batches)))
    return MixingProfile(tuple(tv), False, None, None, tuple(err))


# ---------------------------------------------------------------------------
# torus winding


@dataclass(frozen=True)
class WindingResult:
    """Relative winding ``(wx, wy)`` of the two tracked vertices, one row per trial."""

    n: int
    steps: int
    tracked: tuple[int, int]
    windings: np.ndarray
    displacements: np.ndarray

    @property
    def trials(self) -> int:
        return len(self.windings)

    def mean(self) -> np.ndarray:
        return self.windings.mean(axis=0)

    def confidence_interval(self, z: float = 1.96) -> np.ndarray:
        """``[[lo_x, hi_x], [lo_y, hi_y]]`` normal-approximation interval for the mean."""
        m = self.mean()
        if self.trials < 2:
            return np.stack([m, m], axis=1)
        se = self.windings.std(axis=0, ddof=1) / math.sqrt(self.trials)
        return np.stack([m - z * se, m + z * se], axis=1)

    def histogram(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for wx, wy in self.windings.tolist():
            out[wx, wy] = out.get((wx, wy), 0) + 1
        return dict(sorted(out.items()))

    def csv(self) -> str:
        lines = ["wx,wy,count"]
        lines += [f"{wx},{wy},{c}" for (wx, wy), c in self.histogram().items()]
        return "\n".join(lines) + "\n"


def torus_walk_model(n: int):
    from .corpus import make_torus_grid

    if n > TORUS_MAX:
        raise TooLarge(f"torus side {n} exceeds {TORUS_MAX}")
    g = make_torus_grid(n)
    return g, walk_model(g)


def _step_tables(graph, model: WalkModel) -> tuple[np.ndarray, np.ndarray]:
    """Partner and lifted displacement of every vertex under every cover."""
    k, nv = len(model.covers), graph.n_vertices
    partner = np.zeros((k, nv), dtype=np.int64)
    disp = np.zeros((k, nv, 2), dtype=np.int64)
    for i, cover in enumerate(model.covers):
        for e in cover:
            b, w = graph.edges[e].black, graph.edges[e].white
            d = np.array(graph.displacement[e])
            partner[i, b], partner[i, w] = w, b
            disp[i, b], disp[i, w] = d, -d
    return partner, disp


def _winding_trial(args):
    partner, disp, p, n, steps, tracked, seed, trial = args
    rng = np.random.default_rng([seed, trial])
    choice = rng.choice(len(p), size=steps, p=p)
    out = []
    for v in tracked:
        pos = v
        total = np.zeros(2, dtype=np.int64)
        for i in choice:
            total += disp[i, pos]
            pos = partner[i, pos]
        out.append(total)
    return out


def torus_walk_experiment(
    n: int,
    steps: int,
    trials: int,
    seed: int = 0,
    tracked: tuple[int, int] = (0, 1),
) -> WindingResult:
    """Relative winding of two tracked vertices on the ``n x n`` torus.

    A vertex's winding vector counts signed crossings of the two seams
    ``x = n - 1/2`` and ``y = n - 1/2``; for a lifted path from ``x0`` with
    net displacement ``D`` that is ``floor((x0 + D) / n)`` per axis.  The
    relative winding is the difference of the two vectors.
    """
    if steps < 0 or trials < 1:
        raise ValidationError("need steps >= 0 and trials >= 1")
    g, model = torus_walk_model(n)
    if len(set(tracked)) != 2 or not all(0 <= v < g.n_vertices for v in tracked):
        raise ValidationError("tracked must be two distinct vertices")
    partner, disp = _step_tables(g, model)
    p = model.float_probs()
    jobs = [(partner, disp, p, n, steps, tracked, seed, t) for t in range(trials)]
    results = pmap(_winding_trial, jobs)
    start = [np.array(g.positions[v], dtype=np.int64) for v in tracked]
    displacements = np.array([[r[0], r[1]] for r in results], dtype=np.int64)
    windings = np.stack(
        [(start[0] + displacements[:, 0]) // n - (start[1] + displacements[:, 1]) // n],
        axis=0,
    )[0]
    return WindingResult(n, steps, tuple(tracked), windings, displacements)
