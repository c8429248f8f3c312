from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dimerlab.corpus import make_c4, make_k2
from dimerlab.errors import DegenerateGraph, MaxIterations, TargetOutsidePolytope
from dimerlab.kasteleyn import edge_probabilities
from dimerlab.oracle import enumerate_dimer_covers
from dimerlab.psi import (
    covariance_matrix,
    expected_fractional_matching,
    face_weights,
    gauge_fix,
    hessian_float,
    invert_psi,
    log_partition_float,
    non_tree_edges,
    psi,
)

F = Fraction


def interior_target(g, rng):
    covers = enumerate_dimer_covers(g)
    lam = rng.dirichlet(np.ones(len(covers)))
    f = np.zeros(g.n_edges)
    for w, m in zip(lam, covers):
        f[list(m)] += w
    return f


def test_face_weight_examples(corpus):
    a, b, c, d = map(F, (2, 3, 5, 7))
    (X,) = face_weights(make_c4([a, b, c, d]), [a, b, c, d]).values()
    assert X in (a * c / (b * d), b * d / (a * c))
    for g in corpus.values():
        assert set(face_weights(g).values()) <= {1}


def test_expected_matching_examples(corpus):
    f = expected_fractional_matching(corpus["grid2x3"])
    assert f[corpus["grid2x3"].edge_index("v0,0")] == F(2, 3)
    assert expected_fractional_matching(make_k2()) == (1,)
    assert set(expected_fractional_matching(make_c4())) == {F(1, 2)}


def test_gauge_fix_examples(corpus):
    g = corpus["grid2x3"]
    assert gauge_fix(g, {f.index: F(1) for f in g.bounded_faces}) == [1] * g.n_edges
    c4 = make_c4()
    w = gauge_fix(c4, {c4.bounded_faces[0].index: F(2)})
    assert sorted(w) in ([F(1)] * 3 + [F(2)], [F(1, 2)] + [F(1)] * 3)
    X = {f.index: x for f, x in zip(g.bounded_faces, (F(3, 7), F(5, 2)))}
    assert face_weights(g, gauge_fix(g, X)) == X


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["grid2x3", "grid3x4", "cube", "annulus_w2"]), st.data())
def test_gauge_fix_round_trip(name, data):
    from dimerlab.corpus import builtin_corpus

    g = builtin_corpus()[name]
    vals = data.draw(st.lists(st.fractions(min_value=F(1, 9), max_value=9, max_denominator=9), min_size=len(g.bounded_faces), max_size=len(g.bounded_faces)))
    X = {f.index: x for f, x in zip(g.bounded_faces, vals)}
    w = gauge_fix(g, X)
    assert face_weights(g, w) == X
    assert psi(g, X) == edge_probabilities(g, w)


def test_vertex_sums_exact(corpus):
    for g in corpus.values():
        f = expected_fractional_matching(g)
        for v in range(g.n_vertices):
            assert sum(f[e] for e in g.incident(v)) == 1


def test_covariance_examples(corpus):
    assert covariance_matrix(make_k2()) == []
    c4 = make_c4()
    assert covariance_matrix(c4) == [[F(1, 4)]]
    g = corpus["grid2x3"]
    cov = covariance_matrix(g)
    nt = non_tree_edges(g)
    covers = enumerate_dimer_covers(g)
    for i, a in enumerate(nt):
        for j, b in enumerate(nt):
            ea = F(sum(a in m for m in covers), 3)
            eb = F(sum(b in m for m in covers), 3)
            eab = F(sum(a in m and b in m for m in covers), 3)
            assert cov[i][j] == eab - ea * eb
    assert np.all(np.linalg.eigvalsh(np.array(cov, dtype=float)) > 0)


def test_invert_examples(corpus):
    g = corpus["grid2x3"]
    X = invert_psi(g, expected_fractional_matching(g))
    assert np.allclose(list(X.values()), 1, atol=1e-10)
    c4 = make_c4()
    target = [0.75, 0.25, 0.75, 0.25]
    X = invert_psi(c4, target)
    assert np.max(np.abs(np.array(psi(c4, X), dtype=float) - target)) <= 1e-10


def test_invert_errors(corpus):
    with pytest.raises(DegenerateGraph):
        invert_psi(corpus["degenerate"], expected_fractional_matching(corpus["degenerate"]))
    c4 = make_c4()
    with pytest.raises(TargetOutsidePolytope):
        invert_psi(c4, [1, 0, 1, 0])
    with pytest.raises(TargetOutsidePolytope):
        invert_psi(c4, [0.5, 0.5, 0.5, 0.6])
    g = corpus["grid3x4"]
    with pytest.raises(MaxIterations):
        invert_psi(g, interior_target(g, np.random.default_rng(0)), max_iter=1)


@pytest.mark.parametrize("name", ["C4", "grid2x4", "grid3x4", "cube", "annulus_w2", "grid4x4"])
def test_round_trip_random_targets(corpus, name):
    g = corpus[name]
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = interior_target(g, rng)
        X = invert_psi(g, f)
        assert np.max(np.abs(np.array(psi(g, X), dtype=float) - f)) <= 1e-10


@pytest.mark.parametrize("name", ["C4", "grid2x3", "grid3x4", "cube"])
def test_hessian_matches_finite_differences(corpus, name):
    g = corpus[name]
    rng = np.random.default_rng(1)
    logc = rng.normal(scale=0.5, size=g.n_edges)
    h = 1e-5
    H = hessian_float(g, logc)
    grad = np.zeros(g.n_edges)
    for e in range(g.n_edges):
        d = np.zeros(g.n_edges)
        d[e] = h
        grad[e] = (log_partition_float(g, logc + d) - log_partition_float(g, logc - d)) / (2 * h)
    p = np.array(edge_probabilities(g, [F(x) for x in np.exp(logc)]), dtype=float)
    assert np.max(np.abs(grad - p)) < 1e-6
    fd = np.zeros_like(H)
    for e in range(g.n_edges):
        d = np.zeros(g.n_edges)
        d[e] = h
        fd[:, e] = (_probs(g, logc + d) - _probs(g, logc - d)) / (2 * h)
    assert np.max(np.abs(fd - H)) < 1e-6


def _probs(g, logc):
    from dimerlab.psi import _float_state

    return _float_state(g, logc)[1]
