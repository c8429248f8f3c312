import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dimerlab.corpus import make_c4, make_grid, make_k2, make_torus_grid
from dimerlab.errors import NoPerfectMatching, SharedVertex, TorusGraph
from dimerlab.kasteleyn import (
    DimerSampler,
    check_sign_rule,
    edge_probabilities,
    edge_probability,
    kasteleyn_signs,
    local_statistics,
    partition_function,
    sample_dimer_cover,
    sample_dimer_covers,
)
from dimerlab.oracle import enumerate_dimer_covers

weights_st = st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=9)


def oracle_z(g, w):
    return sum(math.prod((w[e] for e in m), start=Fraction(1)) for m in enumerate_dimer_covers(g))


def test_signs_examples():
    assert kasteleyn_signs(make_k2()) == (1,)
    assert kasteleyn_signs(make_c4()).count(-1) == 1
    g = make_grid(2, 3)
    s = kasteleyn_signs(g)
    for f in g.bounded_faces:
        assert sum(s[e] < 0 for e in f.edges) % 2 == 1
    with pytest.raises(TorusGraph):
        kasteleyn_signs(make_torus_grid(2))


def test_sign_rule_on_corpus(corpus):
    for g in corpus.values():
        assert check_sign_rule(g, kasteleyn_signs(g))


def test_partition_examples():
    assert partition_function(make_k2(Fraction(7, 3))) == Fraction(7, 3)
    a, b, c, d = map(Fraction, (2, 3, 5, 7))
    assert partition_function(make_c4([a, b, c, d])) == a * c + b * d
    assert partition_function(make_grid(2, 3)) == 3


def no_cover_graph():
    from dimerlab.graph import BLACK, WHITE, Edge, PlanarBipartiteGraph, Vertex

    vs = [Vertex("w0", WHITE), Vertex("w1", WHITE), Vertex("w2", WHITE), Vertex("b1", BLACK), Vertex("b2", BLACK), Vertex("b3", BLACK)]
    es = [Edge("a", 3, 0), Edge("b", 4, 0), Edge("c", 5, 0), Edge("d", 5, 1), Edge("e", 5, 2)]
    return PlanarBipartiteGraph(vs, es, [[0, 1, 2], [3], [4], [0], [1], [2, 3, 4]])


def test_no_cover_flagged():
    g = no_cover_graph()
    assert partition_function(g) == 0
    with pytest.raises(NoPerfectMatching):
        partition_function(g, strict=True)


def test_probability_examples(corpus):
    assert edge_probabilities(make_k2()) == (1,)
    g = corpus["grid2x3"]
    assert edge_probability(g, None, "v0,0") == Fraction(2, 3)
    assert set(edge_probabilities(make_c4())) == {Fraction(1, 2)}


def test_local_statistics_examples(corpus):
    g = corpus["grid2x3"]
    for e in range(g.n_edges):
        assert local_statistics(g, None, [e]) == edge_probability(g, None, e)
    c4 = make_c4()
    assert local_statistics(c4, None, ["e1", "e3"]) == Fraction(1, 2)
    covers = enumerate_dimer_covers(g)
    pair = [g.edge_index("h0,0"), g.edge_index("h0,1")]
    assert local_statistics(g, None, pair) == Fraction(sum(set(pair) <= set(m) for m in covers), len(covers))
    with pytest.raises(SharedVertex):
        local_statistics(c4, None, ["e1", "e2"])


def test_determinant_equals_oracle_on_corpus(corpus):
    for name, g in corpus.items():
        assert partition_function(g) == len(enumerate_dimer_covers(g)), name


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["C4", "grid2x3", "grid2x4", "cube", "degenerate", "annulus_w2"]), st.data())
def test_weighted_determinant_and_probabilities(name, data):
    from dimerlab.corpus import builtin_corpus

    g = builtin_corpus()[name]
    w = data.draw(st.lists(weights_st, min_size=g.n_edges, max_size=g.n_edges))
    z = oracle_z(g, w)
    assert partition_function(g, w) == z
    p = edge_probabilities(g, w)
    covers = enumerate_dimer_covers(g)
    for e in range(g.n_edges):
        assert p[e] == sum(math.prod((w[f] for f in m), start=Fraction(1)) for m in covers if e in m) / z
    for v in range(g.n_vertices):
        assert sum(p[e] for e in g.incident(v)) == 1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["C4", "grid2x3", "grid3x4", "cube"]), st.data())
def test_gauge_invariance(name, data):
    from dimerlab.corpus import builtin_corpus
    from dimerlab.psi import face_weights

    g = builtin_corpus()[name]
    w = data.draw(st.lists(weights_st, min_size=g.n_edges, max_size=g.n_edges))
    lam = data.draw(st.lists(weights_st, min_size=g.n_vertices, max_size=g.n_vertices))
    w2 = [x * lam[e.black] * lam[e.white] for x, e in zip(w, g.edges)]
    assert edge_probabilities(g, w) == edge_probabilities(g, w2)
    assert face_weights(g, w) == face_weights(g, w2)
    assert partition_function(g, w2) == partition_function(g, w) * math.prod(lam)


def test_sampler_examples():
    k2 = make_k2()
    assert all(m == (0,) for m in sample_dimer_covers(k2, n=5))
    c4 = make_c4()
    s = sample_dimer_covers(c4, n=10000, seed=3)
    assert abs(Counter(s)[(0, 2)] / 10000 - 0.5) < 0.02
    g = make_grid(2, 3)
    e = g.edge_index("v0,0")
    s = sample_dimer_covers(g, n=10000, seed=4)
    assert abs(sum(e in m for m in s) / 10000 - 2 / 3) < 0.02


def test_sampler_deterministic_and_methods_agree(corpus):
    g = corpus["grid4x4"]
    a = sample_dimer_covers(g, n=30, seed=11, method="naive")
    b = sample_dimer_covers(g, n=30, seed=11, method="rank1")
    assert a == b == sample_dimer_covers(g, n=30, seed=11)
    assert sample_dimer_cover(g, seed=11) == a[0]
    covers = set(enumerate_dimer_covers(g))
    assert all(m in covers for m in a)


def test_sampler_conditionals_sum_to_one(corpus):
    g = corpus["grid3x4"]
    s = DimerSampler(g)
    opts = s.conditionals(s._root)
    assert sum(p for _, p in opts) == 1


def test_sampler_no_cover():
    with pytest.raises(NoPerfectMatching):
        DimerSampler(no_cover_graph())
