from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dimerlab.corpus import make_c4, make_grid, make_k2, make_torus_grid
from dimerlab.errors import (
    BadRotation,
    NonPlanarEmbedding,
    NoPerfectMatching,
    NotBipartite,
    NotConnected,
    OddTorusSide,
    OddVertexCount,
)
from dimerlab.exact import rank_rational
from dimerlab.graph import (
    BLACK,
    WHITE,
    Edge,
    PlanarBipartiteGraph,
    Vertex,
    check_nondegenerate,
    cycle_dimension,
    face_schedule,
    spanning_tree,
    unused_edges,
)
from dimerlab.oracle import enumerate_dimer_covers


def test_c4_counts():
    g = make_c4()
    assert (g.n_vertices, g.n_edges, len(g.faces)) == (4, 4, 2)
    assert sorted(f.length for f in g.faces) == [4, 4]
    assert len(g.bounded_faces) == 1


def test_grid2x3_counts():
    g = make_grid(2, 3)
    assert (g.n_vertices, g.n_edges, len(g.faces)) == (6, 7, 3)
    assert g.faces[g.outer].length == 6
    assert [f.length for f in g.bounded_faces] == [4, 4]


def test_k2_single_doubled_face():
    g = make_k2()
    assert (g.n_vertices, g.n_edges, len(g.faces)) == (2, 1, 1)
    assert g.faces[0].length == 2
    assert cycle_dimension(g) == 0


@pytest.mark.parametrize("g, d", [(make_c4(), 1), (make_grid(2, 3), 2), (make_k2(), 0)])
def test_cycle_dimension(g, d):
    assert cycle_dimension(g) == d


def test_unused_edges(corpus):
    assert unused_edges(corpus["C4"]) == set()
    assert unused_edges(corpus["grid2x3"]) == set()
    deg = corpus["degenerate"]
    assert len(unused_edges(deg)) == 2
    for e in unused_edges(deg):
        assert deg.edges[e].name in {deg.edges[i].name for i in range(8, 10)}


def test_unused_edges_needs_cover():
    # middle edge of a 4-path is in no cover
    assert unused_edges(make_grid(1, 4)) == {1}
    star = PlanarBipartiteGraph(
        [Vertex("b", BLACK), Vertex("w1", WHITE), Vertex("w2", WHITE), Vertex("w3", WHITE), Vertex("b2", BLACK), Vertex("b3", BLACK)],
        [Edge("a", 0, 1), Edge("b", 0, 2), Edge("c", 0, 3), Edge("d", 4, 1), Edge("e", 5, 1)],
        [[0, 1, 2], [0, 3, 4], [1], [2], [3], [4]],
    )
    with pytest.raises(NoPerfectMatching):
        unused_edges(star)


def test_nondegeneracy(corpus):
    assert check_nondegenerate(corpus["C4"]).rank == 1
    assert check_nondegenerate(corpus["grid2x3"])
    r = check_nondegenerate(corpus["degenerate"])
    assert not r and r.rank == 2 and r.cycle_dimension == 3


def test_nondegenerate_matches_affine_hull(corpus):
    for name, g in corpus.items():
        covers = enumerate_dimer_covers(g)
        rows = [[(e in m) - (e in covers[0]) for e in range(g.n_edges)] for m in covers[1:]]
        rank = rank_rational(rows) if rows else 0
        assert bool(check_nondegenerate(g)) == (rank == cycle_dimension(g)), name


def test_constructors():
    assert make_grid(2, 2).n_edges == 4
    t = make_torus_grid(2)
    assert (t.n_vertices, t.n_edges, t.torus) == (4, 8, True)
    with pytest.raises(OddVertexCount):
        make_grid(3, 3)
    with pytest.raises(OddTorusSide):
        make_torus_grid(3)


def test_invariants_on_corpus(corpus):
    for g in corpus.values():
        assert g.n_vertices - g.n_edges + len(g.faces) == 2
        assert all(f.length % 2 == 0 for f in g.faces)
        darts = sorted(d for f in g.faces for d in f.darts)
        assert darts == list(range(2 * g.n_edges))
        for e in g.edges:
            assert g.vertices[e.black].color == BLACK and g.vertices[e.white].color == WHITE


def test_unused_matches_oracle(corpus):
    for g in corpus.values():
        used = set().union(*map(set, enumerate_dimer_covers(g)))
        assert unused_edges(g) == set(range(g.n_edges)) - used


def test_face_schedule_covers_non_tree_edges(corpus):
    for g in corpus.values():
        tree = spanning_tree(g)
        sched = face_schedule(g, tree)
        assert len(tree) == g.n_vertices - 1
        assert sorted(e for _, e in sched) == sorted(set(range(g.n_edges)) - set(tree))
        assert sorted(f for f, _ in sched) == sorted(f.index for f in g.bounded_faces)


def test_errors():
    with pytest.raises(NotBipartite):
        PlanarBipartiteGraph([Vertex("a", BLACK), Vertex("b", BLACK)], [Edge("e", 0, 1)], [[0], [0]])
    with pytest.raises(NotConnected):
        PlanarBipartiteGraph(
            [Vertex("a", BLACK), Vertex("b", WHITE), Vertex("c", BLACK), Vertex("d", WHITE)],
            [Edge("e", 0, 1), Edge("f", 2, 3)],
            [[0], [0], [1], [1]],
        )
    with pytest.raises(BadRotation):
        PlanarBipartiteGraph([Vertex("a", BLACK), Vertex("b", WHITE)], [Edge("e", 0, 1)], [[0], []])
    # K_{3,3} is not planar; any rotation system fails the Euler check
    vs = [Vertex(f"b{i}", BLACK) for i in range(3)] + [Vertex(f"w{i}", WHITE) for i in range(3)]
    es = [Edge(f"e{b}{w}", b, 3 + w) for b in range(3) for w in range(3)]
    rot = [[3 * b + w for w in range(3)] for b in range(3)] + [[3 * b + w for b in range(3)] for w in range(3)]
    with pytest.raises(NonPlanarEmbedding):
        PlanarBipartiteGraph(vs, es, rot)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(2, 5))
def test_grid_euler_and_dimension(rows, cols):
    if rows * cols % 2:
        with pytest.raises(OddVertexCount):
            make_grid(rows, cols)
        return
    g = make_grid(rows, cols)
    assert g.n_vertices - g.n_edges + len(g.faces) == 2
    assert cycle_dimension(g) == (rows - 1) * (cols - 1)
    assert all(f.length == 4 for f in g.bounded_faces)
    assert g.weights() == (Fraction(1),) * g.n_edges


def test_unused_edges_without_cover():
    vs = [Vertex("w0", WHITE), Vertex("w1", WHITE), Vertex("w2", WHITE), Vertex("b1", BLACK), Vertex("b2", BLACK), Vertex("b3", BLACK)]
    es = [Edge("a", 3, 0), Edge("b", 4, 0), Edge("c", 5, 0), Edge("d", 5, 1), Edge("e", 5, 2)]
    g = PlanarBipartiteGraph(vs, es, [[0, 1, 2], [3], [4], [0], [1], [2, 3, 4]])
    with pytest.raises(NoPerfectMatching):
        unused_edges(g)
    with pytest.raises(NoPerfectMatching):
        check_nondegenerate(g)
