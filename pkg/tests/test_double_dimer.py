import math

import pytest
from hypothesis import given, settings, strategies as st

from dimerlab.corpus import make_c4, make_grid, make_k2, make_torus_grid
from dimerlab.double_dimer import (
    CLOSED_FORMS,
    face_monodromies,
    magnetic_oracle,
    magnetic_partition,
    q_connection,
    q_exponents,
    verify_magnetic_identity,
    z2_coupling,
    z2_coupling_2d,
    z2_loop_density,
    z2_loops_per_face,
    z2_pair_probability,
)
from dimerlab.errors import BadParity, SharedVertex, TorusGraph, UnsupportedArea
from dimerlab.exact import LaurentPoly
from dimerlab.kasteleyn import partition_function
from dimerlab.psi import face_weights

q = LaurentPoly.monomial(1)
PI = math.pi


def test_q_connection_examples():
    assert q_exponents(make_k2()) == (0,)
    assert sorted(map(abs, q_exponents(make_c4()))) == [0, 0, 0, 1]
    g = make_grid(2, 3)
    X = face_weights(g, q_connection(g))
    assert set(X.values()) in ({q}, {q.invert_variable()})
    assert set(face_monodromies(g, q_exponents(g)).values()) == {q}
    with pytest.raises(TorusGraph):
        q_exponents(make_torus_grid(2))


def test_magnetic_examples(corpus):
    assert magnetic_partition(make_k2()) == 1
    c4 = magnetic_partition(make_c4())
    assert c4 == q + 2 + q.invert_variable()
    assert magnetic_partition(corpus["grid2x3"]) == magnetic_oracle(corpus["grid2x3"])


@pytest.mark.parametrize("name", ["C4", "grid2x3", "grid2x4", "grid4x4", "annulus_w2", "cube"])
def test_magnetic_identity(corpus, name):
    g = corpus[name]
    ok, lhs, rhs = verify_magnetic_identity(g)
    assert ok and lhs == rhs
    assert lhs.is_palindromic()
    assert lhs(1) == partition_function(g) ** 2


@settings(max_examples=10, deadline=None)
@given(st.lists(st.fractions(min_value="1/5", max_value=5, max_denominator=5), min_size=7, max_size=7))
def test_magnetic_identity_weighted(w):
    assert verify_magnetic_identity(make_grid(2, 3), w)[0]


def test_coupling():
    assert abs(abs(z2_coupling(1, 0)) - 0.25) < 1e-12
    for x, y in [(1, 0), (2, 1), (3, 0), (3, 2), (1, 4)]:
        v = abs(z2_coupling(x, y))
        for a, b in [(y, x), (-x, y), (x, -y), (-y, -x)]:
            assert abs(abs(z2_coupling(a, b)) - v) < 1e-12
    assert abs(z2_coupling(3, 0) - z2_coupling_2d(3, 0)) < 1e-8
    with pytest.raises(BadParity):
        z2_coupling(1, 1)


def test_pair_probability():
    assert abs(z2_pair_probability([((0, 0), (1, 0))]) - 0.25) < 1e-12
    assert abs(z2_pair_probability([((0, 0), (1, 0)), ((0, 1), (1, 1))]) - 1 / 8) < 1e-8
    assert abs(z2_pair_probability([((0, 0), (1, 0)), ((20, 1), (21, 1))]) - 1 / 16) < 1e-3
    with pytest.raises(SharedVertex):
        z2_pair_probability([((0, 0), (1, 0)), ((1, 0), (2, 0))])


def test_densities_area_1_and_2():
    assert abs(z2_loop_density(1) - 1 / 32) <= 1e-8
    assert abs(z2_loop_density(2) - (PI - 1) ** 2 / (2 * PI**4)) <= 1e-6
    assert abs(z2_loop_density(3) - CLOSED_FORMS[3]["derived"][1]) <= 1e-10
    with pytest.raises(UnsupportedArea):
        z2_loop_density(4)


def test_density_is_area_times_loops_per_face():
    for k in (1, 2, 3):
        assert z2_loop_density(k) == k * z2_loops_per_face(k)
