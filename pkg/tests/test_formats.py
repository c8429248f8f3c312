import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dimerlab.errors import BadRotation, GraphFormatError, NotBipartite
from dimerlab.formats import (
    format_graph,
    parse_graph,
    parse_rational,
    rational_json,
    read_matrix_connection,
    read_weights,
)
from dimerlab.kasteleyn import partition_function

C4_TEXT = """dimergraph v1
# a square
v b1 b
v w1 w
v b2 b
v w2 w
e e1 b1 w1 2
e e2 b2 w1 3/2
e e3 b2 w2 0.5
e e4 b1 w2
r b1 e1 e4
r w1 e2 e1
r b2 e2 e3
r w2 e4 e3
"""


def test_parse_c4():
    g = parse_graph(C4_TEXT)
    assert g.weights() == (2, Fraction(3, 2), Fraction(1, 2), 1)
    assert partition_function(g) == 2 * Fraction(1, 2) + Fraction(3, 2)


def test_round_trip(corpus):
    for g in corpus.values():
        h = parse_graph(format_graph(g))
        assert h.rotation == g.rotation and h.outer == g.outer
        assert [e.name for e in h.edges] == [e.name for e in g.edges]
        assert format_graph(h) == format_graph(g)


@given(st.fractions(max_denominator=1000))
def test_rational_round_trip(x):
    assert parse_rational(rational_json(x)["exact"]) == x


def test_parse_rational_decimal_is_exact():
    assert parse_rational("0.1") == Fraction(1, 10)
    with pytest.raises(GraphFormatError):
        parse_rational("1/0")


@pytest.mark.parametrize(
    "text, exc",
    [
        ("v a b\n", GraphFormatError),
        ("dimergraph v1\nv a b\nv c b\ne x a c\nr a x\nr c x\n", NotBipartite),
        ("dimergraph v1\nv a b\nv c w\ne x a c\nr a x\n", BadRotation),
        ("dimergraph v1\nv a b\nv c w\ne x a d\n", GraphFormatError),
        ("dimergraph v1\nfoo\n", GraphFormatError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_graph(text)


def test_weights_and_connection_files(tmp_path, corpus):
    g = corpus["C4"]
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"e2": "3/4"}))
    assert read_weights(p, g) == [1, Fraction(3, 4), 1, 1]
    p.write_text(json.dumps({"e9": 1}))
    with pytest.raises(GraphFormatError):
        read_weights(p, g)
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"e1": [["2", "1"], ["1", "1"]]}))
    phi = read_matrix_connection(c, g, 2)
    assert phi.mats[0] == ((2, 1), (1, 1))
    c.write_text(json.dumps({"e1": [[1, 0, 0], [0, 1, 0]]}))
    with pytest.raises(GraphFormatError):
        read_matrix_connection(c, g, 3)
