"""Arithmetic in R and the pairing lambda_R."""

import pytest
from hypothesis import given, strategies as st

from covkh.ring import ONE, X, XY, Y, Z, Monomial, RingElem, add_deg, lambda_R, parse as parse_ring, render

degs = st.tuples(st.integers(-5, 5), st.integers(-5, 5))
monos = st.builds(Monomial, st.integers(0, 1), st.integers(0, 1), st.integers(-4, 4))
elems = st.dictionaries(monos, st.integers(-3, 3), max_size=4).map(RingElem)


def test_lambda_formula():
    # X^{a'a} Y^{b'b} Z^{a'b - b'a}
    assert lambda_R((1, 2), (3, 4)) == Monomial(1, 0, -2)
    assert lambda_R((1, 0), (1, 0)) == X
    assert lambda_R((0, 1), (0, 1)) == Y
    assert lambda_R((1, 0), (0, 1)) == Z
    assert lambda_R((0, 1), (1, 0)) == Z.inverse()


def test_label_pairing_direct_evaluation():
    # deg v+ = (1, 0), deg v- = (0, -1)
    assert lambda_R((1, 0), (0, -1)) == Z.inverse()
    assert lambda_R((0, -1), (1, 0)) == Z


@given(degs, degs, degs)
def test_lambda_bimultiplicative(a, b, c):
    assert lambda_R(add_deg(a, b), c) == lambda_R(a, c) * lambda_R(b, c)
    assert lambda_R(a, add_deg(b, c)) == lambda_R(a, b) * lambda_R(a, c)


@given(degs, degs)
def test_lambda_antisymmetry(a, b):
    assert lambda_R(a, b) * lambda_R(b, a) == ONE
    assert lambda_R(a, b).inverse() == lambda_R(b, a)


@given(degs)
def test_lambda_zero_degree(a):
    assert lambda_R(a, (0, 0)) == ONE == lambda_R((0, 0), a)


def test_relations():
    assert X * X == ONE and Y * Y == ONE
    assert (Z ** 3) * (Z ** -3) == ONE
    assert XY == X * Y


@given(elems, elems, elems)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == RingElem()


@given(elems, st.sampled_from([(1, 1, 1), (1, -1, 1), (-1, -1, -1), (-1, 1, 1)]))
def test_specialisation_is_a_ring_map(a, spec):
    b = RingElem({X * Z: 2, Y: -1})
    assert (a * b).specialize(*spec) == a.specialize(*spec) * b.specialize(*spec)
    assert (a + b).specialize(*spec) == a.specialize(*spec) + b.specialize(*spec)


@given(elems)
def test_render_roundtrip(a):
    assert parse_ring(render(a)) == a


def test_render_examples():
    assert render(RingElem({X * Z: 1, Y * Z: 1})) == "Y*Z + X*Z"
    assert render(RingElem()) == "0"


def test_promote_rejects_garbage():
    with pytest.raises(TypeError):
        RingElem.promote("x")
