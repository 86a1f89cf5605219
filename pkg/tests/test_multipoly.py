import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dlcurves.finite_field import GF
from dlcurves.multipoly import MultiPoly, ParseError, monomials_of_degree, parse_poly

F = GF(3, 3)
COORDS = ("t", "x", "y")

terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
    st.integers(1, F.order - 1), max_size=5)


def poly(d):
    return MultiPoly(F, COORDS, d)


@settings(max_examples=80, deadline=None)
@given(terms, terms, st.tuples(*[st.integers(0, F.order - 1)] * 3))
def test_ring_homomorphism(a, b, pt):
    f, g = poly(a), poly(b)
    assert (f * g).evaluate(pt) == F.mul(f.evaluate(pt), g.evaluate(pt))
    assert (f + g).evaluate(pt) == F.add(f.evaluate(pt), g.evaluate(pt))
    assert (f - f).is_zero()


@settings(max_examples=50, deadline=None)
@given(terms)
def test_power_uses_frobenius_correctly(a):
    f = poly(a)
    assert f ** 3 == f * f * f
    assert f ** 6 == (f * f) ** 3


def test_evaluate_many_matches_scalar():
    f = parse_poly("x^4*y + 2*t*y^3 - x", F, COORDS)
    pts = np.random.default_rng(0).integers(0, F.order, size=(50, 3))
    assert f.evaluate_many(pts).tolist() == [f.evaluate(tuple(map(int, p))) for p in pts]


def test_partial_derivative_drops_multiples_of_p():
    f = parse_poly("x^3*y + x^2 + t*x", F, COORDS)
    assert f.partial("x") == parse_poly("2*x + t", F, COORDS)
    assert f.partial("y") == parse_poly("x^3", F, COORDS)


def test_homogenize_roundtrip():
    f = parse_poly("x^2*y + x + 1", F, COORDS)
    h = f.homogenize("t")
    assert h.is_homogeneous() and h.degree() == 3
    assert h.dehomogenize("t") == f
    with pytest.raises(ValueError):
        f.homogenize("t", 2)


def test_canonical_scales_leading_coefficient():
    f = parse_poly("2*x^2 + y", F, COORDS)
    c = f.canonical()
    assert c.terms[c.leading_monomial()] == 1
    assert c == f.scale(F.inv(2))


def test_json_roundtrip():
    f = parse_poly("x^2*y + 2*t", F, COORDS)
    assert MultiPoly.from_json(F, f.to_json()) == f


def test_substitute():
    f = parse_poly("x*y + t", F, COORDS)
    V = MultiPoly.variables(F, COORDS)
    g = f.substitute({"t": V["t"], "x": V["y"], "y": V["x"] + V["t"]})
    assert g == parse_poly("y*x + y*t + t", F, COORDS)


def test_parse_constants_and_errors():
    f = parse_poly("x^(q0+1) + y^q0", F, COORDS, {"q0": 3})
    assert f == parse_poly("x^4 + y^3", F, COORDS)
    with pytest.raises(ParseError):
        parse_poly("x +* y", F, COORDS)
    with pytest.raises(ParseError):
        parse_poly("z", F, COORDS)


def test_monomial_count():
    from math import comb
    assert len(list(monomials_of_degree(14, 3))) == comb(16, 3)
