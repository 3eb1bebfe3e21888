from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eddeg.errors import PolySyntaxError, RingMismatch, UnknownVariable
from eddeg.fields import GF
from eddeg.poly import DEGREVLEX, LEX, MonomialOrder, PolyRing, Polynomial, block, determinant, diff, parse_poly, read_poly_lines, substitute

R = PolyRing(["x", "y", "z"])
x, y, z = R.gens()


def test_parse_parabola():
    f = parse_poly("y - x^2", ["x", "y"])
    assert dict(f.terms) == {(0, 1): 1, (2, 0): -1}


def test_parse_zero():
    f = parse_poly("0", ["x"])
    assert f.is_zero()
    assert str(f) == "0"


def test_parse_cubic():
    f = parse_poly("x*(x+1)*y - 1", ["x", "y"])
    g = parse_poly("x^2*y + x*y - 1", ["x", "y"])
    assert f == g
    assert str(f) == "x^2*y + x*y - 1"


def test_parse_rational_literals_and_unary_minus():
    f = parse_poly("-3/4*x^2 + (x - 1/2)^2", ["x"])
    assert f == parse_poly("1/4*x^2 - x + 1/4", ["x"])


@pytest.mark.parametrize("text", ["2x", "x y", "x^y", "x^2^3", "(x + 1", "x +", "x ** 2", "1/0", "x / y"])
def test_parse_errors(text):
    with pytest.raises((PolySyntaxError, ZeroDivisionError)):
        parse_poly(text, ["x", "y"])


def test_parse_error_reports_position():
    with pytest.raises(PolySyntaxError) as info:
        parse_poly("x + 2y", ["x", "y"])
    assert info.value.position == 5


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse_poly("x + w", ["x", "y"])


def test_diff_examples():
    R2 = PolyRing(["x", "y"])
    assert diff(R2.parse("y - x^2"), "x") == R2.parse("-2*x")
    assert diff(R2.parse("x"), "y").is_zero()
    assert diff(R2.parse("x^2*y + x*y - 1"), "x") == R2.parse("2*x*y + y")
    with pytest.raises(UnknownVariable):
        diff(R2.parse("x"), "w")


def test_substitute_examples():
    R2 = PolyRing(["x", "y"])
    T = PolyRing(["t"])
    t = T.gen("t")
    assert substitute(R2.parse("y - x^2"), {"x": t, "y": t ** 2}, T).is_zero()
    assert substitute(R2.parse("x + y"), {"x": 1, "y": 2}) == R2.constant(3)


def test_substitute_affine_equation_at_point():
    # a linear form sum(beta_i z_i) - beta_0 evaluated at z = point leaves the residual constant
    R3 = PolyRing(["z1", "z2", "z3"])
    f = R3.parse("2*z1 - 3*z2 + 5*z3 - 7")
    assert f.substitute({"z1": 1, "z2": 1, "z3": 1}) == R3.constant(-3)
    assert f.substitute({"z1": 0, "z2": 0, "z3": 0}) == R3.constant(-7)


def test_ring_mismatch():
    other = PolyRing(["x", "y"])
    with pytest.raises(RingMismatch):
        x + other.gen("x")
    with pytest.raises(RingMismatch):
        R.parse("x") * PolyRing(["x", "y", "z"], GF(7)).gen("x")


def test_embed_by_name():
    big = PolyRing(["w", "z", "y", "x"])
    assert (x * y + z).embed(big) == big.parse("x*y + z")


def test_change_field():
    f = R.parse("1/2*x + 3")
    g = f.change_field(GF(7))
    assert g.coefficient((1, 0, 0)) == 4
    assert g.coefficient((0, 0, 0)) == 3


def test_orders():
    assert (x ** 2).leading_monomial(DEGREVLEX) == (2, 0, 0)
    f = x * z + y ** 2
    assert f.leading_monomial(DEGREVLEX) == (0, 2, 0)
    assert f.leading_monomial(LEX) == (1, 0, 1)
    g = y ** 3 + x
    assert g.leading_monomial(block(1)) == (1, 0, 0)
    assert MonomialOrder.parse("block(2)") == block(2)
    assert MonomialOrder.parse("lex") == LEX


def test_determinant():
    R2 = PolyRing(["a", "b"])
    a, b = R2.gens()
    assert determinant([[a, b], [b, a]], R2) == a ** 2 - b ** 2


def test_read_poly_lines_skips_comments():
    lines = list(read_poly_lines("# header\n\nx + 1\n  # note\ny\n"))
    assert [l for _, l in lines] == ["x + 1", "y"]


# -- properties ----------------------------------------------------------------

coeffs = st.integers(-20, 20).map(Fraction) | st.fractions(max_denominator=9, min_value=-5, max_value=5)
monos = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monos, coeffs, max_size=6).map(lambda d: Polynomial(R, d))

names = st.sampled_from(["x", "y", "z"])


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f + g == g + f
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert f - f == R.zero
    assert f * R.one == f


@settings(max_examples=60, deadline=None)
@given(polys, polys, names)
def test_leibniz(f, g, v):
    assert (f * g).diff(v) == f * g.diff(v) + g * f.diff(v)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, polys)
def test_substitute_is_homomorphism(f, g, a, b):
    T = PolyRing(["s", "t"])
    s, t = T.gens()
    assignment = {"x": s + t, "y": s * t - 1, "z": t ** 2}
    assert substitute(f * g, assignment, T) == substitute(f, assignment, T) * substitute(g, assignment, T)
    assert substitute(f + g, assignment, T) == substitute(f, assignment, T) + substitute(g, assignment, T)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_parse_print_round_trip(f):
    assert R.parse(str(f)) == f
    assert str(R.parse(str(f))) == str(f)


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_reduction_mod_p_commutes(f, g):
    F = GF(10007)
    assert (f * g).change_field(F) == f.change_field(F) * g.change_field(F)
    assert (f - g).change_field(F) == f.change_field(F) - g.change_field(F)
