from fractions import Fraction

import pytest
from hypothesis import given

from cremona.fields import GF, QQ
from cremona.grammar import (
    ParseError,
    format_point,
    format_poly,
    format_tuple,
    parse_family,
    parse_point,
    parse_poly,
    parse_tuple,
)
from cremona.families import example31_family, nodal_cubic_family
from cremona.polyring import HomogeneousPoly
from conftest import polys


def test_basic_forms():
    p = parse_poly("x0*(x2+x0)", QQ, 3)
    assert p.terms == {(2, 0, 0): 1, (1, 0, 1): 1}
    assert parse_poly("3/2 x0^2 - x1 x2", QQ, 3) == parse_poly("(3/2)*x0^2 + -1*x1*x2", QQ, 3)
    assert parse_poly("-(x0 - x1)", QQ, 2) == parse_poly("x1 - x0", QQ, 2)
    assert parse_poly("0", QQ, 3).is_zero()


def test_field_reduction():
    assert parse_poly("3*x0 + 1/2*x1", GF(5), 2).terms == {(1, 0): 3, (0, 1): 3}


def test_printing():
    p = parse_poly("x0^2 - 2/3*x0*x1 + x2^2", QQ, 3)
    assert format_poly(p) == "x0^2 - 2/3*x0*x1 + x2^2"
    assert format_poly(HomogeneousPoly.zero(QQ, 3, 2)) == "0"
    t = parse_tuple("[x1*x2 : x0*x2 : x0*x1]", QQ, 2)
    assert str(t) == "[x1*x2 : x0*x2 : x0*x1]"


@pytest.mark.parametrize("text, token", [
    ("x0 + y1", "y"),
    ("x0 + x3", "x3"),
    ("x0^2 + x1", None),
    ("(x0 + x1", None),
    ("x0 ** 2", None),
    ("x0 + 1/0", None),
])
def test_parse_errors(text, token):
    with pytest.raises(ParseError) as exc:
        parse_poly(text, QQ, 3)
    if token:
        assert token in str(exc.value)


@pytest.mark.parametrize("text", [
    "x0 : x1",
    "[x0 : x1]",
    "[x0 : x1 : x2] junk",
    "[x0 : x1^2 : x2]",
    "[0 : 0 : 0]",
    "[x0 :  : x2]",
])
def test_tuple_errors(text):
    with pytest.raises(ParseError):
        parse_tuple(text, QQ, 2)


@given(polys(nvars=4))
def test_poly_round_trip(p):
    q = parse_poly(format_poly(p), QQ, 4)
    assert q.terms == p.terms


@given(polys(nvars=3, field=GF(7)))
def test_poly_round_trip_mod_7(p):
    assert parse_poly(format_poly(p), GF(7), 3).terms == p.terms


def test_family_round_trip():
    for F in (example31_family(2), nodal_cubic_family(2), example31_family(3)):
        G = parse_family(str(F), QQ, F.n)
        assert G.components == F.components
        assert G.constraints == F.constraints
        assert (G.d, G.param_degree) == (F.d, F.param_degree)


def test_family_text():
    F = parse_family("[x0*a0 : x1*a1] over {a0 - a1} params (a0..a1)", QQ, 1)
    assert F.nparams == 2 and F.d == 1 and F.param_degree == 1
    with pytest.raises(ParseError):
        parse_family("[x0*a0 : x1*a1] over {x0} params (a0..a1)", QQ, 1)
    with pytest.raises(ParseError):
        parse_family("[x0*a0 : x1*a1]", QQ, 1)


def test_points():
    assert parse_point("1:2:3", QQ) == (1, 2, 3)
    assert parse_point("(1/2, 0, -1)", QQ) == (Fraction(1, 2), 0, -1)
    assert format_point((Fraction(1, 2), 0, Fraction(-1)), QQ) == "(1/2:0:-1)"
    with pytest.raises(ParseError):
        parse_point("1:2", QQ, 3)
    with pytest.raises(ParseError):
        parse_point("1:z:3", QQ)
    assert format_tuple(parse_tuple("[x0 : x1]", GF(3), 1).components) == "[x0 : x1]"
