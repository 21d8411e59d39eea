import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from gvalues.errors import NonPolynomial, ParseError, SchemaError
from gvalues.ode import FuchsianODE, Path
from gvalues.parser import (
    gaussian_from_json,
    gaussian_to_json,
    ode_from_json,
    ode_to_json,
    parse_expr,
    parse_gaussian,
    parse_ode,
    parse_path,
    parse_poly,
    parse_rational,
    parse_series,
    path_to_json,
    poly_from_json,
    poly_to_json,
    series_from_json,
    series_to_csv,
    series_to_json,
    values_from_csv,
)
from gvalues.qi import I, GaussianRational as G, QiPolynomial, RationalFunction
from gvalues.series import GSeries

X = QiPolynomial.X


@pytest.mark.parametrize(
    "text, want",
    [
        ("X^2 - 2", X**2 - 2),
        ("X^5 + X - 1/10", X**5 + X - F(1, 10)),
        ("(3/2 + i)*X + 7", G(F(3, 2), 1) * X + 7),
        ("-(x - 1)^3", -((X - 1) ** 3)),
        ("2*z*(z+i)/4", F(1, 2) * X * (X + I)),
    ],
)
def test_parse_poly(text, want):
    assert parse_poly(text) == want


def test_operator_precedence():
    assert parse_poly("-X^2") == -(X**2)
    assert parse_poly("(2^3)^2") == QiPolynomial([G(64)])
    with pytest.raises(ParseError):
        parse_poly("2^3^2")
    assert parse_poly("1 - 2 - 3") == QiPolynomial([G(-4)])
    assert parse_gaussian("(1+i)^2") == G(0, 2)


def test_rational_expression():
    assert parse_rational("(X^2-1)/(X-1)") == RationalFunction(X + 1, QiPolynomial([G(1)]))


@pytest.mark.parametrize(
    "text, exc, span",
    [
        ("X^-1", NonPolynomial, None),
        ("1/X", NonPolynomial, None),
        ("X^X", NonPolynomial, None),
        ("0.5*X", ParseError, (0, 3)),
        ("X +* 2", ParseError, None),
        ("(X + 1", ParseError, None),
    ],
)
def test_parse_errors(text, exc, span):
    with pytest.raises(exc) as info:
        parse_poly(text)
    if span is not None:
        assert info.value.span == span
    start, end = info.value.span
    assert 0 <= start <= end <= len(text)


def test_parse_expr_spans():
    node = parse_expr("  X + 1")
    assert node.span == (2, 7)


def test_parse_ode_examples():
    ode = parse_ode("(1+X^2)*y'' + 2*X*y' = 0")
    assert ode.order == 2
    assert ode.coeffs[1] == RationalFunction(2 * X, 1 + X**2)
    assert ode.coeffs[0].is_zero()
    first = parse_ode("y' = 0")
    assert first.order == 1 and first.coeffs[0].is_zero()


def test_parse_ode_rejects():
    for bad in ("y = 0", "y'' + 1 = 0", "y' + y = 1", "y' y = 0"):
        with pytest.raises(ParseError):
            parse_ode(bad)


def test_ode_json_round_trip():
    ode = parse_ode("(1-X)*y'' - y' + X^2*y = 0")
    again = parse_ode(json.dumps(ode_to_json(ode)))
    assert again == ode


def test_path_round_trip():
    p = Path((G(0), G(1, 1), G(F(1, 2))), "above +i")
    assert parse_path(path_to_json(p)) == p


def test_schema_errors_name_the_field():
    good = series_to_json(GSeries.from_coeffs([1, 2, 3]))
    bad = dict(good, coeffs=[{"re": ["1", "0"], "im": ["0", "1"]}])
    with pytest.raises(SchemaError) as info:
        series_from_json(bad)
    assert "coeffs[0]" in str(info.value)
    with pytest.raises(SchemaError):
        parse_series('{"schema": "gvalues.poly/1"}')
    with pytest.raises(SchemaError):
        parse_series("{not json")


def test_csv_exports():
    f = GSeries.from_coeffs([G(F(1, 2), -3), 0, G(F(-7, 5))])
    assert values_from_csv(series_to_csv(f)) == list(f.coeffs)
    assert values_from_csv("n,a\n0,1/3\n1,2\n", "a") == [G(F(1, 3)), G(2)]
    assert values_from_csv("0.5\n0.25\n") == [0.5, 0.25]
    with pytest.raises(SchemaError):
        values_from_csv("0.5\n", exact=True)


rat = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**12)
gauss = st.builds(G, rat, rat)
radius = st.one_of(st.none(), st.floats(0.5, 1e6), st.just(float("inf")))


@given(g=gauss)
def test_gaussian_round_trip(g):
    assert gaussian_from_json(json.loads(json.dumps(gaussian_to_json(g)))) == g


@given(cs=st.lists(gauss, max_size=8))
def test_poly_round_trip(cs):
    p = QiPolynomial(cs)
    assert poly_from_json(json.loads(json.dumps(poly_to_json(p)))) == p


@given(cs=st.lists(gauss, min_size=1, max_size=12), r=radius)
def test_series_round_trip(cs, r):
    f = GSeries(tuple(cs), r, None)
    back = parse_series(json.dumps(series_to_json(f)))
    assert back.coeffs == f.coeffs and back.radius_hint == f.radius_hint


@given(cs=st.lists(gauss, min_size=1, max_size=6))
def test_poly_text_round_trip(cs):
    p = QiPolynomial(cs)
    text = " + ".join(f"({c.re.numerator}/{c.re.denominator} + ({c.im.numerator}/{c.im.denominator})*i)*X^{k}" for k, c in enumerate(p.coeffs)) or "0"
    assert parse_poly(text) == p
