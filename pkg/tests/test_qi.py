from fractions import Fraction as F

import pytest

from gvalues.qi import I, ONE, ZERO, GaussianRational as G, QiPolynomial, RationalFunction, poly_derivative, poly_eval, poly_from_ints

X = QiPolynomial.X


def test_gaussian_field_ops():
    a = G(F(3, 2), -1)
    assert a * a.inverse() == ONE
    assert (a + a.conjugate()).im == 0
    assert I * I == G(-1)
    assert a.norm() == F(13, 4)
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@pytest.mark.parametrize(
    "p, z, want",
    [
        (X**2 - 2, G(F(3, 2)), G(F(1, 4))),
        (X**5 + X, ZERO, ZERO),
        (X**2 + 1, I, ZERO),
    ],
)
def test_poly_eval(p, z, want):
    assert poly_eval(p, z) == want


@pytest.mark.parametrize(
    "p, want",
    [
        (X**2 - 2, 2 * X),
        (QiPolynomial([G(5)]), QiPolynomial([])),
        (X**5 + X, 5 * X**4 + 1),
    ],
)
def test_derivative(p, want):
    assert poly_derivative(p) == want


def test_polynomial_division_and_gcd():
    p = (X - 1) * (X + I) ** 2
    q, r = p.divmod(X + I)
    assert r.is_zero() and q * (X + I) == p
    assert p.gcd(p.derivative()) == (X + I).monic()
    assert p.squarefree_decomposition() == [((X - 1).monic(), 1), ((X + I).monic(), 2)]


def test_taylor_shift_matches_composition():
    p = poly_from_ints([3, -1, 0, 2, 7]) + I * F(1, 3) * X**2
    c = G(F(-2, 5), F(1, 7))
    shifted = p.taylor_shift(c)
    for z in (ZERO, ONE, G(F(1, 3), 2)):
        assert shifted(z) == p(z + c)


def test_compose_power():
    assert (X**2 - 2).compose_power(3) == X**6 - 2


def test_rational_function_normalizes():
    r = RationalFunction(2 * X * (X - 1), 3 * (X - 1) * (X + 1))
    assert r.den == X + 1
    assert r.num == F(2, 3) * X
    assert r(G(1)) == G(F(1, 3))
