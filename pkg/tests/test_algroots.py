import math
from dataclasses import replace
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st

from gvalues.algroots import (
    build_root_series,
    certified_radius,
    lagrange_coefficients,
    lagrange_coefficients_explicit,
    power_structure,
    root_series_for,
    verify_functional_equation,
)
from gvalues.balls import ComplexBall
from gvalues.errors import DegenerateWitness
from gvalues.qi import ZERO, GaussianRational as G, QiPolynomial
from gvalues.roots import complex_roots
from gvalues.series import GSeries

from oracles import inverse_by_undetermined_coefficients

X = QiPolynomial.X


def test_linear_polynomial():
    assert lagrange_coefficients(2 * X - 1, ZERO, 6) == [G(F(1, 2))] + [ZERO] * 5


def test_root_witness_gives_constant():
    assert all(c.is_zero() for c in lagrange_coefficients(X**2 - 1, G(1), 8))


def test_sqrt2_first_coefficients():
    phi = lagrange_coefficients(X**2 - 2, G(F(3, 2)), 2)
    assert phi == [G(F(-1, 12)), G(F(-1, 432))]


def test_degenerate_witness():
    with pytest.raises(DegenerateWitness):
        lagrange_coefficients(X**2 - 2, ZERO, 4)


@pytest.mark.parametrize(
    "Q, u",
    [
        (X**2 - 2, G(F(17, 12))),
        (X**5 + X - F(1, 10), G(F(1, 10))),
        (X**3 - G(1, 1), G(F(11, 10), F(1, 5))),
        (X**2 + X + 1, G(F(-1, 2), F(7, 8))),
        (3 * X**4 - G(0, 2) * X + F(5, 7), G(F(1, 3), F(-1, 2))),
    ],
)
def test_matches_undetermined_coefficients(Q, u):
    n = 14
    assert [u] + lagrange_coefficients(Q, u, n) == inverse_by_undetermined_coefficients(Q, u, n)
    assert lagrange_coefficients(Q, u, n) == lagrange_coefficients_explicit(Q, u, n)


def test_power_structure():
    assert power_structure(X**6 - 2) == (6, X - 2)
    assert power_structure(X**4 + 3 * X**2 + 1) == (2, X**2 + 3 * X + 1)
    assert power_structure(X**3 + X)[0] == 1


@pytest.mark.parametrize(
    "Q, u, want",
    [
        (X**2 - 2, G(F(3, 2)), F(9)),
        (X**2 - 2, G(F(17, 12)), F(289)),
        (X**2 - 2, G(F(7, 5)), F(49)),
    ],
)
def test_certified_radius_exact(Q, u, want):
    assert certified_radius(Q, u) == want


def test_certified_radius_linear():
    assert math.isinf(float(certified_radius(2 * X - 1, G(5))))


def test_certified_radius_against_coefficient_growth():
    # 1/radius is the limsup of |phi_n|^(1/n)
    Q, u = X**3 - 2 * X + G(1, 1), G(F(1, 2), F(1, 3))
    r = float(certified_radius(Q, u))
    phi = lagrange_coefficients(Q, u, 400)
    est = 1 / abs(complex(phi[-1].to_mpc())) ** (1 / 400)
    assert est == pytest.approx(r, rel=0.05)


def _sqrt2_ball():
    return complex_roots(X**2 - 2)[1].ball


def test_witness_for_R8():
    rs = build_root_series(X**2 - 2, _sqrt2_ball(), 8, 24)
    assert rs.u == G(F(3, 2)) and rs.radius_exact == 9


def test_witness_for_R20():
    rs = build_root_series(X**2 - 2, _sqrt2_ball(), 20, 24)
    assert rs.u == G(F(17, 12)) and rs.radius_exact == 289
    assert rs.value.contains(mpmath.sqrt(2)) and rs.value.rad < 1e-30


def test_linear_root_series():
    rs = build_root_series(2 * X - 1, ComplexBall(G(F(1, 2))), 4, 8)
    assert rs.u == ZERO and math.isinf(float(rs.radius_exact))
    assert rs.phi.coeffs[:3] == (ZERO, G(F(1, 2)), ZERO)
    assert rs.value.contains(G(F(1, 2)))


@pytest.mark.parametrize("method", ["scaled", "direct"])
def test_functional_equation(method):
    rs = root_series_for(X**2 - 2, 20, 40)
    assert verify_functional_equation(rs, method)
    bad = list(rs.phi.coeffs)
    bad[7] = bad[7] + G(F(1, 10**6))
    broken = replace(rs, phi=GSeries(tuple(bad), rs.phi.radius_hint, "z"))
    assert not verify_functional_equation(broken, method)


def test_functional_equation_constant_phi():
    rs = build_root_series(X**2 - 1, ComplexBall(G(1)), 4, 12)
    assert rs.u == G(1)
    assert verify_functional_equation(rs) and verify_functional_equation(rs, "direct")


def test_eisenstein_quintic_value():
    from oracles import eisenstein_quintic

    rs = root_series_for(X**5 + X - F(1, 10), 10, 40, near=0.1)
    assert abs(rs.value.mid - eisenstein_quintic(F(1, 10), 10)) < 1e-12


small = st.fractions(min_value=-3, max_value=3, max_denominator=7)


@given(
    coeffs=st.lists(st.tuples(small, small), min_size=2, max_size=5),
    u=st.tuples(small, small),
)
def test_lagrange_routes_agree(coeffs, u):
    Q = QiPolynomial([G(a, b) for a, b in coeffs])
    u = G(*u)
    if Q.degree() < 1 or Q.derivative()(u).is_zero():
        return
    fast = lagrange_coefficients(Q, u, 10)
    assert [u] + fast == inverse_by_undetermined_coefficients(Q, u, 10)
