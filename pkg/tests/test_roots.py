from fractions import Fraction as F

import mpmath
import pytest

from gvalues.balls import ComplexBall, ball_det
from gvalues.qi import I, GaussianRational as G, QiPolynomial
from gvalues.roots import complex_roots, exact_root_candidate, krawczyk_contains_unique_root

from oracles import bisect_real as _bisect

X = QiPolynomial.X


def test_sqrt2_roots_match_bisection():
    roots = complex_roots(X**2 - 2)
    oracle = _bisect(lambda x: x * x - 2, 1, 2)
    assert len(roots) == 2
    neg = _bisect(lambda x: x * x - 2, -2, -1)
    assert roots[1].ball.contains(oracle) and roots[0].ball.contains(neg)


def test_unit_imaginary_roots():
    roots = complex_roots(X**2 + 1)
    assert {round(float(r.mid.imag)) for r in roots} == {-1, 1}
    assert all(r.ball.contains(G(0, s)) for r, s in zip(roots, (-1, 1)))


def test_quintic_real_root():
    Q = X**5 + X - F(1, 10)
    roots = complex_roots(Q)
    real = [r for r in roots if abs(r.mid.imag) <= r.rad]
    assert len(roots) == 5 and len(real) == 1
    oracle = _bisect(lambda x: x**5 + x - mpmath.mpf(1) / 10, 0, 1)
    assert real[0].ball.contains(oracle)
    assert abs(real[0].mid.real - mpmath.mpf("0.0999900049965")) < 1e-12


def test_multiplicity_is_reported():
    roots = complex_roots((X - 1) ** 2 * (X + I))
    mult = {round(float(r.mid.real)): r.multiplicity for r in roots}
    assert mult == {1: 2, 0: 1}


def test_krawczyk_and_exact_candidate():
    rb = complex_roots(X**2 - F(9, 4))[1]
    assert exact_root_candidate(X**2 - F(9, 4), rb) == G(F(3, 2))
    assert krawczyk_contains_unique_root(X**2 - 2, mpmath.mpf("1.41"), mpmath.mpf("0.01"))
    assert not krawczyk_contains_unique_root(X**2 - 2, mpmath.mpf(0), mpmath.mpf("0.1"))


def test_ball_arithmetic_encloses():
    a = ComplexBall(mpmath.mpf(1) / 3, mpmath.mpf(10) ** -30)
    b = a * 3 - 1
    assert b.contains(0)
    assert ball_det([[a, a], [a, a]]).contains(0)
    assert ComplexBall(2, 0).log().contains(mpmath.log(2))
