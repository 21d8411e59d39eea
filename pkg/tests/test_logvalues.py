from fractions import Fraction as F

import mpmath
import pytest

from gvalues.balls import ComplexBall
from gvalues.errors import BranchCut, InadmissibleWitness
from gvalues.logvalues import exp_consistent, log_algebraic, log_gaussian_rational, series_log1p
from gvalues.qi import ONE, ZERO, GaussianRational as G, QiPolynomial
from gvalues.roots import complex_roots
from gvalues.series import GSeries, evaluate, scale

X = QiPolynomial.X
N = 24
log1p = GSeries.from_function(lambda n: 0 if n == 0 else F((-1) ** (n - 1), n), N)


def test_log1p_of_z():
    assert series_log1p(GSeries.from_coeffs([0, 1], order=N)).coeffs == log1p.coeffs


def test_log1p_of_minus_z():
    assert series_log1p(GSeries.from_coeffs([0, -1], order=N)).coeffs == tuple(
        G(0) if n == 0 else G(F(-1, n)) for n in range(N + 1)
    )


def test_log1p_of_square():
    assert series_log1p(GSeries.from_coeffs([0, 2, 1], order=N)).coeffs == scale(log1p, G(2)).coeffs


def _value(series):
    total = ComplexBall(0, 0)
    for s in series:
        total = total + evaluate(s, ONE)
    return total


def test_log_gaussian_rational_one():
    parts = log_gaussian_rational(ONE, 4, N)
    assert all(p.is_zero() for p in parts)


@pytest.mark.parametrize(
    "u, R",
    [(G(1, F(1, 10)), 9), (G(F(99, 100)), 50), (G(F(21, 20), F(-1, 20)), 9)],
)
def test_log_gaussian_rational_values(u, R):
    v = _value(log_gaussian_rational(u, R, 96))
    with mpmath.workprec(512):
        oracle = mpmath.log(mpmath.mpc(mpmath.mpf(u.re.numerator) / u.re.denominator, mpmath.mpf(u.im.numerator) / u.im.denominator))
    assert v.contains(oracle)
    assert v.rad < 1e-40


def test_log_gaussian_rational_spot_values():
    assert abs(_value(log_gaussian_rational(G(1, F(1, 10)), 9, 48)).mid - mpmath.mpc("0.00497517", "0.09966865")) < 1e-8
    assert abs(_value(log_gaussian_rational(G(F(99, 100)), 50, 48)).mid - mpmath.mpf("-0.01005034")) < 1e-8


def test_log_gaussian_rational_rejects():
    with pytest.raises(InadmissibleWitness):
        log_gaussian_rational(G(-1), 2, N)
    with pytest.raises(InadmissibleWitness):
        log_gaussian_rational(G(F(3, 2)), 2, N)


def test_log_of_one():
    r = log_algebraic(X - 1, ComplexBall(G(1)), 10, 16)
    assert r.value.contains(0)


def test_log_two():
    alpha = ComplexBall(G(2))
    r = log_algebraic(X - 2, alpha, 10, 64)
    assert r.value.contains(mpmath.log(2))
    assert abs(r.value.mid - mpmath.log(2)) < 1e-20
    assert exp_consistent(r, alpha)


def test_log_sqrt2_is_half_log2():
    two = log_algebraic(X - 2, ComplexBall(G(2)), 10, 64)
    root = complex_roots(X**2 - 2)[1]
    half = log_algebraic(X**2 - 2, root, 10, 64)
    assert abs(half.value.mid - two.value.mid / 2) <= half.value.rad + two.value.rad / 2 + mpmath.mpf(2) ** -200
    assert exp_consistent(half, root)


def test_log_complex_root():
    root = [r for r in complex_roots(X**2 + 1) if r.mid.imag > 0][0]
    res = log_algebraic(X**2 + 1, root, 4, 48)
    assert res.value.contains(mpmath.mpc(0, mpmath.pi / 2))


def test_branch_cut():
    with pytest.raises(BranchCut):
        log_algebraic(X + 2, ComplexBall(G(-2)), 4, 16)
    with pytest.raises(BranchCut):
        log_algebraic(X, ComplexBall(ZERO), 4, 16)
