import math
import warnings
from dataclasses import replace
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gvalues.algroots import root_series_for
from gvalues.apery import (
    MuBoundInput,
    NoConclusion,
    apery_zeta3_sequences,
    denominator_growth,
    limit_check,
    mu_bound,
    partial_sum_pair,
    prefix_sums,
)
from gvalues.balls import ComplexBall
from gvalues.errors import ConsistencyViolation, RadiusTooSmall
from gvalues.logvalues import log_algebraic
from gvalues.qi import ONE, GaussianRational as G, QiPolynomial
from gvalues.series import GSeries, geometric, mul, scale

X = QiPolynomial.X


def _geometric_pair(N=64):
    U = geometric(G(F(1, 2)), N).with_radius(2.0)
    V = geometric(G(F(1, 3)), N).with_radius(3.0)
    return partial_sum_pair(U, V)


def test_geometric_pair():
    pair = _geometric_pair()
    assert pair.error_rate == 2.0 and pair.threshold == 0
    assert pair.target.contains(G(F(4, 3)))
    assert abs(complex(pair.a[-1].to_mpc()) - 2) < 1e-15
    assert abs(complex(pair.b[-1].to_mpc()) - 1.5) < 1e-15
    assert pair.a == tuple(pair.A_series.coeffs) and pair.b == tuple(pair.B_series.coeffs)
    report = limit_check(pair)
    assert report["pass"], report


def test_mismatched_target_fails():
    pair = _geometric_pair()
    bad = replace(pair, target=ComplexBall(G(F(5, 4))))
    report = limit_check(bad)
    assert not report["pass"]
    assert not {c["name"]: c["pass"] for c in report["checks"]}["normalized_error_bounded"]


def test_radius_too_small():
    with pytest.raises(RadiusTooSmall):
        partial_sum_pair(geometric(ONE, 16).with_radius(1.0), geometric(ONE, 16).with_radius(2.0))


def test_sqrt2_pair():
    rs = root_series_for(X**2 - 2, 20, 48)
    pair = partial_sum_pair(rs.phi, GSeries.from_polynomial(QiPolynomial([ONE]), 48))
    assert pair.error_rate == 289
    with mpmath.workprec(600):
        assert pair.target.contains(mpmath.sqrt(2))
    assert limit_check(pair)["pass"]


def test_log2_pair():
    real = log_algebraic(X - 2, ComplexBall(G(2)), 10, 48)
    U = None
    for s, _label in real.components:
        U = s if U is None else U + s
    U = scale(U, G(real.m)).with_radius(min(s.radius_hint for s, _ in real.components))
    pair = partial_sum_pair(U, GSeries.from_polynomial(QiPolynomial([ONE]), 48))
    assert abs(pair.a[-1].to_mpc() - mpmath.log(2)) < 1e-30
    assert pair.target.contains(mpmath.log(2))


def test_error_decay_matches_rate():
    pair = _geometric_pair(200)
    xi = F(4, 3)
    logs = [math.log(abs(float(a.re - xi * b.re))) for a, b in zip(pair.a, pair.b)]
    n = np.arange(100, 201)
    slope = np.polyfit(n, logs[100:], 1)[0]
    assert slope <= -math.log(pair.error_rate) + 0.05


def test_prefix_sum_duality_exact():
    f = GSeries.from_function(lambda n: G(F((-1) ** n * (n + 1), n * n + 3), F(1, n + 2)), 512)
    assert list(mul(f, geometric(ONE, 512)).coeffs) == prefix_sums(f.coeffs)


def test_denominator_growth_examples():
    xs, D = [], 1
    for n in range(1, 2001):
        D = math.lcm(D, n)
        xs.append(G(F(1, D**3)))
    assert 2.85 <= denominator_growth(xs) <= 3.15
    assert denominator_growth([G(F(1, 2**n)) for n in range(200)]) == pytest.approx(math.log(2), abs=1e-9)
    assert denominator_growth([G(n * n - 3) for n in range(200)]) == 0


def test_chebyshev_lcm():
    assert 0.9 <= math.log(math.lcm(*range(1, 2001))) / 2000 <= 1.05


def test_mu_bound_apery():
    s = math.sqrt(2)
    got = mu_bound(MuBoundInput(math.e**3, (1 + s) ** -4, (1 + s) ** 4))
    with mpmath.workprec(200):
        L = mpmath.log(1 + mpmath.sqrt(2))
        oracle = 1 + (3 + 4 * L) / (4 * L - 3)
    assert abs(got - float(oracle)) < 1e-10
    assert abs(got - 13.41782) < 1e-4


def test_mu_bound_edges():
    assert isinstance(mu_bound(MuBoundInput(2, 1, 2)), NoConclusion)
    assert mu_bound(MuBoundInput(2, 1, 4)) == 2.0
    with pytest.warns(ConsistencyViolation):
        mu_bound(MuBoundInput(1.5, 1, 4))
    with pytest.raises(ValueError):
        MuBoundInput(2, 3, 2)
    with pytest.raises(ValueError):
        MuBoundInput(0, 1, 2)


gaps = st.floats(0.01, 4, allow_nan=False)


# r < C < R, built multiplicatively so no example is filtered out
@given(r=st.floats(0.05, 5), x=gaps, y=gaps, dy=gaps)
def test_mu_bound_monotone_in_R(r, x, y, dy):
    C = r * math.exp(x)
    R1, R2 = C * math.exp(y), C * math.exp(y + dy)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConsistencyViolation)
        assert mu_bound(MuBoundInput(C, r, R2)) <= mu_bound(MuBoundInput(C, r, R1)) + 1e-12


@given(r=st.floats(0.05, 5), x=gaps, dx=gaps, y=gaps)
def test_mu_bound_monotone_in_C(r, x, dx, y):
    C1, C2 = r * math.exp(x), r * math.exp(x + dx)
    R = C2 * math.exp(y)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConsistencyViolation)
        assert mu_bound(MuBoundInput(C1, r, R)) <= mu_bound(MuBoundInput(C2, r, R)) + 1e-12


def test_apery_sequences():
    a, b = apery_zeta3_sequences(40)
    assert all(x.re.denominator == 1 for x in b)
    D = 1
    for n in range(1, 41):
        D = math.lcm(D, n)
        assert (2 * D**3 * a[n].re).denominator == 1
    ratio = a[40].re / b[40].re
    assert abs(mpmath.mpf(ratio.numerator) / ratio.denominator - mpmath.zeta(3)) < 1e-40
