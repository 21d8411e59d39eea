import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st

from gvalues.asymptotics import (
    AmplitudeSystem,
    SingularProfile,
    amplitude_det,
    fit_profile,
    predict_coeffs,
    recover_amplitudes,
)
from gvalues.balls import ComplexBall
from gvalues.errors import DegenerateGamma, NearSingular, OscillationUnresolved
from gvalues.qi import I, ONE, GaussianRational as G


def central(n):
    return mpmath.mpf(math.comb(2 * n, n)) / mpmath.mpf(4) ** n


BINOMIAL = [central(n) for n in range(2001)]


def test_predict_inverse_sqrt():
    p = SingularProfile(1, 0, F(-1, 2), ((1, 1),))
    (v,) = predict_coeffs(p, [100])
    assert abs(v.mid - 1 / mpmath.sqrt(100 * mpmath.pi)) < 1e-12
    rel = abs(v.mid - BINOMIAL[100]) / BINOMIAL[100]
    assert rel == pytest.approx(1 / 800, rel=0.02)


def test_predict_relative_error_over_range():
    p = SingularProfile(1, 0, F(-1, 2))
    ns = range(50, 2001)
    for n, v in zip(ns, predict_coeffs(p, ns)):
        assert abs(v.mid - BINOMIAL[n]) / BINOMIAL[n] < 2 / n


def test_predict_two_fronts_exact():
    p = SingularProfile(1, 0, -1, ((1, F(1, 2)), (-1, F(1, 2))))
    for n, v in zip(range(2, 12), predict_coeffs(p, range(2, 12))):
        assert v.contains((1 + (-1) ** n) / 2)


def test_predict_geometric():
    p = SingularProfile(2, 0, -1, ((1, 1),))
    for n, v in zip(range(2, 40), predict_coeffs(p, range(2, 40))):
        assert v.contains(mpmath.mpf(2) ** -n)


@pytest.mark.parametrize("tau", [0, 1, F(3)])
def test_degenerate_gamma(tau):
    with pytest.raises(DegenerateGamma):
        predict_coeffs(SingularProfile(1, 1, tau), range(2, 5))


def test_profile_validation():
    with pytest.raises(ValueError):
        SingularProfile(1, 0, F(-1, 2), ((2, 1),))
    with pytest.raises(ValueError):
        SingularProfile(1, 0, F(-1, 2), ((1, 1), (1, 2)))


def test_fit_binomial():
    p = fit_profile(BINOMIAL)
    assert abs(p.rho - 1) < 1e-3 and abs(p.tau + 0.5) < 0.02 and p.sigma == 0


def test_fit_simple_sequences():
    p = fit_profile([n + 1 for n in range(2001)])
    assert abs(p.rho - 1) < 1e-3 and abs(p.tau + 2) < 0.02
    p = fit_profile([F(1, 3**n) for n in range(2001)])
    assert abs(p.rho - 3) < 3e-3 and abs(p.tau + 1) < 0.02


def test_fit_refuses_interfering_fronts():
    coeffs = [(1 + (-1) ** n) / 2 * (n + 1) for n in range(1024)]
    with pytest.raises(OscillationUnresolved):
        fit_profile(coeffs)


def test_fit_with_candidates():
    coeffs = [mpmath.mpf(2 + (-1) ** n) for n in range(1024)]
    p = fit_profile(coeffs, candidates=[1, -1])
    amps = {round(float(z.mid.real)): complex(c.mid) for z, c in p.fronts}
    assert amps[1] == pytest.approx(2, rel=0.05) and amps[-1] == pytest.approx(1, rel=0.05)


@pytest.mark.parametrize("tau", [F(-1, 2), F(-3, 2), F(-2)])
def test_predict_fit_consistency(tau):
    p = SingularProfile(1, 0, tau)
    coeffs = [ComplexBall(0, 0)] * 2 + predict_coeffs(p, range(2, 2001))
    fitted = fit_profile(coeffs[2:])
    assert abs(fitted.rho - 1) < 1e-3 and abs(fitted.tau - float(tau)) < 0.02


def test_ratio_transfer():
    xi = mpmath.mpf(3) / 7
    b = BINOMIAL[1:]
    a = [xi * x * (1 + mpmath.mpf(1) / n) for n, x in enumerate(b, start=1)]
    pa, pb = fit_profile(a, candidates=[1]), fit_profile(b, candidates=[1])
    assert pa.sigma == pb.sigma
    assert abs(pa.rho - pb.rho) < 1e-3 and abs(pa.tau - pb.tau) < 0.02
    ratio = complex(pa.fronts[0][1].mid / pb.fronts[0][1].mid)
    assert abs(ratio - float(xi)) < 0.01 * float(xi)


FOURTH = (ONE, G(-1), I, -I)


def test_vandermonde_determinant_modulus_constant():
    d0 = amplitude_det(FOURTH, 0)
    assert not d0.is_zero()
    for n in range(51):
        assert amplitude_det(FOURTH, n).norm() == d0.norm()


def test_recover_examples():
    assert recover_amplitudes(AmplitudeSystem((ONE,), 0, (G(F(5, 3)),))).exact == (G(F(5, 3)),)
    s = tuple(G(F(1 + (-1) ** n, 2)) for n in (10, 11))
    assert recover_amplitudes(AmplitudeSystem((ONE, G(-1)), 10, s)).exact == (G(F(1, 2)), G(F(1, 2)))


def test_vanishing_sequence_gives_small_amplitudes():
    om = (ONE, G(-1))
    prev = None
    for n in (8, 16, 32):
        s = tuple(mpmath.mpf(1) / (k + 1) ** 2 for k in (n, n + 1))
        r = recover_amplitudes(AmplitudeSystem(om, n, s))
        size = max(k.abs_upper() for k in r.kappas)
        assert prev is None or size < prev
        prev = size


def test_near_singular():
    with pytest.raises(NearSingular):
        AmplitudeSystem((ONE, ONE), 0, (ONE, ONE))


gauss = st.builds(G, st.fractions(-5, 5, max_denominator=9), st.fractions(-5, 5, max_denominator=9))


@given(kappa=st.lists(gauss, min_size=4, max_size=4), n=st.integers(0, 40))
def test_amplitude_round_trip_exact(kappa, n):
    samples = tuple(sum((k * w ** (n + j) for k, w in zip(kappa, FOURTH)), G(0)) for j in range(4))
    assert recover_amplitudes(AmplitudeSystem(FOURTH, n, samples)).exact == tuple(kappa)


@given(kappa=st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=3, max_size=3), n=st.integers(0, 30))
def test_amplitude_round_trip_balls(kappa, n):
    om = [mpmath.expj(2 * mpmath.pi * k / 3) for k in range(3)]
    samples = tuple(sum(mpmath.mpc(k) * w ** (n + j) for k, w in zip(kappa, om)) for j in range(3))
    res = recover_amplitudes(AmplitudeSystem(tuple(om), n, samples))
    for got, want in zip(res.kappas, kappa):
        assert abs(got.mid - mpmath.mpc(want)) < 1e-60 + got.rad
