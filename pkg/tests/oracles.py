"""Small independent reference computations used by several test files."""
from __future__ import annotations

import math

import mpmath

from gvalues.qi import ONE, ZERO, GaussianRational as G


def _conv(a, b, n):
    out = [ZERO] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: n + 1 - i]):
            out[i + j] = out[i + j] + x * y
    return out


def inverse_by_undetermined_coefficients(Q, u, n):
    """phi_0..phi_n with Q(phi(z)) = (1 - z) Q(u), solved one coefficient at a time."""
    qs = list(Q.coeffs)
    qu, dq = Q(u), Q.derivative()(u)
    rhs = [qu, -qu] + [ZERO] * n
    phi = [u] + [ZERO] * n
    for m in range(1, n + 1):
        # coefficient m of Q(phi) with phi_m still 0
        acc, power = [ZERO] * (m + 1), [ONE] + [ZERO] * m
        for c in qs:
            acc = [a + c * p for a, p in zip(acc, power)]
            power = _conv(power, phi, m)
        phi[m] = (rhs[m] - acc[m]) / dq
    return phi


def bisect_real(f, a, b, bits=800, steps=700):
    with mpmath.workprec(bits):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        fa = f(a)
        for _ in range(steps):
            m = (a + b) / 2
            if (f(m) > 0) == (fa > 0):
                a, fa = m, f(m)
            else:
                b = m
        return (a + b) / 2


def interval_newton_sqrt2(bits=400):
    """Nested intervals for sqrt(2) by interval Newton x -> m - (m^2 - 2)/(2 X)."""
    with mpmath.workprec(bits):
        iv = mpmath.iv
        iv.prec = bits
        X = iv.mpf([1, 2])
        for _ in range(12):
            m = iv.mpf(X.mid)
            N = m - (m * m - 2) / (2 * X)
            X = iv.mpf([max(N.a, X.a), min(N.b, X.b)])
        return X


def eisenstein_quintic(a, terms):
    """sum (-1)^n C(5n, n)/(4n+1) a^(4n+1), the real root of x^5 + x = a."""
    x = mpmath.mpf(a.numerator) / a.denominator
    return sum(mpmath.mpf((-1) ** n * math.comb(5 * n, n)) / (4 * n + 1) * x ** (4 * n + 1) for n in range(terms))
