"""Logarithms of algebraic numbers as sums of values at z = 1 of G-series.

log(alpha) = m * (log(1 + Psi_u(1)) + log u) where m = 2^k pulls alpha^(1/m)
close to 1, Phi_u is the root series of alpha^(1/m) for Q(X^m) and
Psi_u = (Phi_u - u)/u.  log u splits into (1/2) log(a^2 + b^2) and
i arctan(b/a), each the value at 1 of a rescaled elementary series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algroots import RootSeries, build_root_series, divide_by_powers, integral_normal_form, power_structure
from .balls import ComplexBall, working_precision
from .errors import BranchCut, InadmissibleWitness, NoWitnessFound
from .qi import ONE, ZERO, GaussianRational, QiPolynomial
from .roots import RootBall
from .series import (
    GSeries,
    affine_compose,
    antiderivative,
    differentiate,
    divide,
    evaluate,
    majorant,
    scale,
)

__all__ = [
    "LogRealization",
    "series_log1p",
    "log1p_series",
    "arctan_series",
    "log_gaussian_rational",
    "log_algebraic",
    "exp_consistent",
]


@dataclass(frozen=True)
class LogRealization:
    """log(alpha) = m * sum of the component values at z = 1.

    ``components`` pairs each series with a label; ``branch_shift`` counts
    multiples of 2 pi i relative to the principal value (always 0 here).
    """

    components: list[tuple[GSeries, str]]
    m: int
    u: GaussianRational
    value: ComplexBall
    root_series: RootSeries | None = None
    branch_shift: int = 0


def series_log1p(psi: GSeries) -> GSeries:
    """Taylor series of log(1 + psi(z)) from its derivative psi'/(1 + psi)."""
    if not psi.coeffs[0].is_zero():
        raise ValueError("psi must have zero constant term")
    one_plus = GSeries((psi.coeffs[0] + ONE,) + psi.coeffs[1:], psi.radius_hint, psi.center_label)
    out = antiderivative(divide(differentiate(psi), one_plus))
    return GSeries(out.coeffs, psi.radius_hint, psi.center_label)


def _log1p_psi(Q: QiPolynomial, u: GaussianRational, N: int) -> GSeries:
    """log(1 + Psi_u) without rational division.

    With Phi_u(g Z) = u + D T(Z) (T over Z[i]) and D/u = p/q (q a positive
    integer), h = log(1 + Psi_u(g Z))' = p T'/(q + p T).  H_k = q^(k+1) h_k
    obeys H_k = q^k p (k+1) T_(k+1) - p sum_(i=1..k) q^(i-1) T_i H_(k-i), all
    in Z[i]; the z-coefficients are H_(n-1) / (n (q g)^n).
    """
    e, Rq = power_structure(Q)
    if e > 1:
        # Phi_u^e is the root series of R at u^e, so log(1 + Psi_u) scales
        inner = _log1p_psi(Rq, u**e, N)
        return scale(inner, GaussianRational(Fraction(1, e)))
    D, g, tr, ti = integral_normal_form(Q, u, N)
    if g is None:
        return GSeries((ZERO,) * (N + 1), math.inf, "z")
    c = GaussianRational(D) / u
    q = int(c.denominator())
    p = c * q
    pr, pi = int(p.re), int(p.im)
    qp = [1]
    for _ in range(N):
        qp.append(qp[-1] * q)
    Hr, Hi = [], []
    for k in range(N):
        # s = sum_(i=1..k) q^(i-1) T_i H_(k-i)
        sr = si = 0
        for i in range(1, k + 1):
            a, b = tr[i] * qp[i - 1], ti[i] * qp[i - 1]
            x, y = Hr[k - i], Hi[k - i]
            sr += a * x - b * y
            si += a * y + b * x
        vr = qp[k] * (k + 1) * tr[k + 1] - sr
        vi = qp[k] * (k + 1) * ti[k + 1] - si
        Hr.append(pr * vr - pi * vi)
        Hi.append(pr * vi + pi * vr)
    cs = [ZERO] + divide_by_powers(Hr, Hi, g * q, [Fraction(1, n) for n in range(1, N + 1)])
    return GSeries(tuple(cs), None, "z")


def log1p_series(order: int) -> GSeries:
    cs = [ZERO] + [GaussianRational(Fraction((-1) ** (n - 1), n)) for n in range(1, order + 1)]
    return GSeries(tuple(cs), 1.0, "z")


def arctan_series(order: int) -> GSeries:
    cs = [ZERO] * (order + 1)
    for n in range(1, order + 1, 2):
        cs[n] = GaussianRational(Fraction((-1) ** ((n - 1) // 2), n))
    return GSeries(tuple(cs), 1.0, "z")


def log_gaussian_rational(u, R: float, N: int) -> list[GSeries]:
    """Two series whose values at 1 sum to the principal log(u).

    For u = a + ib: (1/2) log(1 + w) at w = a^2 + b^2 - 1 and i arctan(t) at
    t = b/a, each stretched so the value sits at z = 1 with radius above R.
    Needs a > 0 (so arctan(b/a) is the principal argument) and
    |w|, |t| < 1/R.
    """
    u = u if isinstance(u, GaussianRational) else GaussianRational(u)
    a, b = u.re, u.im
    if a <= 0:
        raise InadmissibleWitness("need Re(u) > 0 for the principal branch")
    w = GaussianRational(a * a + b * b - 1)
    t = GaussianRational(b / a)
    if abs(w.re) * R >= 1 or abs(t.re) * R >= 1:
        raise InadmissibleWitness(f"u = {u} is not within 1/R of the unit conditions for R = {R}")
    modulus = scale(affine_compose(log1p_series(N), w, ZERO), GaussianRational(Fraction(1, 2)))
    argument = scale(affine_compose(arctan_series(N), t, ZERO), GaussianRational(0, 1))
    return [modulus, argument]


def _admissible(R: float):
    def check(u: GaussianRational) -> bool:
        a, b = u.re, u.im
        return a > 0 and abs(a * a + b * b - 1) * R < 1 and abs(b / a) * R < 1

    return check


def _crosses_cut(z: ComplexBall) -> bool:
    return z.mid.real - z.rad <= 0 and abs(z.mid.imag) <= z.rad


def _psi_bound(psi: GSeries, r: float, radius, precision_bits: int):
    q = 0 if math.isinf(float(radius)) else r / float(radius)
    return majorant(psi, r, q, precision_bits=precision_bits)


def log_algebraic(
    Q: QiPolynomial,
    alpha: ComplexBall | RootBall,
    R: float,
    N: int,
    precision_bits: int = 256,
    max_doublings: int = 24,
) -> LogRealization:
    """Principal log(alpha) for a simple nonzero root alpha of Q."""
    if isinstance(alpha, RootBall):
        alpha = alpha.ball
    if R < 1:
        raise ValueError("R must be >= 1")
    with working_precision(precision_bits):
        if alpha.contains_zero():
            raise BranchCut("alpha ball contains 0")
        if _crosses_cut(alpha):
            raise BranchCut("alpha ball meets the cut (-inf, 0]")
        beta = alpha
        m = 1
        while (beta - ComplexBall(1, 0)).abs_upper() * 4 * R >= 1:
            beta = beta.sqrt()
            m *= 2
            if m > 2**max_doublings:
                raise NoWitnessFound("root shrinking did not reach the neighborhood of 1")
    last_error = None
    for _ in range(4):
        Qm = Q.compose_power(m)
        rs = build_root_series(Qm, beta, R, N, precision_bits, accept=_admissible(R))
        u = rs.u
        inv_u = u.inverse()
        psi_coeffs = (ZERO,) + tuple(c * inv_u for c in rs.phi.coeffs[1:])
        psi = GSeries(psi_coeffs, rs.phi.radius_hint, "z")
        # a disk strictly wider than R on which |Psi_u| < 1
        r_cert = None
        radius = float(rs.radius_exact)
        for cand in (math.sqrt(R * radius) if not math.isinf(radius) else 2 * R, R * 1.125, R * 1.015625):
            if R < cand < radius and _psi_bound(psi, cand, rs.radius_exact, precision_bits) < 1:
                r_cert = cand
                break
        if r_cert is None:
            last_error = NoWitnessFound(f"could not certify |Psi_u| < 1 beyond R = {R} at m = {m}")
            with working_precision(precision_bits):
                beta = beta.sqrt()
            m *= 2
            continue
        log1p_part = _log1p_psi(Qm, u, N).with_radius(r_cert)
        lu = log_gaussian_rational(u, R, N)
        components = [(log1p_part, "log(1+Psi_u)"), (lu[0], "log|u|"), (lu[1], "i*arg(u)")]
        with working_precision(precision_bits):
            total = ComplexBall(0, 0)
            for series, _label in components:
                total = total + evaluate(series, ONE, precision_bits=precision_bits)
            value = total * m
        return LogRealization(components, m, u, value, rs)
    raise last_error


def exp_consistent(real: LogRealization, alpha: ComplexBall | RootBall, precision_bits: int = 256) -> bool:
    """exp(value) and alpha are enclosures of the same number, so they must meet."""
    if isinstance(alpha, RootBall):
        alpha = alpha.ball
    with working_precision(precision_bits):
        return real.value.exp().overlaps(alpha)
