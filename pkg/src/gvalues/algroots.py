"""Algebraic numbers as values at z = 1 of series with Q(i) coefficients.

For a polynomial Q and a witness u in Q(i) with Q'(u) != 0, the series
Phi_u(z) = u + t(z) is the local inverse of z = 1 - Q(u + t)/Q(u), so
Q(Phi_u(z)) = (1 - z) Q(u).  Its singularities sit at the critical values
z = 1 - Q(w)/Q(u), Q'(w) = 0, which yields a computable radius of
convergence; once that radius exceeds R and the value at 1 lands in the
isolation disk of the target root, Phi_u(1) is that root.
"""
from __future__ import annotations

import functools
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import gmpy2
import mpmath

from .balls import ComplexBall, working_precision
from .errors import DegenerateWitness, NoWitnessFound, TailUnbounded
from .qi import ONE, ZERO, GaussianRational, QiPolynomial, poly_eval
from .roots import RootBall, ball_poly_eval, complex_roots, exact_root_candidate, isolation_radius
from .series import GSeries, compose_polynomial, evaluate

__all__ = [
    "RootSeries",
    "lagrange_coefficients",
    "lagrange_coefficients_explicit",
    "integral_normal_form",
    "divide_by_powers",
    "certified_radius",
    "critical_values",
    "power_structure",
    "build_root_series",
    "verify_functional_equation",
    "root_series_for",
    "root_series_at",
]


@dataclass(frozen=True)
class RootSeries:
    Q: QiPolynomial
    u: GaussianRational
    phi: GSeries
    radius_exact: Fraction | float
    target_root: ComplexBall | None
    value: ComplexBall | None = None


def _as_gr(u) -> GaussianRational:
    return u if isinstance(u, GaussianRational) else GaussianRational(u)


class _ScaledInverse:
    """Integral normal form of the inversion problem.

    With Q(u + t) = q0 + q1 t + ... and c_k = q_k/q1, let D be a positive
    integer with D^(k-1) c_k integral for every k >= 2 (see _scale_for).
    Substituting t = D T and
    z = g Z with g = -q1 D/q0 turns z = 1 - Q(u+t)/Q(u) into Z = P(T) with
    P(T) = T + sum_k c_k D^(k-1) T^k in Z[i][T].  The inverse T(Z) then has
    Gaussian-integer coefficients and phi_n = D T_n / g^n.
    """

    def __init__(self, Q: QiPolynomial, u: GaussianRational):
        shifted = Q.taylor_shift(u)
        self.q0 = shifted[0]
        q1 = shifted[1]
        if q1.is_zero():
            raise DegenerateWitness("Q'(u) = 0")
        cs = [shifted[k] / q1 for k in range(2, shifted.degree() + 1)]
        D = _scale_for([(k, c.denominator()) for k, c in enumerate(cs, start=2)])
        self.D = D
        self.g = None if self.q0.is_zero() else -q1 * D / self.q0
        # P as pairs of integer lists, index = power of T
        pr, pi = [0, 1], [0, 0]
        for k, c in enumerate(cs, start=2):
            w = c * D ** (k - 1)
            pr.append(int(w.re))
            pi.append(int(w.im))
        self.pr, self.pi = pr, pi


@functools.lru_cache(maxsize=1)
def _primorial(limit: int) -> tuple[gmpy2.mpz, tuple[int, ...]]:
    primes = []
    p = gmpy2.mpz(2)
    prod = gmpy2.mpz(1)
    while p < limit:
        primes.append(int(p))
        prod *= p
        p = gmpy2.next_prime(p)
    return prod, tuple(primes)


def _scale_for(dens: list[tuple[int, int]], trial_limit: int = 1 << 16) -> int:
    """Small D with den_k | D^(k-1) for each (k, den_k).

    Prime p contributes p^max(ceil(v_p(den_k)/(k-1))).  Primes below
    ``trial_limit`` are split off exactly; any cofactor left over is taken
    to the first power, which is always enough.
    """
    prod, primes = _primorial(trial_limit)
    exps: dict[int, int] = {}
    rest = 1
    for k, den in dens:
        den = gmpy2.mpz(den)
        if den == 1:
            continue
        small = gmpy2.gcd(den, prod)
        for p in primes:
            if small == 1:
                break
            if small % p:
                continue
            small //= p
            den, v = gmpy2.remove(den, p)
            exps[p] = max(exps.get(p, 0), -(-v // (k - 1)))
        if den > 1:
            rest = math.lcm(rest, int(den))
    out = rest
    for p, e in exps.items():
        out *= p**e
    return out


def _zmul(ar, ai, br, bi, n):
    """Truncated product of Gaussian-integer series given as re/im lists."""
    a_real = not any(ai)
    b_real = not any(bi)
    cr = [0] * (n + 1)
    ci = [0] * (n + 1)
    la, lb = len(ar), len(br)
    for i in range(min(la, n + 1)):
        x, y = ar[i], ai[i]
        if not x and not y:
            continue
        for j in range(min(lb, n + 1 - i)):
            p, q = br[j], bi[j]
            if b_real:
                if a_real:
                    cr[i + j] += x * p
                else:
                    cr[i + j] += x * p
                    ci[i + j] += y * p
            elif a_real:
                cr[i + j] += x * p
                ci[i + j] += x * q
            else:
                cr[i + j] += x * p - y * q
                ci[i + j] += x * q + y * p
    return cr, ci


def _integer_inverse(P: _ScaledInverse, N: int):
    """T_0..T_N from T' P'(T) = 1, one coefficient at a time.

    The powers T^j (j < deg P) are extended alongside; O(deg P * N^2)
    schoolbook integer products on integers of moderate size, since D is
    kept small.
    """
    d = len(P.pr) - 1
    real = not any(P.pi)
    dpr = [k * P.pr[k] for k in range(1, d + 1)]
    dpi = [k * P.pi[k] for k in range(1, d + 1)]
    tr, ti = [gmpy2.mpz(0)], [gmpy2.mpz(0)]
    pow_r = [[gmpy2.mpz(1)]] + [[gmpy2.mpz(0)] for _ in range(1, d)]
    pow_i = [[gmpy2.mpz(0)] for _ in range(d)]
    sr, si = [gmpy2.mpz(1)], [gmpy2.mpz(0)]
    for n in range(1, N + 1):
        ar = gmpy2.mpz(1 if n == 1 else 0)
        ai = gmpy2.mpz(0)
        for k in range(1, n):
            x, y = tr[k], ti[k]
            p, q = sr[n - k], si[n - k]
            if real:
                ar -= k * (x * p)
            else:
                ar -= k * (x * p - y * q)
                ai -= k * (x * q + y * p)
        tr.append(ar // n)
        ti.append(ai // n)
        pow_r[0].append(gmpy2.mpz(0))
        pow_i[0].append(gmpy2.mpz(0))
        s_r = gmpy2.mpz(0)
        s_i = gmpy2.mpz(0)
        for j in range(1, d):
            prev_r, prev_i = pow_r[j - 1], pow_i[j - 1]
            cr = gmpy2.mpz(0)
            ci = gmpy2.mpz(0)
            for i in range(1, n + 1):
                x = tr[i]
                if real:
                    cr += x * prev_r[n - i]
                else:
                    y = ti[i]
                    p, q = prev_r[n - i], prev_i[n - i]
                    cr += x * p - y * q
                    ci += x * q + y * p
            pow_r[j].append(cr)
            pow_i[j].append(ci)
            a, b = dpr[j], dpi[j]
            s_r += a * cr - b * ci
            s_i += a * ci + b * cr
        sr.append(s_r)
        si.append(s_i)
    return tr, ti


@functools.lru_cache(maxsize=8)
def _normal_form_cached(Q: QiPolynomial, u: GaussianRational, N: int):
    P = _ScaledInverse(Q, u)
    if P.g is None:
        return P.D, None, (0,) * (N + 1), (0,) * (N + 1)
    tr, ti = _integer_inverse(P, N)
    return P.D, P.g, tuple(tr), tuple(ti)


def integral_normal_form(Q: QiPolynomial, u, N: int):
    """(D, g, T_re, T_im) with phi_n = D T_n / g^n and T_n Gaussian integers.

    g is None when Q(u) = 0 (then Phi_u is constant).
    """
    return _normal_form_cached(Q, _as_gr(u), N)


def lagrange_coefficients(Q: QiPolynomial, u, N: int) -> list[GaussianRational]:
    """phi_1..phi_N of Phi_u - u.

    Works in the integral normal form (see _ScaledInverse) and solves
    T' P'(T) = 1 over Z[i] one coefficient at a time; rational
    normalization happens once per coefficient at the end.
    """
    u = _as_gr(u)
    if poly_eval(Q.derivative(), u).is_zero():
        raise DegenerateWitness("Q'(u) = 0")
    if N <= 0:
        return []
    gexp, Rq = power_structure(Q)
    if gexp > 1:
        return _power_root_coefficients(Rq, gexp, u, N)
    D, g, tr, ti = integral_normal_form(Q, u, N)
    if g is None:
        return [ZERO] * N
    return divide_by_powers(tr[1:], ti[1:], g, [D] * N)


def _power_root_coefficients(Rq: QiPolynomial, e: int, u: GaussianRational, N: int) -> list[GaussianRational]:
    """phi_n for Q(X) = R(X^e) through Phi_u = u (Phi_v / v)^(1/e), v = u^e.

    Both sides solve Q(Y) = (1 - z) Q(u) with Y(0) = u, so they agree.  With
    Phi_v(gs Z) = v + D T(Z) and D/v = p/q, the substitution Z = q Y gives
    Phi_v/v = 1 + V(Y) with V_k = p q^(k-1) T_k in Z[i].  For G = (1+V)^(1/e),
    K_n = e^n n! G_n satisfies
    K_n = sum_k ((e+1)k - e n) e^(k-1) (n-1)!/(n-k)! V_k K_(n-k).
    """
    v = u**e
    D, gs, tr, ti = integral_normal_form(Rq, v, N)
    if gs is None:
        return [ZERO] * N
    c = GaussianRational(D) / v
    q = c.denominator()
    pc = c * q
    pr, pi = int(pc.re), int(pc.im)
    Vr, Vi = [0], [0]
    qk = 1
    for k in range(1, N + 1):
        Vr.append((pr * tr[k] - pi * ti[k]) * qk)
        Vi.append((pr * ti[k] + pi * tr[k]) * qk)
        qk *= q
    Kr, Ki = [1], [0]
    fact = [1]
    for n in range(1, N + 1):
        fact.append(fact[-1] * n)
    for n in range(1, N + 1):
        sr = si = 0
        ek = 1  # e^(k-1)
        ff = 1  # (n-1)!/(n-k)!
        for k in range(1, n + 1):
            w = ((e + 1) * k - e * n) * ek * ff
            x, y = Vr[k], Vi[k]
            a, b = Kr[n - k], Ki[n - k]
            sr += w * (x * a - y * b)
            si += w * (x * b + y * a)
            ek *= e
            ff *= n - k
        Kr.append(sr)
        Ki.append(si)
    scaled = divide_by_powers(Kr[1:], Ki[1:], gs * q * e, [Fraction(1, fact[n]) for n in range(1, N + 1)])
    return [u * x for x in scaled]


def divide_by_powers(vr, vi, g: GaussianRational, factors) -> list[GaussianRational]:
    """[f_n (vr_n + i vi_n) / g^n for n = 1, 2, ...] with integer data.

    Writing g = G/e (G in Z[i], e in Z), 1/g^n = e^n conj(G)^n / |G|^(2n),
    so each entry costs one normalization per component.  ``factors`` may
    hold integers or Fractions.
    """
    e = g.denominator()
    G = g * e
    gr, gi = int(G.re), int(G.im)
    nrm = gr * gr + gi * gi
    wr, wi = 1, 0  # (e conj(G))^n
    den = 1  # |G|^(2n)
    out = []
    for x, y, f in zip(vr, vi, factors):
        wr, wi = e * (wr * gr + wi * gi), e * (wi * gr - wr * gi)
        den *= nrm
        f = gmpy2.mpq(f)
        nr = x * wr - y * wi
        ni = x * wi + y * wr
        fd = den * f.denominator
        out.append(GaussianRational._raw(gmpy2.mpq(nr * f.numerator, fd), gmpy2.mpq(ni * f.numerator, fd)))
    return out


def lagrange_coefficients_explicit(Q: QiPolynomial, u, N: int) -> list[GaussianRational]:
    """Reference route: phi_n = ((-Q(u))^n / n) [t^(n-1)] P(t)^(-n).

    P(t) = (Q(t+u) - Q(u))/t.  Cubic in N; kept as an independent check.
    """
    u = _as_gr(u)
    shifted = Q.taylor_shift(u)
    qu = shifted[0]
    if shifted[1].is_zero():
        raise DegenerateWitness("Q'(u) = 0")
    if qu.is_zero():
        return [ZERO] * N
    p = GSeries.from_coeffs(shifted.coeffs[1:], order=N)
    one = GSeries.constant(ONE, N)
    h = one / p  # P^{-1}
    power = one
    out = []
    mq = -qu
    mq_pow = ONE
    for n in range(1, N + 1):
        power = power * h
        mq_pow = mq_pow * mq
        out.append(mq_pow * power[n - 1] / n)
    return out


def power_structure(Q: QiPolynomial) -> tuple[int, QiPolynomial]:
    """(g, R) with Q(X) = R(X^g) and g as large as possible."""
    g = 0
    for k, c in enumerate(Q.coeffs):
        if k and not c.is_zero():
            g = math.gcd(g, k)
    if g <= 1:
        return 1, Q
    return g, QiPolynomial(Q.coeffs[::g])


@functools.lru_cache(maxsize=32)
def critical_values(Q: QiPolynomial, precision_bits: int = 256) -> tuple:
    """Values Q(w) at the critical points w, exact where w is rational.

    Entries are GaussianRational or ComplexBall.  For Q(X) = R(X^g) with
    g > 1 the critical points are 0 and the g-th roots of those of R, so
    the values are R(0) and R at the critical points of R; this keeps the
    root isolation at the degree of R.
    """
    g, Rq = power_structure(Q)
    out = []
    if g > 1:
        out.append(Rq.coeffs[0])
    dR = Rq.derivative()
    if dR.degree() >= 1:
        sq = dR.squarefree_part()
        with working_precision(precision_bits):
            for rb in complex_roots(sq, precision_bits):
                w = exact_root_candidate(sq, rb)
                out.append(poly_eval(Rq, w) if w is not None else ball_poly_eval(Rq, rb.ball))
    return tuple(out)


def _exact_modulus(v: GaussianRational) -> Fraction | None:
    nrm = v.norm()
    num, den = int(nrm.numerator), int(nrm.denominator)
    rn, rd = gmpy2.isqrt(num), gmpy2.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(int(rn), int(rd))
    return None


def certified_radius(Q: QiPolynomial, u, precision_bits: int = 256) -> Fraction | float:
    """min over critical points w of |1 - Q(w)/Q(u)| (a certified lower bound).

    Every singularity of Phi_u lies at one of these critical values, so the
    radius of convergence is at least this number; in the usual case where
    the nearest critical value is reached on the principal sheet it is the
    radius exactly.  Returns an exact Fraction when the minimizing critical
    point is a Gaussian rational with rational |1 - Q(w)/Q(u)|, math.inf for
    linear Q or Q(u) = 0, otherwise a float rounded downward.
    """
    u = _as_gr(u)
    if poly_eval(Q.derivative(), u).is_zero():
        raise DegenerateWitness("Q'(u) = 0")
    qu = poly_eval(Q, u)
    if Q.degree() <= 1 or qu.is_zero():
        return math.inf
    best_lower = None
    best_exact = None
    with working_precision(precision_bits):
        for cv in critical_values(Q, precision_bits):
            if isinstance(cv, GaussianRational):
                v = ONE - cv / qu
                exact = _exact_modulus(v)
                lower = ComplexBall(v).abs_lower()
            else:
                exact = None
                lower = (ComplexBall(1, 0) - cv / ComplexBall(qu)).abs_lower()
            if best_lower is None or lower < best_lower:
                best_lower = lower
                best_exact = exact
        if best_lower is None:
            return math.inf
        if best_exact is not None:
            return best_exact
        return float(mpmath.mpf(best_lower) * (1 - mpmath.mpf(2) ** -50))


def _radius_float(r) -> float:
    return math.inf if r == math.inf else float(r)


def _phi_series(Q: QiPolynomial, u: GaussianRational, N: int, radius) -> GSeries:
    coeffs = [u] + lagrange_coefficients(Q, u, N)
    return GSeries(tuple(coeffs), _radius_float(radius), "z")


def _value_at_one(phi: GSeries, radius, precision_bits: int) -> ComplexBall:
    r = _radius_float(radius)
    q = 0.0 if math.isinf(r) else 1.0 / r
    return evaluate(phi, ONE, tail_ratio=q, precision_bits=precision_bits)


def _isolation_disk(Q: QiPolynomial, alpha: ComplexBall, precision_bits: int) -> ComplexBall:
    """Largest Krawczyk-certified disk around alpha holding a single root."""
    with working_precision(precision_bits):
        start = 1 + abs(alpha.mid)
        r = isolation_radius(Q, alpha.mid, start, tries=200)
        if r is None or r < alpha.rad:
            r = alpha.rad
        return ComplexBall(alpha.mid, r)


def build_root_series(
    Q: QiPolynomial,
    alpha: ComplexBall | RootBall,
    R: float,
    N: int,
    precision_bits: int = 256,
    max_k: int = 64,
    max_newton: int = 12,
    accept: Callable[[GaussianRational], bool] | None = None,
) -> RootSeries:
    """Find a witness u so that Phi_u has radius > R and Phi_u(1) = alpha.

    Candidates: truncations of the centre of alpha to k binary digits
    (k = 0..max_k), each followed by a chain of exact Newton steps
    u <- u - Q(u)/Q'(u) (the first-order truncation of Phi_u at z = 1).
    Candidates are tried in order of increasing height (bit size of
    numerators and denominators), ties broken by (k, step).  The first one
    whose certified radius exceeds R and whose value ball at z = 1 lies in
    the isolation disk of alpha wins.  ``accept`` optionally filters
    witnesses further (the log pipeline needs u near 1).
    """
    if isinstance(alpha, RootBall):
        alpha = alpha.ball
    if R < 1:
        raise ValueError("R must be >= 1")
    iso = _isolation_disk(Q, alpha, precision_bits)
    dQ = Q.derivative()
    heap: list[tuple[int, int, int, int, GaussianRational]] = []
    serial = 0
    with working_precision(precision_bits):
        for k in range(max_k + 1):
            u = _truncate_dyadic(alpha.mid, k)
            heapq.heappush(heap, (_height(u), k, 0, serial, u))
            serial += 1
    tried = set()
    while heap:
        _, k, j, _, u = heapq.heappop(heap)
        if u in tried:
            continue
        tried.add(u)
        du = poly_eval(dQ, u)
        if du.is_zero():
            continue
        with working_precision(precision_bits):
            if not iso.contains(u):
                continue
        if accept is None or accept(u):
            radius = certified_radius(Q, u, precision_bits)
            if radius > R:
                phi = _phi_series(Q, u, N, radius)
                try:
                    value = _value_at_one(phi, radius, precision_bits)
                except TailUnbounded:
                    value = None
                if value is not None and iso.contains(value):
                    return RootSeries(Q, u, phi, radius, alpha, value)
        qu = poly_eval(Q, u)
        if j < max_newton and not qu.is_zero():
            nxt = u - qu / du
            heapq.heappush(heap, (_height(nxt), k, j + 1, serial, nxt))
            serial += 1
    raise NoWitnessFound(f"no admissible witness for R={R} within 2^-{max_k}")


def _height(u: GaussianRational) -> int:
    return max(
        int(u.re.numerator).bit_length(),
        int(u.re.denominator).bit_length(),
        int(u.im.numerator).bit_length(),
        int(u.im.denominator).bit_length(),
    )


def _truncate_dyadic(z, k: int) -> GaussianRational:
    z = mpmath.mpc(z)
    scale = 2**k
    re = int(mpmath.floor(abs(z.real) * scale)) * (1 if z.real >= 0 else -1)
    im = int(mpmath.floor(abs(z.imag) * scale)) * (1 if z.imag >= 0 else -1)
    return GaussianRational(Fraction(re, scale), Fraction(im, scale))


def verify_functional_equation(rs: RootSeries, method: str = "scaled") -> bool:
    """Exact check of Q(Phi_u(z)) = (1 - z) Q(u) through the truncation order.

    method="direct" composes Q with Phi over Q(i).  method="scaled" rescales
    the stored coefficients into the integral normal form and checks
    P(T(Z)) = Z over Z[i]; the two statements are equivalent and the second
    avoids rational normalization at high order.
    """
    if method == "direct":
        lhs = compose_polynomial(rs.Q, rs.phi)
        qu = poly_eval(rs.Q, rs.u)
        n = rs.phi.order
        rhs = [qu, -qu] + [ZERO] * (n - 1)
        return all(lhs.coeffs[k] == rhs[k] for k in range(n + 1))
    if method != "scaled":
        raise ValueError(f"unknown method {method!r}")
    if rs.phi.coeffs[0] != rs.u:
        return False
    P = _ScaledInverse(rs.Q, rs.u)
    n = rs.phi.order
    if P.g is None:
        return all(c.is_zero() for c in rs.phi.coeffs[1:])
    tr, ti = [0], [0]
    w = GaussianRational(1, 0) / P.D
    for k in range(1, n + 1):
        w = w * P.g
        v = rs.phi.coeffs[k] * w
        if v.re.denominator != 1 or v.im.denominator != 1:
            return False
        tr.append(gmpy2.mpz(v.re))
        ti.append(gmpy2.mpz(v.im))
    # Horner: P(T) = T (1 + T (p2 + T (p3 + ...)))
    accr, acci = [0] * (n + 1), [0] * (n + 1)
    for k in range(len(P.pr) - 1, 0, -1):
        accr[0] += P.pr[k]
        acci[0] += P.pi[k]
        accr, acci = _zmul(accr, acci, tr, ti, n)
    target = [0, 1] + [0] * (n - 1)
    return accr == target and not any(acci)


def root_series_at(Q: QiPolynomial, u, N: int, precision_bits: int = 256) -> RootSeries:
    """Phi_u at a given witness, with no root selection.

    ``value`` is Phi_u(1) when the radius exceeds 1, else None; ``target_root``
    is None since no root was chosen.
    """
    u = _as_gr(u)
    radius = certified_radius(Q, u, precision_bits)
    phi = _phi_series(Q, u, N, radius)
    value = _value_at_one(phi, radius, precision_bits) if radius > 1 else None
    return RootSeries(Q, u, phi, radius, None, value)


def root_series_for(
    Q: QiPolynomial,
    R: float,
    N: int,
    precision_bits: int = 256,
    which: int | None = None,
    near=None,
) -> RootSeries:
    """Convenience: isolate the roots of Q, pick one, and build its series.

    ``near`` selects the simple root closest to that complex number; otherwise
    ``which`` indexes the simple roots (sorted by real then imaginary part),
    defaulting to the one with the largest real part.
    """
    roots = [rb for rb in complex_roots(Q, precision_bits) if rb.multiplicity == 1]
    if not roots:
        raise NoWitnessFound("Q has no simple root")
    if near is not None:
        target = mpmath.mpc(near)
        rb = min(roots, key=lambda r: abs(r.mid - target))
    elif which is not None:
        rb = roots[which]
    else:
        rb = max(roots, key=lambda r: (r.mid.real, r.mid.imag))
    return build_root_series(Q, rb.ball, R, N, precision_bits)
