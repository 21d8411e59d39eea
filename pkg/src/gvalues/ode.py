"""Fuchsian ODEs: local bases, analytic continuation and connection constants.

An equation y^(mu) + a_(mu-1) y^(mu-1) + ... + a_0 y = 0 is stored through its
rational coefficients.  Multiplying by the monic lcm L of the denominators
gives polynomial coefficients P_0..P_mu (P_mu = L).  At an ordinary point c
the canonical basis g_0..g_(mu-1) has g_j = t^j + O(t^mu), t = z - c, so the
Taylor vector (f(c), f'(c)/1!, ..., f^(mu-1)(c)/(mu-1)!) is exactly the
coordinate vector of f in that basis.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .balls import ComplexBall, ball_det, working_precision
from .errors import (
    AbelViolation,
    FitDiverged,
    FitInconsistent,
    SingularCenter,
    StepTooClose,
    TruncationInconclusive,
    WronskianVanishes,
)
from .qi import ONE, ZERO, GaussianRational, QiPolynomial, RationalFunction, as_gr, mpf_to_fraction
from .roots import RootBall, ball_poly_eval, complex_roots, exact_root_candidate
from .series import GSeries, differentiate, evaluate, mul, sub

__all__ = [
    "FuchsianODE",
    "Path",
    "LocalBasis",
    "ConnectionResult",
    "WronskianFit",
    "LogMonomialSum",
    "LocalProfile",
    "local_basis",
    "basis_residual",
    "continue_along_path",
    "connection_constants",
    "wronskian_series",
    "wronskian_certify",
    "leading_term",
    "singular_profile",
    "sample_toward",
    "sample_profile",
]


def _gr(x) -> GaussianRational:
    g = as_gr(x)
    if g is NotImplemented:
        raise TypeError(f"not an exact Q(i) value: {x!r}")
    return g


def _lcm(a: QiPolynomial, b: QiPolynomial) -> QiPolynomial:
    return ((a * b) // a.gcd(b)).monic()


@dataclass(frozen=True)
class FuchsianODE:
    """y^(order) + sum_j coeffs[j] y^(j) = 0."""

    order: int
    coeffs: tuple[RationalFunction, ...]
    singularities: tuple[RootBall, ...] = field(default=(), compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.order < 1 or len(self.coeffs) != self.order:
            raise ValueError("need exactly `order` coefficients a_0..a_(order-1)")
        coeffs = tuple(c if isinstance(c, RationalFunction) else RationalFunction.from_poly(c) if isinstance(c, QiPolynomial) else RationalFunction(QiPolynomial([_gr(c)])) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not self.singularities:
            L = self.common_denominator()
            sing = tuple(complex_roots(L.squarefree_part())) if L.degree() > 0 else ()
            object.__setattr__(self, "singularities", sing)

    @classmethod
    def from_operator(cls, polys: Sequence[QiPolynomial]) -> "FuchsianODE":
        """From P_0 y + P_1 y' + ... + P_mu y^(mu) = 0 (P_mu nonzero)."""
        polys = [p if isinstance(p, QiPolynomial) else QiPolynomial([_gr(p)]) for p in polys]
        lead = polys[-1]
        if lead.is_zero():
            raise ValueError("leading polynomial coefficient is zero")
        return cls(len(polys) - 1, tuple(RationalFunction(p, lead) for p in polys[:-1]))

    def common_denominator(self) -> QiPolynomial:
        L = QiPolynomial([ONE])
        for c in self.coeffs:
            L = _lcm(L, c.den)
        return L

    def operator_polys(self) -> tuple[QiPolynomial, ...]:
        """P_0..P_mu with P_mu = L the lcm of the denominators."""
        return _operator_polys(self)

    def is_fuchsian_at_finite(self) -> bool:
        """a_j has poles of order at most mu - j at every finite point."""
        for j, c in enumerate(self.coeffs):
            for _factor, mult in c.den.squarefree_decomposition():
                if mult > self.order - j:
                    return False
        return True

    def distance_to_singularities(self, z) -> mpmath.mpf:
        """Certified lower bound for the distance from z to the nearest pole."""
        if not self.singularities:
            return mpmath.inf
        zb = ComplexBall.exact(z)
        return min(abs(zb.mid - s.mid) - s.rad - zb.rad for s in self.singularities)


@functools.lru_cache(maxsize=64)
def _operator_polys(ode: FuchsianODE) -> tuple[QiPolynomial, ...]:
    L = ode.common_denominator()
    out = [c.num * (L // c.den) for c in ode.coeffs]
    return tuple(out) + (L,)


@dataclass(frozen=True)
class Path:
    waypoints: tuple[GaussianRational, ...]
    branch_note: str = ""

    def __post_init__(self):
        pts = tuple(_gr(w) for w in self.waypoints)
        if not pts:
            raise ValueError("a path needs at least one waypoint")
        object.__setattr__(self, "waypoints", pts)

    @property
    def start(self) -> GaussianRational:
        return self.waypoints[0]

    @property
    def end(self) -> GaussianRational:
        return self.waypoints[-1]


@dataclass(frozen=True)
class LocalBasis:
    center: GaussianRational
    series: tuple[GSeries, ...]
    radius: float

    @property
    def order(self) -> int:
        return self.series[0].order


@dataclass(frozen=True)
class ConnectionResult:
    constants: tuple[ComplexBall, ...]
    wronskian_value: ComplexBall
    residual: float
    matching_point: GaussianRational | None = None


def _ff(n: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= n - i
    return out


# Working radius cap.  Without it an equation with no finite singularity near
# the center would give radius inf, tail ratio 0 and no truncation bound at all.
RADIUS_CAP = 2.0


def _working_radius(d) -> float:
    return min(float(d), RADIUS_CAP)


def local_basis(ode: FuchsianODE, center, N: int) -> LocalBasis:
    """Canonical basis at an ordinary point, exact to order N."""
    return _local_basis(ode, _gr(center), int(N))


@functools.lru_cache(maxsize=256)
def _local_basis(ode: FuchsianODE, c: GaussianRational, N: int) -> LocalBasis:
    mu = ode.order
    polys = ode.operator_polys()
    if polys[-1](c).is_zero():
        raise SingularCenter(f"{c} is a pole of the coefficients")
    d = ode.distance_to_singularities(c)
    if d <= 0:
        raise SingularCenter(f"{c} lies inside a singularity ball")
    shifted = [p.taylor_shift(c).coeffs for p in polys]
    lead = shifted[mu][0]
    series = []
    for j in range(mu):
        y = [ZERO] * (N + 1)
        if j <= N:
            y[j] = ONE
        for m in range(0, N - mu + 1):
            acc = ZERO
            for jj in range(mu + 1):
                for k, p in enumerate(shifted[jj]):
                    if jj == mu and k == 0:
                        continue
                    idx = m - k + jj
                    if idx < 0 or p.is_zero() or y[idx].is_zero():
                        continue
                    acc = acc + p * y[idx] * _ff(idx, jj)
            y[m + mu] = -acc / (lead * _ff(m + mu, mu))
        series.append(GSeries(tuple(y), _working_radius(d), f"z-({c})"))
    return LocalBasis(c, tuple(series), _working_radius(d))


def basis_residual(ode: FuchsianODE, basis: LocalBasis) -> list[int]:
    """Indices n <= N - mu where sum_j P_j(c+t) g^(j) has a nonzero t^n coefficient.

    Independent of the recurrence: the operator is applied with series
    products and derivatives.  An empty list for every basis element means the
    basis satisfies the equation exactly to truncation.
    """
    polys = [GSeries.from_polynomial(p.taylor_shift(basis.center), basis.order) for p in ode.operator_polys()]
    bad = []
    for g in basis.series:
        total = None
        der = g
        for j, p in enumerate(polys):
            term = mul(p, der)
            total = term if total is None else total + term
            if j < ode.order:
                der = differentiate(der)
        for n in range(basis.order - ode.order + 1):
            if not total.coeffs[n].is_zero():
                bad.append(n)
                break
    return bad


def _derivative_matrix(basis: LocalBasis, h: GaussianRational, rows: int, precision_bits: int) -> list[list[ComplexBall]]:
    """M[k][j] = g_j^(k)(center + h) for k < rows."""
    q = abs(complex(h)) / basis.radius if math.isfinite(basis.radius) else 0.0
    N = basis.order
    out = []
    for k in range(rows):
        row = []
        for g in basis.series:
            der = g
            for _ in range(k):
                der = differentiate(der)
            ratio = q * (N + 1) / (N + 1 - k) if q else 0.0
            row.append(evaluate(der, h, tail_ratio=ratio, precision_bits=precision_bits))
        out.append(row)
    return out


def _taylor_vector(v: Sequence[ComplexBall]) -> list[ComplexBall]:
    return [x * mpmath.mpf(1) / math.factorial(k) for k, x in enumerate(v)]


def _as_ball(x) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    return ComplexBall.exact(x if isinstance(x, GaussianRational) else as_gr(x) if as_gr(x) is not NotImplemented else x)


def _subdivide(ode: FuchsianODE, a: GaussianRational, b: GaussianRational, step_fraction: float, max_steps: int):
    """Points a = p_0, ..., p_s = b with |p_(i+1) - p_i| <= step_fraction * dist(p_i)."""
    pts = [a]
    p = a
    for _ in range(max_steps):
        if p == b:
            return pts
        d = ode.distance_to_singularities(p)
        if d <= 0:
            raise StepTooClose(f"waypoint {p} touches a singularity ball")
        d = _working_radius(d)
        remaining = abs((b - p).to_mpc())
        reach = mpmath.mpf(step_fraction) * d
        if remaining <= reach:
            p = b
        else:
            t = int(mpmath.floor(reach / remaining * 64))
            if t <= 0:
                raise StepTooClose(f"step below 1/64 of the remaining segment near {p}")
            p = p + (b - p) * GaussianRational(Fraction(t, 64))
        pts.append(p)
    raise StepTooClose(f"more than {max_steps} steps needed; the path grazes a singularity")


def continue_along_path(
    ode: FuchsianODE,
    initial: Sequence,
    path: Path,
    N: int = 256,
    step_fraction: float = 0.5,
    *,
    precision_bits: int = 256,
    max_steps: int = 2000,
) -> tuple[ComplexBall, ...]:
    """Transport (f, f', ..., f^(mu-1)) from path.start to path.end."""
    if not 0 < step_fraction < 1:
        raise ValueError("step_fraction must lie in (0, 1)")
    mu = ode.order
    if len(initial) != mu:
        raise ValueError(f"need {mu} initial values")
    with working_precision(precision_bits):
        v = [_as_ball(x) for x in initial]
        pts = [path.start]
        for a, b in zip(path.waypoints, path.waypoints[1:]):
            pts.extend(_subdivide(ode, a, b, step_fraction, max_steps)[1:])
        for p, nxt in zip(pts, pts[1:]):
            basis = local_basis(ode, p, N)
            w = _taylor_vector(v)
            M = _derivative_matrix(basis, nxt - p, mu, precision_bits)
            v = [sum((M[k][j] * w[j] for j in range(mu)), ComplexBall(0, 0)) for k in range(mu)]
    return tuple(v)


def _solve_cramer(M, v):
    det = ball_det(M)
    if det.contains_zero():
        return det, None
    n = len(M)
    sol = []
    for j in range(n):
        Mj = [row[:j] + [v[k]] + row[j + 1 :] for k, row in enumerate(M)]
        sol.append(ball_det(Mj) / det)
    return det, sol


def connection_constants(
    ode: FuchsianODE,
    f_at_start: Sequence,
    path: Path,
    target_basis: LocalBasis,
    N: int | None = None,
    step_fraction: float = 0.5,
    *,
    precision_bits: int = 256,
) -> ConnectionResult:
    """Coordinates of f in ``target_basis`` after continuation along ``path``."""
    mu = ode.order
    N = target_basis.order if N is None else N
    c = target_basis.center
    with working_precision(precision_bits):
        v = continue_along_path(ode, f_at_start, path, N, step_fraction, precision_bits=precision_bits)
        if path.end == c:
            w = _taylor_vector(v)
            W = ComplexBall(math.prod(math.factorial(k) for k in range(mu)), 0)
            return ConnectionResult(tuple(w), W, 0.0, c)
        e = path.end
        if abs((e - c).to_mpc()) >= target_basis.radius:
            raise ValueError("path end lies outside the target basis disk")
        last = None
        for t in (Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(3, 8), Fraction(5, 8)):
            rho = GaussianRational.dyadic((c + (e - c) * GaussianRational(t)).to_mpc(), 10)
            if rho == c:
                rho = c + (e - c) * GaussianRational(t)
            vr = continue_along_path(ode, v, Path((e, rho)), N, step_fraction, precision_bits=precision_bits)
            M = _derivative_matrix(target_basis, rho - c, mu, precision_bits)
            det, sol = _solve_cramer(M, list(vr))
            last = det
            if sol is None:
                continue
            resid = max(
                (sum((M[k][j] * sol[j] for j in range(mu)), ComplexBall(0, 0)) - vr[k]).abs_upper() for k in range(mu)
            )
            return ConnectionResult(tuple(sol), det, float(resid), rho)
    raise WronskianVanishes(f"determinant ball {last} contains 0 at every matching point tried")


# -- Wronskian ---------------------------------------------------------------


def wronskian_series(basis: LocalBasis) -> GSeries:
    """det(g_j^(k)) as an exact series (valid to order N - mu + 1)."""
    mu = len(basis.series)
    rows = []
    der = list(basis.series)
    for _k in range(mu):
        rows.append(der)
        der = [differentiate(g) for g in der]
    return _series_det(rows)


def _series_det(m: list[list[GSeries]]) -> GSeries:
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = mul(m[0][j], _series_det(minor))
        if acc is None:
            acc = term
        elif j % 2 == 0:
            acc = acc + term
        else:
            acc = sub(acc, term)
    return acc


@dataclass(frozen=True)
class WronskianFit:
    """W(z) = nu * exp(-int_c^z poly) * prod (z - p_j)^(-r_j) near the basis center."""

    nu: ComplexBall
    poles: tuple[ComplexBall, ...]
    exponents: tuple[Fraction, ...]
    series: GSeries | None = None

    def __iter__(self):
        return iter((self.nu, list(self.exponents)))


def _residues(a: RationalFunction, bits: int):
    """Poles of a with their residues; only simple poles are allowed."""
    poles, res = [], []
    for factor, mult in a.den.squarefree_decomposition():
        if mult > 1:
            raise FitInconsistent("a_(mu-1) has a pole of order > 1; not Fuchsian")
        dden = a.den.derivative()
        for rb in complex_roots(factor, bits):
            exact = exact_root_candidate(factor, rb)
            if exact is not None:
                r = a.num(exact) / dden(exact)
                if r.im != 0:
                    raise FitInconsistent(f"non-real residue {r} at {exact}")
                poles.append(ComplexBall.exact(exact))
                res.append(Fraction(int(r.re.numerator), int(r.re.denominator)))
                continue
            rv = ball_poly_eval(a.num, rb.ball) / ball_poly_eval(dden, rb.ball)
            snap = mpf_to_fraction(rv.mid.real).limit_denominator(16)
            if abs(rv.mid - mpmath.mpf(snap.numerator) / snap.denominator) > rv.rad + mpmath.mpf(2) ** (-bits // 4):
                raise FitInconsistent(f"residue {rv} at {rb.ball} is not a small rational")
            poles.append(rb.ball)
            res.append(snap)
    return poles, res


def wronskian_certify(
    ode: FuchsianODE,
    basis: LocalBasis,
    test_points: Sequence,
    *,
    precision_bits: int = 256,
) -> WronskianFit:
    """Exact Abel check on W, then the closed-form fit at the test points."""
    mu = ode.order
    W = wronskian_series(basis)
    valid = basis.order - mu + 1
    a = ode.coeffs[mu - 1]
    c = basis.center
    num = GSeries.from_polynomial(a.num.taylor_shift(c), valid)
    den = GSeries.from_polynomial(a.den.taylor_shift(c), valid)
    Wt = W.truncate(valid)
    defect = differentiate(Wt)
    defect = mul(den, defect) + mul(num, Wt)
    for n in range(valid):
        if not defect.coeffs[n].is_zero():
            raise AbelViolation(f"Abel identity fails at t^{n}")
    pts = [_gr(p) for p in test_points]
    if not pts:
        raise ValueError("need at least one test point")
    with working_precision(precision_bits):
        poly_part, rem = a.num.divmod(a.den)
        poles, exps = _residues(RationalFunction(rem, a.den), precision_bits)
        prim = _antiderivative_poly(poly_part)
        cb = ComplexBall.exact(c)
        base = [(cb - p).log() if not _meets_cut(cb - p) else None for p in poles]
        nus = []
        for z in pts:
            h = z - c
            if abs(complex(h)) >= basis.radius:
                raise ValueError(f"test point {z} outside the basis disk")
            Wz = evaluate(W, h, tail_ratio=abs(complex(h)) / basis.radius, precision_bits=precision_bits)
            log_model = -(ball_poly_eval(prim, z) - ball_poly_eval(prim, c))
            for p, r, lb in zip(poles, exps, base):
                # log(z - p) continued from the center: log(c - p) + log(1 + h/(c - p))
                ratio = ComplexBall.exact(h) / (cb - p)
                lz = (ComplexBall(1, 0) + ratio).log()
                lp = lb if lb is not None else (cb - p).log() if not _meets_cut(cb - p) else _log_any(cb - p)
                log_model = log_model - (lp + lz) * mpmath.mpf(r.numerator) / r.denominator
            nus.append(Wz / log_model.exp())
        nu = nus[0]
        for other in nus[1:]:
            if not nu.overlaps(other):
                raise FitInconsistent(f"nu differs across test points: {nu} vs {other}")
            nu = nu.intersect(other)
    return WronskianFit(nu, tuple(poles), tuple(exps), W)


def _meets_cut(b: ComplexBall) -> bool:
    return b.mid.real - b.rad <= 0 and abs(b.mid.imag) <= b.rad


def _log_any(b: ComplexBall) -> ComplexBall:
    # a log of a ball on the negative axis: log(-b) + i pi
    return (-b).log() + ComplexBall(mpmath.mpc(0, mpmath.pi), 0)


def _antiderivative_poly(p: QiPolynomial) -> QiPolynomial:
    return QiPolynomial([ZERO] + [c / (k + 1) for k, c in enumerate(p.coeffs)])


# -- leading terms -------------------------------------------------------------


@dataclass(frozen=True)
class LogMonomialSum:
    """sum over terms of (log z)^s z^t F(z); F a truncated series."""

    terms: tuple[tuple[int, Fraction, GSeries], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(s), Fraction(t), F) for s, t, F in self.terms))


def leading_term(lsum: LogMonomialSum) -> tuple[GaussianRational, int, Fraction]:
    """(c, sigma, tau) with the sum = c (log z)^sigma z^tau (1 + o(1)).

    tau is the least theta with some c_(s,theta) nonzero and sigma the largest
    such s.  Only thetas every term covers (t + order of F) are examined.
    """
    if not lsum.terms:
        raise TruncationInconclusive("empty sum")
    bound = min(t + F.order for _s, t, F in lsum.terms)
    thetas = sorted({t + n for _s, t, F in lsum.terms for n in range(F.order + 1) if t + n <= bound})
    for theta in thetas:
        cs: dict[int, GaussianRational] = {}
        for s, t, F in lsum.terms:
            n = theta - t
            if n < 0 or n.denominator != 1:
                continue
            cs[s] = cs.get(s, ZERO) + F.coeffs[int(n)]
        nonzero = [s for s, v in cs.items() if not v.is_zero()]
        if nonzero:
            sigma = max(nonzero)
            return cs[sigma], sigma, theta
    raise TruncationInconclusive(f"all coefficients up to theta = {bound} vanish")


# -- singular profiles ------------------------------------------------------


@dataclass(frozen=True)
class LocalProfile:
    """f(z) ~ c (log(zeta - z))^sigma (zeta - z)^tau."""

    c: ComplexBall
    sigma: int
    tau: Fraction | mpmath.mpf
    snapped: bool
    tau_raw: mpmath.mpf

    def __iter__(self):
        return iter((self.c, self.sigma, self.tau))


def sample_toward(start, zeta, count: int) -> list[GaussianRational]:
    """z_0 = start, z_(k+1) = zeta - (zeta - z_k)/2."""
    z, zeta = _gr(start), _gr(zeta)
    out = [z]
    half = GaussianRational(Fraction(1, 2))
    for _ in range(count - 1):
        z = zeta - (zeta - z) * half
        out.append(z)
    return out


def sample_profile(
    ode: FuchsianODE,
    initial: Sequence,
    start,
    zeta,
    count: int = 24,
    N: int = 64,
    step_fraction: float = 0.5,
    *,
    precision_bits: int = 256,
) -> tuple[list[GaussianRational], list[ComplexBall]]:
    """Continue f from ``start`` through the points of :func:`sample_toward`."""
    pts = sample_toward(start, zeta, count)
    v = tuple(_as_ball(x) for x in initial)
    vals = [v[0]]
    for a, b in zip(pts, pts[1:]):
        v = continue_along_path(ode, v, Path((a, b)), N, step_fraction, precision_bits=precision_bits)
        vals.append(v[0])
    return pts, vals


def _unwrapped_logs(vals):
    out = [mpmath.log(vals[0])]
    for a, b in zip(vals, vals[1:]):
        out.append(out[-1] + mpmath.log(b / a))
    return out


def singular_profile(points: Sequence, values: Sequence, zeta, *, max_sigma: int = 3, max_den: int = 16, precision_bits: int = 256):
    """Fit sigma, tau and c from samples of f approaching zeta.

    With x = log(zeta - z), the slopes of log f - sigma log x against x tend to
    tau; the sigma whose slopes settle best wins.  tau is snapped to a
    rational with denominator <= max_den when the fit allows it.
    """
    if len(points) != len(values) or len(points) < 8:
        raise ValueError("need at least 8 samples with matching points")
    with working_precision(precision_bits):
        zeta_c = _as_ball(zeta).mid
        d = [zeta_c - _as_ball(p).mid for p in points]
        f = [_as_ball(v).mid for v in values]
        # log(zeta - z) near 0 would make log x meaningless; drop those samples
        keep = [k for k in range(len(d)) if abs(mpmath.log(abs(d[k]))) >= mpmath.mpf(1) / 2]
        if len(keep) < 6:
            raise ValueError("need at least 6 samples with |log(zeta - z)| >= 1/2")
        d = [d[k] for k in keep]
        f = [f[k] for k in keep]
        values = [values[k] for k in keep]
        x = _unwrapped_logs(d)
        logf = _unwrapped_logs(f)
        logx = _unwrapped_logs(x)
        best = None
        for sigma in range(max_sigma + 1):
            adj = [lf - sigma * lx for lf, lx in zip(logf, logx)]
            slopes = [(adj[k + 1] - adj[k]) / (x[k + 1] - x[k]) for k in range(len(x) - 1)]
            tail = slopes[len(slopes) // 2 :]
            spread = max(abs(s - tail[-1]) for s in tail)
            if best is None or spread < best[0] * (1 - mpmath.mpf(2) ** -20):
                best = (spread, sigma, slopes)
        spread, sigma, slopes = best
        diffs = [abs(slopes[k + 1] - slopes[k]) for k in range(len(slopes) - 1)]
        half = len(diffs) // 2
        if diffs and max(diffs[half:]) > 2 * max(diffs[:half] + [mpmath.mpf(0)]) + mpmath.mpf(2) ** (-precision_bits // 2):
            raise FitDiverged("successive slope differences grow toward the singularity")
        tau_raw = slopes[-1]
        tol = max(10 * spread, diffs[-1] * 10 if diffs else 0, mpmath.mpf(2) ** (-precision_bits // 2))
        snap = mpf_to_fraction(mpmath.re(tau_raw)).limit_denominator(max_den)
        snapped = abs(tau_raw - mpmath.mpf(snap.numerator) / snap.denominator) <= max(tol, mpmath.mpf("1e-6"))
        tau = snap if snapped else mpmath.re(tau_raw)
        tau_m = mpmath.mpf(snap.numerator) / snap.denominator if snapped else tau_raw
        cs = [fv / (xv**sigma * mpmath.exp(tau_m * xv)) for fv, xv in zip(f, x)]
        # remaining error after the last sample, from the geometric rate of the c_k
        last, prev = abs(cs[-1] - cs[-2]), abs(cs[-2] - cs[-3])
        rate = min(last / prev, mpmath.mpf(0.9)) if prev else mpmath.mpf(0)
        rad = 2 * last * (1 + rate / (1 - rate)) + sum(_as_ball(v).rad for v in values[-1:]) / abs(mpmath.exp(tau_m * x[-1]) * x[-1] ** sigma)
    return LocalProfile(ComplexBall(cs[-1], rad), sigma, tau, bool(snapped), mpmath.re(tau_raw))
