"""Coefficient asymptotics from singular profiles, and back.

A profile f ~ c (log(zeta - z))^sigma (zeta - z)^tau on |z| = rho transfers to

    a_n ~ (-1)^sigma / Gamma(-tau) * (log n)^sigma / (rho^n n^(tau+1)) * chi_n,
    chi_n = sum_i c_i zeta_i^(-n),

for tau not in {0, 1, 2, ...}.  ``fit_profile`` goes the other way by least
squares on log|a_n|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .balls import ComplexBall, ball_det, working_precision
from .errors import DegenerateGamma, NearSingular, OscillationUnresolved
from .qi import ONE, ZERO, GaussianRational, as_gr

__all__ = [
    "SingularProfile",
    "AmplitudeSystem",
    "AmplitudeResult",
    "predict_coeffs",
    "fit_profile",
    "recover_amplitudes",
    "amplitude_det",
]


def _ball(x) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    g = as_gr(x) if not isinstance(x, (float, complex, mpmath.mpf, mpmath.mpc)) else NotImplemented
    if g is not NotImplemented:
        return ComplexBall(g)
    return ComplexBall(mpmath.mpc(x), 0)


@dataclass(frozen=True)
class SingularProfile:
    rho: float | Fraction
    sigma: int
    tau: Fraction | float
    fronts: tuple[tuple[ComplexBall, ComplexBall], ...] = ()

    def __post_init__(self):
        fronts = tuple((_ball(z), _ball(c)) for z, c in self.fronts)
        object.__setattr__(self, "fronts", fronts)
        if not float(self.rho) > 0:
            raise ValueError("rho must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be a natural number")
        for z, _c in fronts:
            if abs(abs(z.mid) - 1) > z.rad + mpmath.mpf(2) ** -40:
                raise ValueError(f"front {z} is not unimodular")
        for i in range(len(fronts)):
            for j in range(i):
                if fronts[i][0].overlaps(fronts[j][0]):
                    raise ValueError("front locations must be pairwise distinct")


def _tau_mpf(tau) -> mpmath.mpf:
    if isinstance(tau, Fraction):
        return mpmath.mpf(tau.numerator) / tau.denominator
    return mpmath.mpf(tau)


def _is_natural(tau) -> bool:
    if isinstance(tau, Fraction):
        return tau.denominator == 1 and tau >= 0
    t = float(tau)
    return t >= 0 and t == int(t)


def predict_coeffs(profile: SingularProfile, n_range, *, precision_bits: int = 128) -> list[ComplexBall]:
    """Main transfer term for every n in ``n_range`` (the o(1) is dropped)."""
    ns = list(n_range)
    if not ns:
        return []
    if min(ns) < 2:
        raise ValueError("n_range must start at 2 or later")
    if _is_natural(profile.tau):
        raise DegenerateGamma(f"Gamma(-tau) has a pole at tau = {profile.tau}")
    fronts = profile.fronts or ((ComplexBall(1, 0), ComplexBall(1, 0)),)
    with working_precision(precision_bits):
        tau = _tau_mpf(profile.tau)
        rho = mpmath.mpf(profile.rho.numerator) / profile.rho.denominator if isinstance(profile.rho, Fraction) else mpmath.mpf(profile.rho)
        g = mpmath.gamma(-tau)
        lead = ComplexBall((-1) ** profile.sigma / g, abs(1 / g) * mpmath.mpf(2) ** (8 - precision_bits))
        out = []
        for n in ns:
            chi = ComplexBall(0, 0)
            for z, c in fronts:
                chi = chi + c * z.inverse() ** n
            scale = mpmath.log(n) ** profile.sigma / (rho**n * mpmath.mpf(n) ** (tau + 1))
            out.append(lead * chi * ComplexBall(scale, abs(scale) * mpmath.mpf(2) ** (8 - precision_bits)))
    return out


def _as_complex_array(coeffs) -> np.ndarray:
    out = []
    for c in coeffs:
        if isinstance(c, ComplexBall):
            out.append(complex(c.mid))
        elif isinstance(c, GaussianRational):
            out.append(complex(c))
        else:
            out.append(complex(c))
    return np.array(out, dtype=complex)


def _log_abs(coeffs) -> np.ndarray:
    # log|a_n| without overflowing float for huge or tiny exact values
    out = []
    for c in coeffs:
        if isinstance(c, GaussianRational):
            v = mpmath.log(abs(c.to_mpc())) if not c.is_zero() else -math.inf
        elif isinstance(c, ComplexBall):
            v = mpmath.log(abs(c.mid)) if c.mid != 0 else -math.inf
        else:
            a = abs(_to_mpc(c))
            v = mpmath.log(a) if a != 0 else -math.inf
        out.append(float(v))
    return np.array(out)


def fit_profile(
    coeffs: Sequence,
    candidates: Sequence | None = None,
    *,
    sigma_max: int = 3,
    envelope: int = 8,
    oscillation_tol: float = 0.25,
    snap_den: int | None = 16,
    snap_tol: float = 0.01,
) -> SingularProfile:
    """Fit (rho, sigma, tau) and, given candidate zeta_i, the front amplitudes.

    Least squares of log|a_n| against n, log n and log log n on the top half
    of the window, the first 10% of indices dropped.  For each sigma the
    log log n column is fixed, and the sigma with the smallest residual wins.
    With candidates the fit runs on a running maximum of |a_n| over
    ``envelope`` indices (cancellations between fronts would otherwise make
    log|a_n| meaningless); without candidates, large residuals mean several
    fronts interfere and OscillationUnresolved is raised.

    A fitted tau within ``snap_tol`` of a rational with denominator at most
    ``snap_den`` is replaced by that rational and rho refitted with tau
    fixed; pass snap_den=None to keep the raw float.
    """
    N = len(coeffs)
    if N < 512:
        raise ValueError("fit_profile needs at least 512 coefficients")
    la = _log_abs(coeffs)
    lo = max(N // 2, N // 10)
    idx = np.arange(lo, N)
    if candidates:
        la_env = np.array([la[k : k + envelope].max() for k in range(N - envelope + 1)])
        idx = idx[idx < len(la_env)]
        y = la_env[idx]
    else:
        y = la[idx]
        if not np.all(np.isfinite(y)):
            raise OscillationUnresolved("zero coefficients in the fit window; supply candidate fronts")
    n = idx.astype(float)
    logn = np.log(n)
    loglogn = np.log(logn)
    best = None
    A = np.column_stack([n, logn, np.ones_like(n)])
    for sigma in range(sigma_max + 1):
        yy = y - sigma * loglogn
        sol, *_ = np.linalg.lstsq(A, yy, rcond=None)
        resid = yy - A @ sol
        rms = float(np.sqrt(np.mean(resid**2)))
        if best is None or rms < best[0] - 1e-12:
            best = (rms, sigma, sol)
    rms, sigma, sol = best
    if not candidates and rms > oscillation_tol:
        raise OscillationUnresolved(f"log|a_n| residual {rms:.3g} suggests several interfering fronts")
    rho = float(math.exp(-sol[0]))
    tau = float(-sol[1] - 1)
    if snap_den:
        # the n and log n columns are close to collinear on the window, so a
        # small tau error shifts rho and the amplitudes; pin tau and refit rho
        snapped = Fraction(tau).limit_denominator(snap_den)
        if abs(snapped - Fraction(tau)) < snap_tol:
            tau = snapped
            yy = y - sigma * loglogn + float(tau + 1) * logn
            sol2, *_ = np.linalg.lstsq(np.column_stack([n, np.ones_like(n)]), yy, rcond=None)
            rho = float(math.exp(-sol2[0]))
    fronts: tuple = ()
    if candidates:
        fronts = _fit_fronts(coeffs, rho, sigma, tau, candidates, lo)
    return SingularProfile(rho, sigma, tau, fronts)


def _to_mpc(c) -> mpmath.mpc:
    if isinstance(c, ComplexBall):
        return c.mid
    if isinstance(c, GaussianRational):
        return c.to_mpc()
    g = as_gr(c) if not isinstance(c, (float, complex, mpmath.mpf, mpmath.mpc)) else NotImplemented
    return g.to_mpc() if g is not NotImplemented else mpmath.mpc(c)


def _fit_fronts(coeffs, rho, sigma, tau, candidates, lo):
    """Least-squares c_i in chi_n = sum c_i zeta_i^(-n) over the fit window."""
    if _is_natural(tau):
        raise DegenerateGamma("fitted tau is a nonnegative integer")
    # chi_n in mpmath: rho^n and n^(tau+1) leave the float range for long windows
    g = mpmath.gamma(-_tau_mpf(tau))
    lr = mpmath.log(mpmath.mpf(rho.numerator) / rho.denominator if isinstance(rho, Fraction) else rho)
    t1 = _tau_mpf(tau) + 1
    n = np.arange(lo, len(coeffs))
    chi = np.array(
        [
            complex(_to_mpc(coeffs[k]) * g * (-1) ** sigma * mpmath.exp(k * lr + t1 * mpmath.log(k)) / mpmath.log(k) ** sigma)
            for k in n
        ],
        dtype=complex,
    )
    zs = [complex(_ball(z).mid) for z in candidates]
    A = np.column_stack([np.exp(-1j * np.angle(z) * n) for z in zs])
    sol, *_ = np.linalg.lstsq(A, chi, rcond=None)
    resid = chi - A @ sol
    err = float(np.max(np.abs(resid))) if len(resid) else 0.0
    return tuple((ComplexBall(mpmath.mpc(z), 0), ComplexBall(mpmath.mpc(c), err)) for z, c in zip(zs, sol))


# -- amplitude systems ------------------------------------------------------


@dataclass(frozen=True)
class AmplitudeSystem:
    """Samples s_n..s_(n+t-1) of sum_j kappa_j omega_j^n."""

    omegas: tuple
    window_start: int
    samples: tuple

    def __post_init__(self):
        object.__setattr__(self, "omegas", tuple(self.omegas))
        object.__setattr__(self, "samples", tuple(self.samples))
        if len(self.omegas) != len(self.samples) or not self.omegas:
            raise ValueError("need as many samples as omegas")
        if self.window_start < 0:
            raise ValueError("window_start must be >= 0")
        balls = [_ball(w) for w in self.omegas]
        for i in range(len(balls)):
            for j in range(i):
                if balls[i].overlaps(balls[j]):
                    raise NearSingular("omegas are not pairwise distinct")

    @property
    def exact(self) -> bool:
        return all(isinstance(x, GaussianRational) for x in self.omegas + self.samples)


@dataclass(frozen=True)
class AmplitudeResult:
    kappas: tuple[ComplexBall, ...]
    delta0: ComplexBall
    exact: tuple[GaussianRational, ...] | None = None


def amplitude_det(omegas: Sequence, n: int):
    """det M_n with M_n[k][j] = omega_j^(n+k); exact for Gaussian rationals."""
    if all(isinstance(w, GaussianRational) for w in omegas):
        M = [[w ** (n + k) for w in omegas] for k in range(len(omegas))]
        return _exact_det(M)
    M = [[_ball(w) ** (n + k) for w in omegas] for k in range(len(omegas))]
    return ball_det(M)


def _exact_det(M):
    n = len(M)
    A = [list(row) for row in M]
    det = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col]
        inv = A[col][col].inverse()
        for r in range(col + 1, n):
            f = A[r][col] * inv
            if f.is_zero():
                continue
            for c in range(col, n):
                A[r][c] = A[r][c] - f * A[col][c]
    return det


def _exact_solve(M, s):
    n = len(M)
    A = [list(row) + [s[k]] for k, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
        if piv is None:
            raise NearSingular("exact system is singular")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[k][n] for k in range(n)]


def recover_amplitudes(system: AmplitudeSystem, *, precision_bits: int = 256) -> AmplitudeResult:
    """Solve M_n kappa = s; exact over Q(i) when every input is exact."""
    t = len(system.omegas)
    n0 = system.window_start
    with working_precision(precision_bits):
        if system.exact:
            M = [[w ** (n0 + k) for w in system.omegas] for k in range(t)]
            kap = _exact_solve(M, list(system.samples))
            d0 = _exact_det([[w**k for w in system.omegas] for k in range(t)])
            return AmplitudeResult(tuple(ComplexBall(k) for k in kap), ComplexBall(d0), tuple(kap))
        om = [_ball(w) for w in system.omegas]
        s = [_ball(x) for x in system.samples]
        M = [[w ** (n0 + k) for w in om] for k in range(t)]
        det = ball_det(M)
        if det.contains_zero():
            raise NearSingular(f"det M_n = {det} contains 0")
        kap = []
        for j in range(t):
            Mj = [row[:j] + [s[k]] + row[j + 1 :] for k, row in enumerate(M)]
            kap.append(ball_det(Mj) / det)
        d0 = ball_det([[w**k for w in om] for k in range(t)])
    return AmplitudeResult(tuple(kap), d0, None)
