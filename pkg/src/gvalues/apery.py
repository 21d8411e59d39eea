"""Approximation pairs from partial sums, denominator growth and the mu bound.

For series U, V of radius > 1, a_n and b_n are the prefix sums of their
coefficients, the coefficients of U/(1-z) and V/(1-z).  a_n/b_n tends to
xi = U(1)/V(1), and a_n - xi b_n is a tail of U - xi V, so it decays like
R^(-n) for any R below the radius.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import gmpy2
import mpmath
import numpy as np

from .balls import ComplexBall, working_precision
from .errors import ConsistencyViolation, RadiusTooSmall
from .qi import ONE, ZERO, GaussianRational
from .series import GSeries, evaluate, geometric, mul

__all__ = [
    "AperyPair",
    "MuBoundInput",
    "NoConclusion",
    "partial_sum_pair",
    "prefix_sums",
    "denominator_growth",
    "mu_bound",
    "limit_check",
    "apery_zeta3_sequences",
]


@dataclass(frozen=True)
class AperyPair:
    a: tuple[GaussianRational, ...]
    b: tuple[GaussianRational, ...]
    target: ComplexBall
    A_series: GSeries
    B_series: GSeries
    error_rate: float
    threshold: int = 0


@dataclass(frozen=True)
class MuBoundInput:
    C: float
    r: float
    R: float

    def __post_init__(self):
        if not (self.C > 0 and self.r > 0 and self.R > 0):
            raise ValueError("C, r and R must be positive")
        if not self.R > self.r:
            raise ValueError("need R > r")


@dataclass(frozen=True)
class NoConclusion:
    """mu_bound outcome when C >= R: the criterion says nothing."""

    reason: str

    def to_json(self) -> dict:
        return {"conclusion": None, "reason": self.reason}


def prefix_sums(cs: Sequence[GaussianRational]) -> list[GaussianRational]:
    out, acc = [], ZERO
    for c in cs:
        acc = acc + c
        out.append(acc)
    return out


def _radius(f: GSeries) -> float:
    return f.radius_hint if f.radius_hint is not None else 0.0


def partial_sum_pair(U: GSeries, V: GSeries, *, precision_bits: int | None = None) -> AperyPair:
    """(a_n, b_n) = prefix sums of U and V, with xi = U(1)/V(1)."""
    rU, rV = _radius(U), _radius(V)
    if rU <= 1 or rV <= 1:
        raise RadiusTooSmall(f"radius hints {rU}, {rV} must exceed 1")
    rate = min(rU, rV)
    N = min(U.order, V.order)
    if precision_bits is None:
        # enough bits to resolve a_n - xi b_n down to rate^(-N)
        per = math.log2(rate) if math.isfinite(rate) else 0.0
        precision_bits = max(256, int(N * min(per, 64)) + 128)
    a = tuple(prefix_sums(U.coeffs[: N + 1]))
    b = tuple(prefix_sums(V.coeffs[: N + 1]))
    ones = geometric(ONE, N)
    A = mul(U.truncate(N), ones)
    B = mul(V.truncate(N), ones)
    with working_precision(precision_bits):
        num = evaluate(U, ONE, precision_bits=precision_bits)
        den = evaluate(V, ONE, precision_bits=precision_bits)
        target = num / den
    threshold = 0
    for n in range(N, -1, -1):
        if b[n].is_zero():
            threshold = n + 1
            break
    return AperyPair(a, b, target, A, B, float(rate), threshold)


def _den(x: GaussianRational) -> int:
    return math.lcm(int(x.re.denominator), int(x.im.denominator))


def denominator_growth(xs: Sequence[GaussianRational]) -> float:
    """Slope of log D_n against n over the top half, D_n = lcm of the denominators so far."""
    if len(xs) < 64:
        raise ValueError("need at least 64 terms")
    D = gmpy2.mpz(1)
    logs = []
    for x in xs:
        d = _den(x) if isinstance(x, GaussianRational) else int(x.denominator)
        D = gmpy2.lcm(D, d)
        logs.append(float(gmpy2.log(D)) if D > 1 else 0.0)
    n = np.arange(len(xs))
    half = len(xs) // 2
    slope, _ = np.polyfit(n[half:], np.array(logs[half:]), 1)
    return float(slope)


def mu_bound(inp: MuBoundInput, *, precision_bits: int = 128):
    """1 - log(C/r)/log(C/R) when C < R, else NoConclusion."""
    C, r, R = inp.C, inp.r, inp.R
    if C >= R:
        return NoConclusion(f"C = {C} is not below R = {R}")
    if C * C < R * r:
        warnings.warn(
            f"C = {C} < sqrt(R r) = {math.sqrt(R * r)}: no genuine approximation pair has these constants",
            ConsistencyViolation,
            stacklevel=2,
        )
    with working_precision(precision_bits):
        Cm, rm, Rm = mpmath.mpf(C), mpmath.mpf(r), mpmath.mpf(R)
        val = 1 - mpmath.log(Cm / rm) / mpmath.log(Cm / Rm)
    return float(val)


def limit_check(pair: AperyPair, tolerance_schedule: Sequence[int] | None = None, *, rate: float | None = None) -> dict:
    """Pass/fail report for b_n != 0, a_n/b_n -> xi and |a_n - xi b_n| rate^n bounded."""
    rate = pair.error_rate if rate is None else rate
    N = len(pair.a) - 1
    bits = max(256, int(N * min(math.log2(rate), 64)) + 128) if rate > 1 else 256
    checks = []
    nz = all(not pair.b[n].is_zero() for n in range(pair.threshold, N + 1))
    checks.append({"name": "b_nonzero", "pass": nz, "detail": f"b_n != 0 for n >= {pair.threshold}"})
    with working_precision(bits):
        xi = pair.target
        floor = mpmath.mpf(2) ** (-bits // 2) + 4 * xi.rad
        sched = list(tolerance_schedule) if tolerance_schedule else [n for n in (2**k for k in range(32)) if n <= N]
        sched = [n for n in sched if pair.threshold <= n <= N]
        errs = []
        for n in sched:
            ratio = ComplexBall(pair.a[n]) / ComplexBall(pair.b[n])
            errs.append((ratio - xi).abs_upper())
        mono = all(e2 <= e1 or e2 <= floor * 8 for e1, e2 in zip(errs, errs[1:]))
        checks.append(
            {
                "name": "ratio_converges",
                "pass": bool(mono),
                "detail": "|a_n/b_n - xi| at n = " + ", ".join(f"{n}: {mpmath.nstr(e, 4)}" for n, e in zip(sched, errs)),
            }
        )
        start = pair.threshold
        normed = []
        for n in range(start, N + 1):
            d = (ComplexBall(pair.a[n]) - xi * ComplexBall(pair.b[n])).abs_upper()
            normed.append(d * mpmath.mpf(rate) ** n)
        q = max(1, len(normed) // 4)
        K = max(normed[:q]) * 16 + mpmath.mpf(2) ** -64
        worst = max(normed[q:]) if normed[q:] else mpmath.mpf(0)
        checks.append(
            {
                "name": "normalized_error_bounded",
                "pass": bool(worst <= K),
                "detail": f"max |a_n - xi b_n| rate^n = {mpmath.nstr(worst, 4)} vs bound {mpmath.nstr(K, 4)} at rate {rate}",
            }
        )
    return {"schema": "gvalues.limit_check/1", "rate": rate, "pass": all(c["pass"] for c in checks), "checks": checks}


def apery_zeta3_sequences(N: int) -> tuple[list, list]:
    """Apery's b_n and a_n for zeta(3) from the classical three-term recurrence.

    (n+1)^3 u_(n+1) = (34n^3 + 51n^2 + 27n + 5) u_n - n^3 u_(n-1) with
    b_0 = 1, b_1 = 5, a_0 = 0, a_1 = 6; a_n/b_n -> zeta(3).  Demo data taken
    from the literature, not derived in this package.
    """
    b = [gmpy2.mpq(1), gmpy2.mpq(5)]
    a = [gmpy2.mpq(0), gmpy2.mpq(6)]
    for n in range(1, N):
        p = 34 * n**3 + 51 * n**2 + 27 * n + 5
        d = (n + 1) ** 3
        b.append((p * b[n] - n**3 * b[n - 1]) / d)
        a.append((p * a[n] - n**3 * a[n - 1]) / d)
    return [GaussianRational(x) for x in a[: N + 1]], [GaussianRational(x) for x in b[: N + 1]]
