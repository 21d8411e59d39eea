"""Truncated power series over Q(i).

``GSeries`` stores the coefficients a_0..a_N of a germ sum a_n z^n exactly.
Binary operations truncate to the smaller order: coefficients are never
invented.  Floating point only enters through :func:`evaluate` and
:func:`radius_estimate`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import mpmath
import numpy as np
from gmpy2 import mpq

from .balls import ComplexBall, working_precision
from .errors import AllZeroTail, DivisionByNonUnit, TailUnbounded
from .qi import ONE, ZERO, GaussianRational, QiPolynomial, as_gr

__all__ = [
    "GSeries",
    "add",
    "sub",
    "mul",
    "scale",
    "hadamard",
    "differentiate",
    "antiderivative",
    "divide",
    "affine_compose",
    "evaluate",
    "radius_estimate",
    "conjugate",
    "compose_polynomial",
    "geometric",
    "majorant",
]

_Q0 = mpq(0)


def _gr(x) -> GaussianRational:
    g = as_gr(x)
    if g is NotImplemented:
        raise TypeError(f"not an exact Q(i) value: {x!r}")
    return g


@dataclass(frozen=True)
class GSeries:
    coeffs: tuple[GaussianRational, ...]
    radius_hint: float | None = None
    center_label: str | None = None

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        if not isinstance(self.coeffs, tuple) or not all(isinstance(c, GaussianRational) for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(_gr(c) for c in self.coeffs))
        if self.radius_hint is not None and not self.radius_hint > 0:
            raise ValueError("radius_hint must be positive")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, coeffs, order: int | None = None, radius_hint=None, center_label=None) -> "GSeries":
        cs = [_gr(c) for c in coeffs]
        if order is not None:
            cs = (cs + [ZERO] * (order + 1 - len(cs)))[: order + 1]
        return cls(tuple(cs), radius_hint, center_label)

    @classmethod
    def from_function(cls, fn: Callable[[int], object], order: int, **kw) -> "GSeries":
        return cls(tuple(_gr(fn(n)) for n in range(order + 1)), **kw)

    @classmethod
    def constant(cls, c, order: int) -> "GSeries":
        return cls.from_coeffs([c], order=order, radius_hint=math.inf)

    @classmethod
    def from_polynomial(cls, p: QiPolynomial, order: int) -> "GSeries":
        return cls.from_coeffs(p.coeffs or [ZERO], order=order, radius_hint=math.inf)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "GSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return replace(self, coeffs=self.coeffs[: order + 1])

    def with_radius(self, radius_hint) -> "GSeries":
        return replace(self, radius_hint=radius_hint)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    # operator sugar
    def __add__(self, other):
        return add(self, _as_series(other, self.order))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _as_series(other, self.order))

    def __rsub__(self, other):
        return sub(_as_series(other, self.order), self)

    def __mul__(self, other):
        if isinstance(other, GSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1)

    def __truediv__(self, other):
        if isinstance(other, GSeries):
            return divide(self, other)
        return scale(self, _gr(other).inverse())


def _as_series(x, order: int) -> GSeries:
    if isinstance(x, GSeries):
        return x
    return GSeries.constant(x, order)


def _min_radius(*rs):
    vals = [r for r in rs if r is not None]
    if len(vals) < len(rs):
        return None
    return min(vals)


def geometric(ratio, order: int) -> GSeries:
    """sum (ratio z)^n."""
    r = _gr(ratio)
    cs = [ONE]
    for _ in range(order):
        cs.append(cs[-1] * r)
    rad = math.inf if r.is_zero() else 1 / math.sqrt(float(r.norm()))
    return GSeries(tuple(cs), rad)


def add(f: GSeries, g: GSeries) -> GSeries:
    n = min(f.order, g.order)
    cs = tuple(f.coeffs[k] + g.coeffs[k] for k in range(n + 1))
    return GSeries(cs, _min_radius(f.radius_hint, g.radius_hint), f.center_label)


def sub(f: GSeries, g: GSeries) -> GSeries:
    n = min(f.order, g.order)
    cs = tuple(f.coeffs[k] - g.coeffs[k] for k in range(n + 1))
    return GSeries(cs, _min_radius(f.radius_hint, g.radius_hint), f.center_label)


def scale(f: GSeries, c) -> GSeries:
    c = _gr(c)
    return GSeries(tuple(c * a for a in f.coeffs), f.radius_hint, f.center_label)


def _split(cs: Sequence[GaussianRational]):
    return [c.re for c in cs], [c.im for c in cs]


def _cauchy_real(a: list, b: list, n: int) -> list:
    out = []
    for k in range(n + 1):
        s = _Q0
        for i in range(k + 1):
            ai = a[i]
            if ai:
                bi = b[k - i]
                if bi:
                    s += ai * bi
        out.append(s)
    return out


def _cauchy(fc, gc, n: int) -> tuple[GaussianRational, ...]:
    fr, fi = _split(fc[: n + 1])
    gr, gi = _split(gc[: n + 1])
    f_real = not any(fi)
    g_real = not any(gi)
    rr = _cauchy_real(fr, gr, n)
    if f_real and g_real:
        return tuple(GaussianRational._raw(x, _Q0) for x in rr)
    if f_real:
        ri = _cauchy_real(fr, gi, n)
        return tuple(GaussianRational._raw(x, y) for x, y in zip(rr, ri))
    if g_real:
        ri = _cauchy_real(fi, gr, n)
        return tuple(GaussianRational._raw(x, y) for x, y in zip(rr, ri))
    ii = _cauchy_real(fi, gi, n)
    ri = _cauchy_real(fr, gi, n)
    ir = _cauchy_real(fi, gr, n)
    return tuple(GaussianRational._raw(a - b, c + d) for a, b, c, d in zip(rr, ii, ri, ir))


def mul(f: GSeries, g: GSeries) -> GSeries:
    """Cauchy product truncated to min(order)."""
    n = min(f.order, g.order)
    return GSeries(_cauchy(f.coeffs, g.coeffs, n), _min_radius(f.radius_hint, g.radius_hint), f.center_label)


def hadamard(f: GSeries, g: GSeries) -> GSeries:
    n = min(f.order, g.order)
    cs = tuple(f.coeffs[k] * g.coeffs[k] for k in range(n + 1))
    rf, rg = f.radius_hint, g.radius_hint
    rad = None if rf is None or rg is None else rf * rg
    return GSeries(cs, rad, f.center_label)


def conjugate(f: GSeries) -> GSeries:
    return GSeries(tuple(c.conjugate() for c in f.coeffs), f.radius_hint, f.center_label)


def differentiate(f: GSeries) -> GSeries:
    """Termwise derivative; the order drops by one (a constant stays order 0)."""
    if f.order == 0:
        return GSeries((ZERO,), f.radius_hint, f.center_label)
    cs = tuple(f.coeffs[n] * n for n in range(1, f.order + 1))
    return GSeries(cs, f.radius_hint, f.center_label)


def antiderivative(f: GSeries) -> GSeries:
    """Termwise antiderivative with zero constant term; the order rises by one."""
    cs = [ZERO]
    for n, c in enumerate(f.coeffs):
        cs.append(GaussianRational._raw(c.re / (n + 1), c.im / (n + 1)))
    return GSeries(tuple(cs), f.radius_hint, f.center_label)


def divide(f: GSeries, g: GSeries) -> GSeries:
    """Quotient f/g truncated to min(order); g must be a unit."""
    if g.coeffs[0].is_zero():
        raise DivisionByNonUnit("divisor has zero constant term")
    n = min(f.order, g.order)
    inv0 = g.coeffs[0].inverse()
    gc = g.coeffs
    q: list[GaussianRational] = []
    for k in range(n + 1):
        s = f.coeffs[k]
        for i in range(1, k + 1):
            gi = gc[i]
            if not gi.is_zero():
                s = s - gi * q[k - i]
        q.append(s * inv0)
    return GSeries(tuple(q), _min_radius(f.radius_hint, g.radius_hint), f.center_label)


def affine_compose(h: GSeries, zeta, z0) -> GSeries:
    """Re-expand g(z) = h(zeta - z) along the segment zeta -> z0.

    Returns sum c_n (zeta - z0)^n z^n, whose value at z = 1 is g(z0).
    """
    zeta, z0 = _gr(zeta), _gr(z0)
    d = zeta - z0
    cs = []
    p = ONE
    for c in h.coeffs:
        cs.append(c * p)
        p = p * d
    if d.is_zero():
        rad = math.inf
    elif h.radius_hint is None:
        rad = None
    else:
        rad = h.radius_hint / math.sqrt(float(d.norm()))
    return GSeries(tuple(cs), rad, "z")


def compose_polynomial(p: QiPolynomial, f: GSeries) -> GSeries:
    """p(f(z)) by Horner in the series ring."""
    acc = GSeries.constant(ZERO, f.order)
    for c in reversed(p.coeffs):
        acc = add(mul(acc, f), GSeries.constant(c, f.order))
    return GSeries(acc.coeffs, f.radius_hint, f.center_label)


def _abs_mpf(c: GaussianRational):
    """|c| rounded up (tail bounds only need an upper estimate)."""
    return ComplexBall(c).abs_upper()


def evaluate(
    f: GSeries,
    z,
    tail_ratio: float | None = None,
    *,
    precision_bits: int = 256,
    partial_only: bool = False,
    window: int = 8,
) -> ComplexBall:
    """Ball containing sum a_n z^n.

    The partial sum up to the truncation order is computed in ball
    arithmetic.  The neglected tail is bounded by ``M q/(1-q)`` where ``q`` is
    ``tail_ratio`` (the assumed ratio bound |a_{n+1} z^{n+1}| / |a_n z^n|
    beyond the truncation) and ``M`` the largest of the last ``window`` terms
    carried forward geometrically to index N.  Without ``tail_ratio`` the
    ratio |z|/radius_hint is used.  ``partial_only`` skips the tail (for
    boundary points where no geometric bound exists).
    """
    with working_precision(precision_bits):
        zb = z if isinstance(z, ComplexBall) else ComplexBall.exact(z)
        # Horner from the top
        acc = ComplexBall(0, 0)
        for c in reversed(f.coeffs):
            acc = acc * zb + ComplexBall(c)
        if partial_only:
            return acc
        if tail_ratio is None:
            if f.radius_hint is None:
                raise TailUnbounded("no radius_hint and no tail_ratio supplied")
            if math.isinf(f.radius_hint):
                q = mpmath.mpf(0)
            else:
                q = zb.abs_upper() / mpmath.mpf(f.radius_hint)
        else:
            q = mpmath.mpf(tail_ratio)
        if q >= 1:
            raise TailUnbounded(f"tail ratio {mpmath.nstr(q, 5)} is not below 1")
        if q == 0:
            return acc
        n = f.order
        az = zb.abs_upper()
        m = mpmath.mpf(0)
        for k in range(max(0, n - window + 1), n + 1):
            c = f.coeffs[k]
            if c.is_zero():
                continue
            term = _abs_mpf(c) * az**k * q ** (n - k)
            if term > m:
                m = term
        tail = m * q / (1 - q)
        return acc.inflate(tail)


def majorant(f: GSeries, r, tail_ratio, *, precision_bits: int = 256, window: int = 8) -> mpmath.mpf:
    """Upper bound for sum |a_n| r^n, tail treated as in :func:`evaluate`."""
    with working_precision(precision_bits):
        r = mpmath.mpf(r)
        q = mpmath.mpf(tail_ratio)
        if q >= 1:
            raise TailUnbounded(f"tail ratio {mpmath.nstr(q, 5)} is not below 1")
        total = mpmath.mpf(0)
        terms = []
        for k, c in enumerate(f.coeffs):
            t = ComplexBall(c).abs_upper() * r**k if not c.is_zero() else mpmath.mpf(0)
            terms.append(t)
            total += t
        n = f.order
        m = max((terms[k] * q ** (n - k) for k in range(max(0, n - window + 1), n + 1)), default=0)
        total += m * q / (1 - q)
        return total * (1 + mpmath.mpf(2) ** (8 - precision_bits))


def radius_estimate(f: GSeries) -> float:
    """Empirical Cauchy-Hadamard radius (heuristic).

    Fits log|a_n| = alpha - n log(r) by least squares over the upper half
    of the stored coefficients (zeros skipped) and returns r.  About +-5 %
    on geometric-type tails of length >= 256.  Returns ``math.inf`` when the
    upper half is all zero (polynomial case); raises AllZeroTail if the
    whole series is zero.
    """
    if f.order < 32:
        raise ValueError("radius_estimate needs order >= 32")
    lo = f.order // 2
    ns, logs = [], []
    for n in range(lo, f.order + 1):
        c = f.coeffs[n]
        if c.is_zero():
            continue
        ns.append(n)
        logs.append(float(mpmath.log(_abs_mpf(c))))
    if len(ns) < 2:
        if f.is_zero():
            raise AllZeroTail("series is identically zero")
        return math.inf
    slope = np.polyfit(np.array(ns, dtype=float), np.array(logs), 1)[0]
    return float(math.exp(-slope))
