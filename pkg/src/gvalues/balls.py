"""Complex ball arithmetic on top of mpmath.

A :class:`ComplexBall` is a disk ``{z : |z - mid| <= rad}``.  The midpoint is
an ``mpc`` rounded at the ambient mpmath precision; every operation adds the
rounding error of the midpoint computation to the radius, and radii are
nudged upward so that they never understate the true error.
"""
from __future__ import annotations

import contextlib
from typing import Iterable

import mpmath
from mpmath import mpc, mpf

from .qi import GaussianRational, mpf_to_fraction

__all__ = ["ComplexBall", "ball", "working_precision", "ball_sum", "ball_det"]

DEFAULT_PRECISION_BITS = 256


@contextlib.contextmanager
def working_precision(bits: int):
    """Run a block with mpmath at ``bits`` of precision (restored on exit)."""
    with mpmath.workprec(int(bits)):
        yield


def _ulp_err(z: mpc) -> mpf:
    # bound on the rounding error of one arithmetic step producing z
    return (abs(z.real) + abs(z.imag)) * mpf(2) ** (2 - mpmath.mp.prec)


def _up(r) -> mpf:
    r = mpf(r)
    return r + abs(r) * mpf(2) ** (4 - mpmath.mp.prec)



def _mantissa_bits(z) -> int:
    z = mpc(z)
    return max(z.real._mpf_[3], z.imag._mpf_[3], 2)


class ComplexBall:
    __slots__ = ("mid", "rad")

    def __init__(self, mid=0, rad=0):
        if isinstance(mid, GaussianRational):
            g = mid
            mid = g.to_mpc()
            rad = mpf(rad) + _ulp_err(mid)
        self.mid = mpc(mid)
        self.rad = mpf(rad)
        if self.rad < 0:
            raise ValueError("negative ball radius")

    @classmethod
    def exact(cls, x) -> "ComplexBall":
        """Ball around an exact value; the radius covers the rounding of ``x``."""
        if isinstance(x, GaussianRational):
            return cls(x)
        if isinstance(x, ComplexBall):
            return x
        z = mpc(x)
        if isinstance(x, (int, mpf, mpc, float, complex)):
            return cls(z, 0)
        return cls(z, _ulp_err(z))

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ComplexBall":
        if isinstance(other, ComplexBall):
            return other
        return ComplexBall.exact(other)

    def __add__(self, other):
        o = self._coerce(other)
        m = self.mid + o.mid
        return ComplexBall(m, _up(self.rad + o.rad + _ulp_err(m)))

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad)

    def __sub__(self, other):
        o = self._coerce(other)
        m = self.mid - o.mid
        return ComplexBall(m, _up(self.rad + o.rad + _ulp_err(m)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        m = self.mid * o.mid
        r = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return ComplexBall(m, _up(r + _ulp_err(m)))

    __rmul__ = __mul__

    def inverse(self) -> "ComplexBall":
        a = abs(self.mid)
        if a <= self.rad:
            raise ZeroDivisionError("ball contains zero")
        m = 1 / self.mid
        r = self.rad / (a * (a - self.rad))
        return ComplexBall(m, _up(r + _ulp_err(m)))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ComplexBall(1, 0), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "ComplexBall":
        return ComplexBall(mpmath.conj(self.mid), self.rad)

    # -- elementary functions ---------------------------------------------
    def exp(self) -> "ComplexBall":
        m = mpmath.exp(self.mid)
        # |exp(z + d) - exp(z)| <= |exp(z)| (e^|d| - 1)
        r = abs(m) * mpmath.expm1(self.rad)
        return ComplexBall(m, _up(r + _ulp_err(m)))

    def log(self) -> "ComplexBall":
        """Principal logarithm; refuses balls touching the cut (-inf, 0]."""
        if self.mid.real - self.rad <= 0 and abs(self.mid.imag) <= self.rad:
            raise ValueError("ball meets the branch cut of log")
        m = mpmath.log(self.mid)
        a = abs(self.mid)
        # |log(z+d) - log z| <= -log(1 - |d|/|z|) for |d| < |z|
        r = -mpmath.log1p(-self.rad / a)
        return ComplexBall(m, _up(r + _ulp_err(m)))

    def sqrt(self) -> "ComplexBall":
        """Principal square root (ball must avoid the cut)."""
        if self.mid.real - self.rad <= 0 and abs(self.mid.imag) <= self.rad:
            raise ValueError("ball meets the branch cut of sqrt")
        a = abs(self.mid)
        m = mpmath.sqrt(self.mid)
        # both roots lie in the open right half-plane
        r = self.rad / mpmath.sqrt(a - self.rad)
        return ComplexBall(m, _up(r + _ulp_err(m)))

    # -- queries ----------------------------------------------------------
    def abs_upper(self) -> mpf:
        return _up(abs(self.mid) + self.rad)

    def abs_lower(self) -> mpf:
        v = abs(self.mid) - self.rad
        return v if v > 0 else mpf(0)

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def contains(self, z) -> bool:
        if isinstance(z, ComplexBall):
            # compare at enough bits to hold both midpoints, so a tight ball
            # is not judged at a coarser precision than it was built with
            bits = max(mpmath.mp.prec, _mantissa_bits(self.mid), _mantissa_bits(z.mid)) + 64
            with mpmath.workprec(bits):
                return abs(z.mid - self.mid) + z.rad <= self.rad
        # points are tested exactly in Q(i)
        if isinstance(z, mpf):
            z = GaussianRational(mpf_to_fraction(z))
        elif not isinstance(z, GaussianRational):
            w = z if isinstance(z, mpc) else mpc(z)
            z = GaussianRational(mpf_to_fraction(w.real), mpf_to_fraction(w.imag))
        mid = GaussianRational(mpf_to_fraction(self.mid.real), mpf_to_fraction(self.mid.imag))
        rad = mpf_to_fraction(self.rad)
        return (z - mid).norm() <= rad * rad

    def overlaps(self, other: "ComplexBall") -> bool:
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def inflate(self, extra) -> "ComplexBall":
        return ComplexBall(self.mid, _up(self.rad + mpf(extra)))

    def intersect(self, other: "ComplexBall") -> "ComplexBall":
        """A ball containing the intersection (the smaller one if nested)."""
        if not self.overlaps(other):
            raise ValueError("disjoint balls")
        if other.contains(self):
            return self
        if self.contains(other):
            return other
        return self if self.rad <= other.rad else other

    @property
    def real(self) -> mpf:
        return self.mid.real

    @property
    def imag(self) -> mpf:
        return self.mid.imag

    def __complex__(self):
        return complex(self.mid)

    def __repr__(self):
        return f"ComplexBall({mpmath.nstr(self.mid, 20)} +/- {mpmath.nstr(self.rad, 3)})"

    def to_json(self, digits: int | None = None) -> dict:
        """Decimal form that still encloses the ball.

        ``digits`` defaults to enough significant digits to resolve the
        radius; the decimal rounding of the midpoint is added to ``err``,
        which is itself rounded upward.
        """
        bits = max(mpmath.mp.prec, _mantissa_bits(self.mid)) + 64
        with mpmath.workprec(bits):
            if digits is None:
                size = max(abs(self.mid.real), abs(self.mid.imag))
                if size == 0 or self.rad == 0:
                    digits = int(bits * 0.30103)
                else:
                    digits = int(mpmath.ceil(mpmath.log10(size / self.rad))) + 3
                digits = max(17, min(digits, int(bits * 0.30103)))
            re = mpmath.nstr(self.mid.real, digits, strip_zeros=False)
            im = mpmath.nstr(self.mid.imag, digits, strip_zeros=False)
            shift = abs(mpc(mpmath.mpf(re), mpmath.mpf(im)) - self.mid)
            err = (self.rad + shift) * (1 + mpf(10) ** -5)
            return {"re": re, "im": im, "err": mpmath.nstr(err, 6)}


def ball(x, rad=0) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x.inflate(rad) if rad else x
    b = ComplexBall.exact(x)
    return b.inflate(rad) if rad else b


def ball_sum(balls: Iterable[ComplexBall]) -> ComplexBall:
    acc = ComplexBall(0, 0)
    for b in balls:
        acc = acc + b
    return acc


def ball_det(m: list[list[ComplexBall]]) -> ComplexBall:
    """Determinant by cofactor expansion (sizes here are tiny)."""
    n = len(m)
    if n == 0:
        return ComplexBall(1, 0)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    acc = ComplexBall(0, 0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * ball_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc
