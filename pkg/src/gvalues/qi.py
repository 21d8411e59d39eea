"""Exact arithmetic in Q(i) and in Q(i)[X].

Components are ``gmpy2.mpq`` so every operation is exact and reasonably fast.
Values are immutable by convention; nothing in the package mutates them.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import mpmath
from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "QiPolynomial",
    "RationalFunction",
    "I",
    "ONE",
    "ZERO",
    "as_gr",
    "poly_eval",
    "poly_derivative",
]

_Q0 = mpq(0)
_Q1 = mpq(1)


def _to_mpq(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, Rational):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussianRational:
    """a + b*i with a, b rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def from_complex_approx(cls, z, max_denominator: int) -> "GaussianRational":
        """Nearest Gaussian rational to a float/mpc with bounded denominators."""
        z = mpmath.mpc(z)
        re = mpf_to_fraction(z.real).limit_denominator(max_denominator)
        im = mpf_to_fraction(z.imag).limit_denominator(max_denominator)
        return cls(re, im)

    @classmethod
    def dyadic(cls, z, k: int) -> "GaussianRational":
        """Round both coordinates of ``z`` to the nearest multiple of 2**-k."""
        z = mpmath.mpc(z)
        scale = mpmath.mpf(2) ** k
        re = int(mpmath.nint(z.real * scale))
        im = int(mpmath.nint(z.imag * scale))
        return cls(mpq(re, 2**k), mpq(im, 2**k))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._raw(a * c, _Q0)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "GaussianRational":
        nrm = self.norm()
        if not nrm:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational._raw(self.re / nrm, -self.im / nrm)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> mpq:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    # -- predicates / conversion ------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def denominator(self) -> int:
        """lcm of the denominators of the real and imaginary parts."""
        return math.lcm(int(self.re.denominator), int(self.im.denominator))

    def to_mpc(self) -> mpmath.mpc:
        """Rounded to the current mpmath precision."""
        re = mpmath.mpf(int(self.re.numerator)) / int(self.re.denominator)
        im = mpmath.mpf(int(self.im.numerator)) / int(self.im.denominator)
        return mpmath.mpc(re, im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


def mpf_to_fraction(x) -> Fraction:
    """Exact value of an mpmath mpf (read from its raw tuple, never re-rounded)."""
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    sign, man, exp, _ = x._mpf_
    if not man:
        if exp:
            raise ValueError(f"cannot convert {x} to a fraction")
        return Fraction(0)
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def as_gr(x):
    """Coerce ints/Fractions/mpq to GaussianRational; NotImplemented otherwise."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction, Rational)) or type(x).__name__ == "mpq":
        return GaussianRational._raw(_to_mpq(x), _Q0)
    return NotImplemented


ZERO = GaussianRational._raw(_Q0, _Q0)
ONE = GaussianRational._raw(_Q1, _Q0)
I = GaussianRational._raw(_Q0, _Q1)


def _gr(x) -> GaussianRational:
    g = as_gr(x)
    if g is NotImplemented:
        raise TypeError(f"not an exact Q(i) value: {x!r}")
    return g


class QiPolynomial:
    """Univariate polynomial with Q(i) coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_gr(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "QiPolynomial":
        return cls([ZERO] * k + [_gr(c)])

    @classmethod
    def constant(cls, c) -> "QiPolynomial":
        return cls([c])

    X: "QiPolynomial"

    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __eq__(self, other):
        if isinstance(other, QiPolynomial):
            return self.coeffs == other.coeffs
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == QiPolynomial([o]).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QiPolynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = f"({c})" if (c.re and c.im) else str(c)
            if k == 0:
                terms.append(cs)
            elif k == 1:
                terms.append(f"{cs}*X")
            else:
                terms.append(f"{cs}*X^{k}")
        return " + ".join(terms)

    # -- ring operations --------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QiPolynomial):
            return other
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return QiPolynomial([o])

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return QiPolynomial([self[k] + o[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return QiPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return QiPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return QiPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = QiPolynomial([ONE]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "QiPolynomial":
        c = _gr(c)
        return QiPolynomial([c * a for a in self.coeffs])

    def divmod(self, other: "QiPolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        inv_lc = other.leading_coefficient().inverse()
        quot = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lc
            if c.is_zero():
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - c * b
        return QiPolynomial(quot), QiPolynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def monic(self) -> "QiPolynomial":
        if self.is_zero():
            return self
        return self.scale(self.leading_coefficient().inverse())

    def gcd(self, other: "QiPolynomial") -> "QiPolynomial":
        """Monic gcd (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1].monic()
        return a.monic()

    # -- calculus / evaluation --------------------------------------------
    def derivative(self) -> "QiPolynomial":
        return QiPolynomial([c * k for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, z):
        return poly_eval(self, z)

    def taylor_shift(self, c) -> "QiPolynomial":
        """The polynomial t -> p(t + c).

        Runs Horner on Gaussian integers: with L p integral and c = a/b,
        b^n L p((a + s)/b) has integer coefficients in s, and t = s/b.
        """
        c = _gr(c)
        n = self.degree()
        if n <= 0 or c.is_zero():
            return self
        L = 1
        for x in self.coeffs:
            L = math.lcm(L, x.denominator())
        b = c.denominator()
        ar, ai = int(c.re * b), int(c.im * b)
        ints = [(int(x.re * L), int(x.im * L)) for x in self.coeffs]
        # acc(s) = sum_j L p_j (a + s)^j b^(n - j), built by Horner
        accr, acci = [ints[n][0]], [ints[n][1]]
        bpow = 1
        for j in range(n - 1, -1, -1):
            bpow *= b
            # acc <- acc * (a + s) + L p_j b^(n - j)
            nr = [0] * (len(accr) + 1)
            ni = [0] * (len(accr) + 1)
            for k, (xr, xi) in enumerate(zip(accr, acci)):
                nr[k] += xr * ar - xi * ai
                ni[k] += xr * ai + xi * ar
                nr[k + 1] += xr
                ni[k + 1] += xi
            nr[0] += ints[j][0] * bpow
            ni[0] += ints[j][1] * bpow
            accr, acci = nr, ni
        # coefficient of t^k is acc_k b^k / (b^n L)
        out = []
        den = b**n * L
        for k in range(n + 1):
            scale = mpq(b**k, den)
            out.append(GaussianRational._raw(accr[k] * scale, acci[k] * scale))
        return QiPolynomial(out)

    def compose_power(self, m: int) -> "QiPolynomial":
        """The polynomial p(X**m)."""
        out = [ZERO] * (m * max(self.degree(), 0) + 1)
        for k, c in enumerate(self.coeffs):
            out[m * k] = c
        return QiPolynomial(out)

    def squarefree_decomposition(self) -> list[tuple["QiPolynomial", int]]:
        """Yun's algorithm: [(f_k, k)] with p = lc * prod f_k**k, f_k squarefree, coprime."""
        if self.degree() < 1:
            return []
        f = self.monic()
        d = f.derivative()
        a = f.gcd(d)
        b = f // a
        c = d // a
        out = []
        k = 1
        while b.degree() > 0:
            y = c - b.derivative()
            g = b.gcd(y)
            if g.degree() > 0:
                out.append((g, k))
            b = b // g
            c = y // g
            k += 1
        return out

    def squarefree_part(self) -> "QiPolynomial":
        if self.degree() < 1:
            return QiPolynomial([ONE])
        return self.monic() // self.gcd(self.derivative())

    def conjugate(self) -> "QiPolynomial":
        return QiPolynomial([c.conjugate() for c in self.coeffs])


QiPolynomial.X = QiPolynomial([ZERO, ONE])


def poly_eval(p: QiPolynomial, z) -> GaussianRational:
    """Exact Horner evaluation."""
    z = _gr(z)
    acc = ZERO
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def poly_derivative(p: QiPolynomial) -> QiPolynomial:
    return p.derivative()


class RationalFunction:
    """num/den over Q(i), reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: QiPolynomial, den: QiPolynomial | None = None, *, reduce: bool = True):
        if den is None:
            den = QiPolynomial([ONE])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = QiPolynomial([ONE])
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num, den = num // g, den // g
            lc = den.leading_coefficient()
            if lc != ONE:
                inv = lc.inverse()
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: QiPolynomial) -> "RationalFunction":
        return cls(p, QiPolynomial([ONE]), reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, QiPolynomial):
            return RationalFunction.from_poly(other)
        o = as_gr(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction.from_poly(QiPolynomial([o]))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return RationalFunction(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __call__(self, z) -> GaussianRational:
        return poly_eval(self.num, z) / poly_eval(self.den, z)


def poly_from_ints(coeffs: Sequence) -> QiPolynomial:
    """Convenience: QiPolynomial from plain numbers (lowest degree first)."""
    return QiPolynomial([_gr(c) for c in coeffs])
