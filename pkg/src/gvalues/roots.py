"""Certified root isolation for polynomials over Q(i).

The polynomial is first split into exact squarefree factors (Yun), so every
returned ball carries an exact multiplicity.  Roots of each squarefree factor
are approximated with mpmath's Durand-Kerner solver, polished by Newton
steps, and then certified with the Weierstrass (Braess-Hadeler) inclusion
disks ``D(z_i, n |p(z_i)| / |lc prod_{j != i} (z_i - z_j)|)``: the union of
the disks holds every root and an isolated disk holds exactly one.  Where it
helps, a Krawczyk test then tightens an isolated disk.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

from .balls import ComplexBall, working_precision
from .errors import PrecisionExhausted
from .qi import GaussianRational, QiPolynomial, mpf_to_fraction

__all__ = [
    "RootBall",
    "complex_roots",
    "ball_poly_eval",
    "krawczyk_contains_unique_root",
    "isolation_radius",
    "certify_simple_root",
]


@dataclass(frozen=True)
class RootBall:
    ball: ComplexBall
    multiplicity: int = 1

    @property
    def mid(self):
        return self.ball.mid

    @property
    def rad(self):
        return self.ball.rad


@functools.lru_cache(maxsize=64)
def _ball_coeffs(p: QiPolynomial, prec: int) -> tuple[ComplexBall, ...]:
    return tuple(ComplexBall(c) for c in p.coeffs)


def ball_poly_eval(p: QiPolynomial, z) -> ComplexBall:
    """Horner evaluation of ``p`` over a ball (or exact point) in ball arithmetic."""
    zb = z if isinstance(z, ComplexBall) else ComplexBall.exact(z)
    acc = ComplexBall(0, 0)
    for c in reversed(_ball_coeffs(p, mpmath.mp.prec)):
        acc = acc * zb + c
    return acc


def _mpc_coeffs(p: QiPolynomial) -> list[mpc]:
    return [c.to_mpc() for c in p.coeffs]


def _horner(cs: list[mpc], z: mpc) -> tuple[mpc, mpc]:
    """Value and derivative, coefficients lowest-degree first."""
    v = mpc(0)
    d = mpc(0)
    for c in reversed(cs):
        d = d * z + v
        v = v * z + c
    return v, d


def _approximate_roots(p: QiPolynomial, wp: int) -> list[mpc]:
    n = p.degree()
    if n == 1:
        c0, c1 = p.coeffs
        return [(-c0 / c1).to_mpc()]
    cs = _mpc_coeffs(p)
    try:
        roots = mpmath.polyroots(list(reversed(cs)), maxsteps=100 + 20 * n, extraprec=wp)
    except mpmath.libmp.NoConvergence as exc:
        raise PrecisionExhausted(f"root approximation did not converge: {exc}") from exc
    roots = [mpc(r) for r in roots]
    polished = []
    for r in roots:
        for _ in range(8):
            v, d = _horner(cs, r)
            if d == 0:
                break
            step = v / d
            r = r - step
            if abs(step) <= abs(r) * mpf(2) ** (-wp + 8):
                break
        polished.append(r)
    return polished


def _weierstrass_radii(p: QiPolynomial, approx: list[mpc]) -> list[mpf]:
    n = len(approx)
    lc = ComplexBall(p.leading_coefficient())
    radii = []
    for i, zi in enumerate(approx):
        num = ball_poly_eval(p, ComplexBall(zi, 0))
        den = lc
        for j, zj in enumerate(approx):
            if j != i:
                den = den * ComplexBall(zi - zj, 0)
        if den.contains_zero():
            radii.append(mpf("inf"))
            continue
        radii.append(n * (num.abs_upper() / den.abs_lower()))
    return radii


def _components(centers: list[mpc], radii: list[mpf]) -> list[list[int]]:
    n = len(centers)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(centers[i] - centers[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def krawczyk_contains_unique_root(p: QiPolynomial, center, radius) -> bool:
    """Krawczyk test on the disk D(center, radius).

    K = c - p(c)/p'(c) + (1 - p'(B)/p'(c)) (B - c); K inside the open disk
    proves a unique root in it (holomorphic mean value over a convex set).
    """
    c = mpc(center)
    r = mpf(radius)
    dp = p.derivative()
    pc = ball_poly_eval(p, ComplexBall(c, 0))
    dpc = ball_poly_eval(dp, ComplexBall(c, 0))
    if dpc.contains_zero():
        return False
    disk = ComplexBall(c, r)
    dpb = ball_poly_eval(dp, disk)
    y = ComplexBall(1 / dpc.mid, 0)
    k = ComplexBall(c, 0) - y * pc + (ComplexBall(1, 0) - y * dpb) * ComplexBall(0, r)
    return abs(k.mid - c) + k.rad < r


def isolation_radius(p: QiPolynomial, center, start: float | mpf, tries: int = 40) -> mpf | None:
    """Largest radius start/2**k for which the Krawczyk test succeeds."""
    r = mpf(start)
    for _ in range(tries):
        if krawczyk_contains_unique_root(p, center, r):
            return r
        r /= 2
    return None


def certify_simple_root(p: QiPolynomial, approx, precision_bits: int) -> ComplexBall:
    """Newton-polish ``approx`` and return a Krawczyk-certified tight ball."""
    with working_precision(2 * precision_bits + 32):
        cs = _mpc_coeffs(p)
        z = mpc(approx)
        for _ in range(200):
            v, d = _horner(cs, z)
            if d == 0:
                raise PrecisionExhausted("vanishing derivative during Newton polish")
            step = v / d
            z = z - step
            if abs(step) <= (abs(z) + 1) * mpf(2) ** (-2 * precision_bits):
                break
        v, d = _horner(cs, z)
        guess = 4 * abs(v / d) + (abs(z) + 1) * mpf(2) ** (-2 * precision_bits)
        target = mpf(2) ** (-(precision_bits // 2))
        r = guess
        while r <= target:
            if krawczyk_contains_unique_root(p, z, r):
                return ComplexBall(z, r)
            r *= 4
        raise PrecisionExhausted("could not certify a simple root near the approximation")


def complex_roots(p: QiPolynomial, precision_bits: int = 256) -> list[RootBall]:
    """Certified enclosures of all roots of ``p`` with exact multiplicities.

    Raises PrecisionExhausted when certification fails at the requested
    precision; callers may retry with more bits.
    """
    if p.degree() < 1:
        raise ValueError("complex_roots needs a polynomial of degree >= 1")
    target = mpf(2) ** (-(precision_bits // 2))
    wp = 2 * precision_bits + 32
    out: list[RootBall] = []
    with working_precision(wp):
        target = mpf(2) ** (-(precision_bits // 2))
        for factor, mult in p.squarefree_decomposition():
            approx = _approximate_roots(factor, wp)
            radii = _weierstrass_radii(factor, approx)
            for comp in _components(approx, radii):
                if len(comp) != 1:
                    raise PrecisionExhausted(
                        f"inclusion disks of a squarefree factor overlap at {precision_bits} bits"
                    )
                (i,) = comp
                if radii[i] > target:
                    raise PrecisionExhausted(
                        f"root enclosure radius {mpmath.nstr(radii[i], 5)} exceeds 2^-{precision_bits // 2}"
                    )
                out.append(RootBall(ComplexBall(approx[i], radii[i]), mult))
    out.sort(key=lambda rb: (float(rb.mid.real), float(rb.mid.imag)))
    return out


def exact_root_candidate(p: QiPolynomial, rb: RootBall, max_denominator: int = 2**20) -> GaussianRational | None:
    """A Gaussian rational inside the ball that is an exact root, if one is found."""
    g = GaussianRational.from_complex_approx(rb.mid, max_denominator)
    if not p(g).is_zero():
        return None
    # exact containment test: |g - mid|^2 <= rad^2 in Q
    mid = GaussianRational(mpf_to_fraction(rb.mid.real), mpf_to_fraction(rb.mid.imag))
    rad = mpf_to_fraction(rb.rad)
    return g if (g - mid).norm() <= rad * rad else None
