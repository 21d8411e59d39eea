#!/usr/bin/env python3
"""Continue arctan from 0 to 1, then certify the Wronskian of its equation."""
import argparse
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from gvalues.ode import Path, connection_constants, local_basis, wronskian_certify
from gvalues.parser import parse_ode
from gvalues.qi import GaussianRational as G


@dataclass
class Config:
    order: int = 128
    step_fraction: float = 0.5


def main(cfg: Config):
    mpmath.mp.prec = 256
    ode = parse_ode("(1+X^2)*y'' + 2*X*y' = 0")
    path = Path((G(0), G(1)))
    res = connection_constants(ode, (0, 1), path, local_basis(ode, G(1), cfg.order), step_fraction=cfg.step_fraction)
    w0, w1 = res.constants
    print(f"arctan(1) = {w0}")
    print(f"4 arctan(1) - pi = {mpmath.nstr(4 * w0.mid - mpmath.pi, 3)}")
    print(f"arctan'(1) = {w1}")
    fit = wronskian_certify(ode, local_basis(ode, G(0), cfg.order), [G(Fraction(1, 4))])
    print(f"W = nu * prod (z - p)^(-r): nu = {fit.nu}, exponents {[str(e) for e in fit.exponents]}")
    for p in fit.poles:
        print(f"  pole {p}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--order", type=int, default=Config.order)
    p.add_argument("--step-fraction", type=float, default=Config.step_fraction)
    a = p.parse_args()
    main(Config(a.order, a.step_fraction))
