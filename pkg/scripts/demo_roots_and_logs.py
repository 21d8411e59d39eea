#!/usr/bin/env python3
"""sqrt 2 and log 2 as values at z = 1 of series with a prescribed radius."""
import argparse
from dataclasses import dataclass

import mpmath

from gvalues.algroots import root_series_for, verify_functional_equation
from gvalues.balls import ComplexBall
from gvalues.logvalues import exp_consistent, log_algebraic
from gvalues.qi import GaussianRational, QiPolynomial


@dataclass
class Config:
    R: float = 20.0
    order: int = 64
    precision_bits: int = 256


def main(cfg: Config):
    X = QiPolynomial.X
    with mpmath.workprec(cfg.precision_bits):
        rs = root_series_for(X**2 - 2, cfg.R, cfg.order, cfg.precision_bits)
        print(f"sqrt 2: witness u = {rs.u}, radius {rs.radius_exact}, exact check {verify_functional_equation(rs)}")
        print(f"  Phi_u(1) = {rs.value}")
        print(f"  first coefficients: {[str(c) for c in rs.phi.coeffs[:5]]}")
        two = ComplexBall(GaussianRational(2))
        lg = log_algebraic(X - 2, two, cfg.R, cfg.order, cfg.precision_bits)
        print(f"log 2: m = {lg.m}, u = {lg.u}, value {lg.value}")
        print(f"  error vs mpmath: {mpmath.nstr(abs(lg.value.mid - mpmath.log(2)), 3)}, exp check {exp_consistent(lg, two)}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--R", type=float, default=Config.R)
    p.add_argument("--order", type=int, default=Config.order)
    p.add_argument("--precision-bits", type=int, default=Config.precision_bits)
    a = p.parse_args()
    main(Config(a.R, a.order, a.precision_bits))
