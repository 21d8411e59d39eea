#!/usr/bin/env python3
"""Apery's zeta(3) sequences: ratio, denominator growth and the mu bound."""
import argparse
import math
from dataclasses import dataclass

import mpmath

from gvalues.apery import MuBoundInput, apery_zeta3_sequences, denominator_growth, mu_bound


@dataclass
class Config:
    terms: int = 400


def main(cfg: Config):
    a, b = apery_zeta3_sequences(cfg.terms)
    r = a[-1].re / b[-1].re
    with mpmath.workprec(512):
        err = abs(mpmath.mpf(r.numerator) / r.denominator - mpmath.zeta(3))
    print(f"|a_n/b_n - zeta(3)| at n = {cfg.terms}: {mpmath.nstr(err, 3)}")
    print(f"growth rate of |b_n|^(1/n): {math.exp(math.log(int(b[-1].re.numerator)) / cfg.terms):.4f}, (1+sqrt 2)^4 = {(1 + math.sqrt(2)) ** 4:.4f}")
    print(f"denominator growth slope of a_n: {denominator_growth(a[1:]):.4f} (3 expected)")
    s = math.sqrt(2)
    print(f"mu(zeta(3)) <= {mu_bound(MuBoundInput(math.e**3, (1 + s) ** -4, (1 + s) ** 4)):.5f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--terms", type=int, default=Config.terms)
    main(Config(p.parse_args().terms))
