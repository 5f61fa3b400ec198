"""Shared test utilities."""

import math
import random
from fractions import Fraction

from parrondo_ring.chain import Params

TORAL = Params(Fraction(1), Fraction(4, 25), Fraction(4, 25), Fraction(7, 10))
BOUNDARY2 = Params(Fraction(7, 10), Fraction(17, 25), Fraction(17, 25), Fraction(0))
INTERIOR = Params(Fraction(1, 10), Fraction(3, 5), Fraction(3, 5), Fraction(3, 4))


def rational(rng: random.Random, den_max: int = 12) -> Fraction:
    """A random rational strictly inside (0, 1) with a small denominator."""
    den = rng.randint(3, den_max)
    return Fraction(rng.randint(1, den - 1), den)


def rational_params(rng: random.Random, den_max: int = 12, p1_eq_p2: bool = False) -> Params:
    p1 = rational(rng, den_max)
    return Params(
        rational(rng, den_max),
        p1,
        p1 if p1_eq_p2 else rational(rng, den_max),
        rational(rng, den_max),
    )


def sig6(x) -> float:
    """Round to 6 significant digits (as a float), for table comparisons."""
    return float(f"{float(x):.6g}")


def trunc6(x) -> int:
    """The first six decimal digits of a positive number, as an integer.

    The small bump absorbs root-finder error (~1e-9) in values that sit
    a hair below a decimal boundary.
    """
    return int(math.floor(float(x) * 1e6 + 5e-3))
