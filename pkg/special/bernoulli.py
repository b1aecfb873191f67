"""Bernoulli numbers and polynomials with exact rational coefficients."""

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List

from special.gamma import SpecialFunctionError

MAX_ORDER = 64


@lru_cache(maxsize=None)
def bernoulli_number(m: int) -> Fraction:
    """B_m with the convention B_1 = -1/2."""
    if m == 0:
        return Fraction(1)
    total = Fraction(0)
    for k in range(m):
        total += comb(m + 1, k) * bernoulli_number(k)
    return -total / (m + 1)


def bernoulli_coefficients(m: int) -> List[Fraction]:
    """Coefficients c_j of B_m(x) = sum_j c_j x^j."""
    return [comb(m, k) * bernoulli_number(m - k) for k in range(m + 1)]


def bernoulli_poly(m: int, x):
    """
    Bernoulli polynomial B_m(x).

    Raises:
        SpecialFunctionError(kind="domain") if m is negative or above 64.
    """
    if m < 0 or m > MAX_ORDER:
        raise SpecialFunctionError(
            kind="domain",
            message=f"Bernoulli order must be in 0..{MAX_ORDER}, got {m}",
            details={"m": m},
        )
    coeffs = bernoulli_coefficients(m)
    result = 0
    for c in reversed(coeffs):
        result = result * x + float(c)
    return result
