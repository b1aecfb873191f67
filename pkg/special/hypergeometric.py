"""Confluent hypergeometric function 1F1(a; b; z)."""

import cmath
import logging

from special.gamma import SpecialFunctionError, log_gamma, rgamma

logger = logging.getLogger("sixvertex.special.hypergeometric")

TAYLOR_RADIUS = 30.0


def _is_nonpositive_integer(x: complex) -> bool:
    return x.imag == 0 and x.real <= 0 and x.real == round(x.real)


def _taylor(a: complex, b: complex, z: complex, max_terms: int, tol: float) -> complex:
    term = 1.0 + 0j
    total = 1.0 + 0j
    for k in range(max_terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
        if term == 0:
            return total
        if abs(term) <= tol * abs(total) and k > abs(z):
            return total
    raise SpecialFunctionError(
        kind="no_convergence",
        message=f"1F1 Taylor series did not converge in {max_terms} terms",
        details={"a": a, "b": b, "z": z, "partial_sum": total},
    )


def _asymptotic_sum(x: complex, y: complex, w: complex, max_terms: int):
    """sum_k (x)_k (y)_k / k! w^k, truncated at the smallest term."""
    term = 1.0 + 0j
    total = 1.0 + 0j
    smallest = 1.0
    for k in range(max_terms):
        nxt = term * (x + k) * (y + k) / (k + 1) * w
        if abs(nxt) > abs(term) and k > 0:
            break
        term = nxt
        total += term
        smallest = abs(term)
        if smallest <= 1e-17 * abs(total):
            break
    return total, smallest


def _asymptotic(a: complex, b: complex, z: complex, max_terms: int) -> complex:
    """Two-term large-|z| expansion for Re z >= 0."""
    s1, err1 = _asymptotic_sum(b - a, 1 - a, 1 / z, max_terms)
    s2, err2 = _asymptotic_sum(a, a - b + 1, -1 / z, max_terms)
    lg_b = log_gamma(b)
    first = rgamma(a) * cmath.exp(lg_b + z + (a - b) * cmath.log(z)) * s1
    second = rgamma(b - a) * cmath.exp(lg_b - a * cmath.log(-z)) * s2
    if max(err1, err2) > 1e-11:
        logger.warning("1F1 asymptotic truncation error %.2e at z=%s", max(err1, err2), z)
    return first + second


def kummer_1f1(a, b, z, max_terms: int = 500, tol: float = 1e-15) -> complex:
    """
    Kummer's confluent hypergeometric function M(a, b, z).

    Taylor series for |z| <= 30 after Kummer's transformation to
    Re z >= 0; the two-term asymptotic expansion beyond.

    Raises:
        SpecialFunctionError(kind="domain") when b is a non-positive integer.
        SpecialFunctionError(kind="no_convergence") carrying the partial sum.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise SpecialFunctionError(
            kind="domain",
            message=f"1F1 undefined for b={b}",
            details={"b": b},
        )
    if z == 0:
        return 1.0 + 0j
    if z.real < 0:
        return cmath.exp(z) * kummer_1f1(b - a, b, -z, max_terms, tol)
    if abs(z) <= TAYLOR_RADIUS or _is_nonpositive_integer(a):
        return _taylor(a, b, z, max_terms, tol)
    return _asymptotic(a, b, z, max_terms)
