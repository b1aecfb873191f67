"""
Series machinery: integer partitions, the Lagrange inversion series for the
large root of X^r + sum_m G_m X^(r-m) = Y^r, formal powers of power series,
and restricted-composition sums.

Coefficient maps are plain dicts {index: complex}; an absent index is zero.
"""

import logging
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, Mapping, Tuple

import numpy as np

from special.gamma import poch

logger = logging.getLogger("sixvertex.special.lagrange")

Series = Dict[int, complex]


def partitions(total: int, max_part: int) -> Iterator[Dict[int, int]]:
    """
    Yield multiplicity maps {part: count} with sum(part * count) == total
    and every part in 1..max_part.
    """
    yield from (dict(p) for p in _partitions(total, max_part))


@lru_cache(maxsize=4096)
def _partitions(total: int, max_part: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    if total == 0:
        return ((),)
    if max_part == 0:
        return ()
    out = []
    for count in range(total // max_part + 1):
        rest = total - count * max_part
        for tail in _partitions(rest, max_part - 1):
            out.append(tail + (((max_part, count),) if count else ()))
    return tuple(out)


def lagrange_series(G: Mapping[int, complex], r: int, k_max: int) -> Series:
    """
    Coefficients R_k of X(Y) = Y + sum_k R_k Y^(-k), k != 0 mod r.

    Args:
        G:      coefficients G_m of the polynomial, m in 1..r (absent = 0)
        r:      degree of the polynomial
        k_max:  largest k computed

    Returns:
        {k: R_k} for 1 <= k <= k_max, k not divisible by r. When G_1 is
        present the constant shift R_0 is included as well.
    """
    if r < 2:
        raise ValueError(f"lagrange_series needs r >= 2, got {r}")
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    bad = [m for m in G if not 1 <= m <= r]
    if bad:
        raise ValueError(f"G indices must lie in 1..{r}, got {bad}")

    coeffs = {m: complex(v) for m, v in G.items() if v != 0}
    max_part = max(coeffs) if coeffs else 0
    result: Series = {}
    first = 0 if 1 in coeffs else 1
    for k in range(first, k_max + 1):
        if k and k % r == 0:
            continue
        total = 0j
        base = 1.0 - k / r
        for alpha in partitions(k + 1, max_part):
            if any(m not in coeffs for m in alpha):
                continue
            size = sum(alpha.values())
            term = (-1) ** size * poch(base, size - 1)
            for m, count in alpha.items():
                term *= coeffs[m] ** count / factorial(count)
            total += term
        result[k] = total / r
    return result


def graded_lagrange(g: Mapping[int, complex], degree: float, step: int, k_max: int) -> Series:
    """
    Lagrange coefficients for X^degree + sum_l g_l X^(degree - step*l) = Y^degree
    organised by powers of w = Y^(-step):

        X / Y = 1 + sum_{k>=1} R_k w^k,
        R_k = (1/degree) sum_{alpha |- k} (-1)^|alpha| / prod alpha_l!
              * (1 - (step*k - 1)/degree)_{|alpha|-1} * prod g_l^alpha_l.

    `degree` need not be an integer and g_l may extend past degree/step;
    the series is formal in w.
    """
    if degree <= 0:
        raise ValueError(f"degree must be positive, got {degree}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    coeffs = {l: complex(v) for l, v in g.items() if v != 0}
    result: Series = {}
    for k in range(1, k_max + 1):
        total = 0j
        base = 1.0 - (step * k - 1) / degree
        for alpha in partitions(k, k):
            if any(l not in coeffs for l in alpha):
                continue
            size = sum(alpha.values())
            term = (-1) ** size * poch(base, size - 1)
            for l, count in alpha.items():
                term *= coeffs[l] ** count / factorial(count)
            total += term
        result[k] = total / degree
    return result


def inverse_power_coefficient(R: Mapping[int, complex], z: complex, order: int) -> complex:
    """
    [w^order] (1 + sum_k R_k w^k)^(-z), i.e.

        sum_{m=1}^{order} (-1)^m Gamma(z + m) / (m! Gamma(z))
            * sum_{k_1 + .. + k_m = order} R_{k_1} .. R_{k_m}.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    return power_series(R, -z, order)[order]


def lagrange_root(G: Mapping[int, complex], r: int, R: Mapping[int, complex], Y: complex) -> complex:
    """Resum X(Y) = Y + sum_k R_k Y^(-k)."""
    return Y + sum(v * Y ** (-k) for k, v in R.items())


def lagrange_residual(G: Mapping[int, complex], r: int, R: Mapping[int, complex], Y: complex) -> float:
    """|X^r + sum G_m X^(r-m) - Y^r| / |Y|^r for the resummed X(Y)."""
    X = lagrange_root(G, r, R, Y)
    lhs = X ** r + sum(v * X ** (r - m) for m, v in G.items())
    return abs(lhs - Y ** r) / abs(Y) ** r


def power_series(a: Mapping[int, complex], z: complex, k_max: int) -> Series:
    """
    Coefficients g_k of (1 + sum_{j>=1} a_j w^j)^z, k = 0..k_max.

    Uses the recurrence g_k = (1/k) sum_{j=1}^{k} (z j - (k - j)) a_j g_{k-j}.
    """
    g: Series = {0: 1.0 + 0j}
    for k in range(1, k_max + 1):
        acc = 0j
        for j in range(1, k + 1):
            aj = a.get(j, 0)
            if aj:
                acc += (z * j - (k - j)) * aj * g[k - j]
        g[k] = acc / k
    return g


def q_expansion(R: Mapping[int, complex], z: complex, k_max: int) -> Series:
    """
    Coefficients Q_i(z) of (X/Y)^z = 1 + sum_i Q_i(z) Y^(-(i+1)).

    Q_i pairs with R_i: at z = 1 they coincide. For an R with odd indices
    only, the even-indexed Q vanish.

    Args:
        R:      Lagrange coefficients {k: R_k}
        z:      exponent
        k_max:  largest index i returned
    """
    a = {k + 1: v for k, v in R.items()}
    g = power_series(a, z, k_max + 1)
    return {i: g[i + 1] for i in range(1, k_max + 1)}


def compositions_product(x: Mapping[int, complex], total: int, parts: int,
                         lo: int = 0, hi: int = None) -> complex:
    """
    sum over j_1 + ... + j_parts = total, lo <= j_i <= hi, of prod x[j_i].

    An absent x[j] counts as zero.
    """
    if parts < 0:
        raise ValueError(f"parts must be >= 0, got {parts}")
    if parts == 0:
        return 1.0 + 0j if total == 0 else 0j
    if hi is None:
        hi = total
    if total < parts * lo or hi < lo:
        return 0j
    base = np.zeros(hi + 1, dtype=complex)
    for j in range(lo, hi + 1):
        base[j] = x.get(j, 0)
    acc = np.zeros(total + 1, dtype=complex)
    acc[0] = 1.0
    for _ in range(parts):
        acc = np.convolve(acc, base)[: total + 1]
    return complex(acc[total]) if len(acc) > total else 0j


def multinomial_weight(k: int, s_nu: complex) -> complex:
    """(-1)^k Gamma(s_nu + k) / (k! Gamma(s_nu)), i.e. (-1)^k (s_nu)_k / k!."""
    return (-1) ** k * poch(s_nu, k) / factorial(k)
