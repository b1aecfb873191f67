"""
A = 0 coefficients from the quasi-shift limits b_mu.

For general r the relation is

    c_mu = sum_k sum_{mu_1 + .. + mu_k = (k-1) r + mu} B^{(mu)}_{mu_1..mu_k} b_{mu_1} .. b_{mu_k}

with 1 <= mu_i <= r-1. Only r = 3 has known coefficients: B_1^{(1)} in
closed form and B_22^{(1)}, B_2^{(2)} interpolated from b_coefficients.csv.
"""

import csv
import logging
import math
from functools import lru_cache
from typing import Dict, List, Mapping, Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from dictionary.descriptor import TABLE_DIR, DictionaryError, DictionaryResult, Direction
from special.gamma import SpecialFunctionError, gamma_ratio

logger = logging.getLogger("sixvertex.dictionary.a0")

Monomial = Tuple[int, ...]


@lru_cache(maxsize=1)
def _b_table() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    ns, b22, b2 = [], [], []
    with open(TABLE_DIR / "b_coefficients.csv", newline="") as f:
        for row in csv.DictReader(f):
            ns.append(float(row["n"]))
            b22.append(float(row["B22_1"]))
            b2.append(float(row["B2_2"]))
    order = np.argsort(ns)
    return np.asarray(ns)[order], np.asarray(b22)[order], np.asarray(b2)[order]


@lru_cache(maxsize=1)
def _interpolators() -> Tuple[PchipInterpolator, PchipInterpolator]:
    ns, b22, b2 = _b_table()
    return PchipInterpolator(ns, b22, extrapolate=False), PchipInterpolator(ns, b2, extrapolate=False)


def b_table_range() -> Tuple[float, float]:
    ns = _b_table()[0]
    return float(ns[0]), float(ns[-1])


def b_table_coefficients(n: float) -> Dict[str, float]:
    """
    B_22^{(1)} and B_2^{(2)} at n, monotone-cubic in n between the
    tabulated points.

    Raises:
        DictionaryError(kind="extrapolation") outside the tabulated range.
    """
    lo, hi = b_table_range()
    if not lo <= n <= hi:
        raise DictionaryError("extrapolation", f"n={n} is outside the tabulated range [{lo}, {hi}]",
                              {"n": n, "range": [lo, hi]})
    b22, b2 = _interpolators()
    return {"B22_1": float(b22(n)), "B2_2": float(b2(n))}


def b1_coefficient(n: float) -> float:
    """B_1^{(1)} = sqrt(pi) Gamma(1/2n) / Gamma(1/2 + 1/2n)."""
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    try:
        return math.sqrt(math.pi) * gamma_ratio([1 / (2 * n)], [0.5 + 1 / (2 * n)]).real
    except SpecialFunctionError as exc:
        raise DictionaryError("domain", f"B_1 has a Gamma pole at n={n}", {"n": n}) from exc


def monomials(r: int, mu: int) -> List[Monomial]:
    """Non-decreasing (mu_1, .., mu_k), k = 1..r-mu, summing to (k-1) r + mu, parts in 1..r-1."""
    if not 1 <= mu <= r - 1:
        raise ValueError(f"mu must be in 1..{r - 1}, got {mu}")
    out: List[Monomial] = []

    def extend(prefix: List[int], remaining: int, parts: int, smallest: int) -> None:
        if parts == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for part in range(smallest, r):
            if part * parts > remaining:
                break
            extend(prefix + [part], remaining - part, parts - 1, part)

    for k in range(1, r - mu + 1):
        extend([], (k - 1) * r + mu, k, 1)
    return out


def coefficient_frame(r: int) -> Dict[int, List[Monomial]]:
    """The B-slots of every c_mu."""
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    return {mu: monomials(r, mu) for mu in range(1, r)}


def _evaluate(B: Mapping[Monomial, float], b: Mapping[int, complex], mu_list) -> Dict[int, complex]:
    c = {}
    for mu, slots in mu_list.items():
        total = 0j
        for slot in slots:
            weight = B.get(slot)
            if weight is None:
                continue
            total += weight * np.prod([complex(b.get(m, 0)) for m in slot])
        c[mu] = total
    return c


def r3_coefficients(n: float) -> Dict[Monomial, float]:
    table = b_table_coefficients(n)
    return {(1,): b1_coefficient(n), (2, 2): table["B22_1"], (2,): table["B2_2"]}


def a0_quasi_shift_dictionary(r: int, n: float, b: Mapping[int, complex]) -> DictionaryResult:
    """
    c_mu from the quasi-shift limits b_mu.

    For r = 3 the map is complete. For other r the B coefficients are not
    known; the result carries the monomial frame in `intermediates["frame"]`
    and no outputs.

    Raises:
        DictionaryError(kind="extrapolation") for r = 3 outside the tabulated range.
    """
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    bad = sorted(m for m in b if not 1 <= m <= r - 1)
    if bad:
        raise ValueError(f"b indices must lie in 1..{r - 1}, got {bad}")
    frame = coefficient_frame(r)
    if r != 3:
        logger.info("no B coefficients for r=%d; returning the frame only", r)
        return DictionaryResult(direction=Direction.INVERSE.value, inputs=dict(b), outputs={},
                                intermediates={"frame": frame})
    B = r3_coefficients(n)
    c = _evaluate(B, b, frame)
    return DictionaryResult(direction=Direction.INVERSE.value, inputs=dict(b), outputs=c,
                            intermediates={"frame": frame, "B": B})


def b2_estimate(c2: complex, b2: complex) -> complex:
    """B_2^{(2)} from one measured pair (c_2, b_2)."""
    if b2 == 0:
        raise DictionaryError("inversion", "b_2 vanishes; B_2 is undetermined")
    return complex(c2) / complex(b2)


def b22_estimate(n: float, c1: complex, b1: complex, b2: complex) -> complex:
    """B_22^{(1)} from (c_1, b_1, b_2) using the closed-form B_1^{(1)}."""
    if b2 == 0:
        raise DictionaryError("inversion", "b_2 vanishes; B_22 is undetermined")
    return (complex(c1) - b1_coefficient(n) * complex(b1)) / complex(b2) ** 2
