"""Barred RG invariants, the first three polynomials in a_{r-1}, a_{r-2}, a_{r-3}."""

from typing import Dict, Mapping


def bar_invariants(a: Mapping[int, complex], r: int) -> Dict[int, complex]:
    """
    a-bar_1 = (-1)^r a_{r-1}
    a-bar_2 = (-1)^r a_{r-2} + (r/2) a_{r-1}^2
    a-bar_3 = (-1)^r a_{r-3} + r a_{r-2} a_{r-1} + (-1)^r (r^2/3) a_{r-1}^3    (r > 3)
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    sign = (-1) ** r
    a1 = complex(a.get(r - 1, 0))
    out = {1: sign * a1}
    if r > 2:
        a2 = complex(a.get(r - 2, 0))
        out[2] = sign * a2 + r / 2 * a1 ** 2
    if r > 3:
        a3 = complex(a.get(r - 3, 0))
        out[3] = sign * a3 + r * a2 * a1 + sign * r ** 2 / 3 * a1 ** 3
    return out
