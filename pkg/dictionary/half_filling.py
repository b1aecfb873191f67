"""
a_s <-> c_s relation for odd r and A = (r-1)/2.

Both maps are keyed by the odd index s = 2j+1 < r: c_s multiplies
E^s in the potential and a_s is the RG invariant with exponent 1 - s/r.
The forward map goes through the large-t polynomial of the WKB
asymptotics and its Lagrange series; the inverse is written out for
r = 3, 5, 7 and done by Newton iteration otherwise.
"""

import logging
from typing import Dict, Mapping

from dictionary.descriptor import DictionaryError, DictionaryResult, Direction
from dictionary.inversion import invert_map
from ode.models import OdeError, OdeSpec
from ode.wkb import d_coefficients
from special.gamma import SpecialFunctionError, gamma_ratio
from special.lagrange import lagrange_series, q_expansion

logger = logging.getLogger("sixvertex.dictionary.half_filling")

CLOSED_FORM_R = (3, 5, 7)


def _check(r: int, n: float) -> None:
    if r < 3 or r % 2 == 0:
        raise ValueError(f"half-filling needs odd r >= 3, got {r}")
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")


def odd_indices(r: int):
    return list(range(1, r - 1, 2))


def c_jj(r: int, n: float, j: int) -> float:
    """
    Linear coefficient of the inverse map, c_{2j+1} = C_j a_{2j+1} + ...:

        (-1)^j r Gamma(r/2n) Gamma(1 - eps_j) / (Gamma(1/2 + r/2n) Gamma(1/2 - eps_j)),
        eps_j = (2j+1)(n-r)/(2rn).
    """
    x = r / (2 * n)
    eps = (2 * j + 1) * (n - r) / (2 * r * n)
    try:
        value = gamma_ratio([x, 1 - eps], [0.5 + x, 0.5 - eps])
    except SpecialFunctionError as exc:
        raise DictionaryError("domain", f"C_{j} has a Gamma pole at n={n}", {"r": r, "n": n, "j": j}) from exc
    return (-1) ** j * r * value.real


def forward(r: int, n: float, c: Mapping[int, complex]) -> DictionaryResult:
    """a_s for odd s < r from the coefficients c_s."""
    _check(r, n)
    A = (r - 1) // 2
    spec = OdeSpec(p=0, n=n, r=r, A=A, coeffs={(s, (s - 1) // 2): c.get(s, 0) for s in odd_indices(r)})
    try:
        D = d_coefficients(spec)
    except OdeError as exc:
        raise DictionaryError("domain", exc.message, exc.details) from exc
    G = {r - s: (-1) ** ((s - 1) // 2) * d / spec.N0 for s, d in D.items() if d != 0}
    nu = 2 * n / (n + r)
    R = lagrange_series(G, r, r) if G else {}
    a = {}
    for s in odd_indices(r):
        a[s] = q_expansion(R, -s * nu, r)[r - s - 1] / s if R else 0j
    return DictionaryResult(direction=Direction.FORWARD.value, inputs=dict(c), outputs=a,
                            intermediates={"D": D, "G": G, "R": R, "nu": nu})


def closed_inverse(r: int, n: float, a: Mapping[int, complex]) -> Dict[int, complex]:
    """Explicit c_s(a) for r = 3, 5, 7."""
    C = [c_jj(r, n, j) for j in range((r - 1) // 2)]
    a1, a3, a5 = a.get(1, 0), a.get(3, 0), a.get(5, 0)
    if r == 3:
        return {1: C[0] * a1}
    if r == 5:
        return {1: C[0] * a1 + (n - 5) / (20 * n) * (C[1] ** 2 - 5 * C[0]) * a3 ** 2,
                3: C[1] * a3}
    if r == 7:
        cubic = ((15 * n - 7) / 24 * C[0] + 3 * (n - 7) / 56 * C[1] * C[2]
                 - (3 * n + 28) / 588 * C[2] ** 3)
        return {1: (C[0] * a1 - (n - 7) / (14 * n) * (7 * C[0] + C[1] * C[2]) * a3 * a5
                    + (n - 7) / n ** 2 * cubic * a5 ** 3),
                3: C[1] * a3 - 3 * (n - 7) / (28 * n) * (7 * C[1] + C[2] ** 2) * a5 ** 2,
                5: C[2] * a5}
    raise ValueError(f"closed-form inverse only for r in {CLOSED_FORM_R}, got {r}")


def newton_inverse(r: int, n: float, a: Mapping[int, complex]) -> Dict[int, complex]:
    """
    Invert the forward map numerically, seeded with the linear inverse.

    Raises:
        DictionaryError(kind="inversion") on a singular Jacobian or when
        the iteration does not converge.
    """
    idx = odd_indices(r)
    guess = {s: c_jj(r, n, (s - 1) // 2) * a.get(s, 0) for s in idx}
    return invert_map(lambda c: forward(r, n, c).outputs, idx, {s: a.get(s, 0) for s in idx}, guess)



def dictionary_half_filling(r: int, n: float, direction: str, values: Mapping[int, complex],
                            method: str = "auto") -> DictionaryResult:
    """
    Args:
        r:          odd period
        n:          anisotropy parameter
        direction:  "c_to_a" or "a_to_c"
        values:     {s: c_s} or {s: a_s} for odd s < r
        method:     "auto" | "closed" | "newton" for the inverse
    """
    _check(r, n)
    bad = sorted(s for s in values if s not in odd_indices(r))
    if bad:
        raise ValueError(f"indices must be odd and below r={r}, got {bad}")
    direction = Direction(direction)
    if direction == Direction.FORWARD:
        return forward(r, n, values)
    if method not in ("auto", "closed", "newton"):
        raise ValueError(f"Unknown inversion method: {method}")
    closed = method == "closed" or (method == "auto" and r in CLOSED_FORM_R)
    logger.debug("half-filling inverse r=%d n=%g (%s)", r, n, "closed" if closed else "newton")
    c = closed_inverse(r, n, values) if closed else newton_inverse(r, n, values)
    C = {2 * j + 1: c_jj(r, n, j) for j in range((r - 1) // 2)}
    return DictionaryResult(direction=direction.value, inputs=dict(values), outputs=c,
                            intermediates={"C": C})
