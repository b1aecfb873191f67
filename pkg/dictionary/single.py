"""RG invariants of a single-coefficient scheme, c_{mu,j} E^mu e^{kappa y}."""

import logging
import math
from typing import Dict

from dictionary.descriptor import DictionaryError, DictionaryResult, Direction, Family, SchemeDescriptor
from special.gamma import SpecialFunctionError, gamma_ratio
from special.lagrange import graded_lagrange, inverse_power_coefficient

logger = logging.getLogger("sixvertex.dictionary.single")


def g_2k(r: int, n: float, L: int, M: int, k: int) -> float:
    """
    Gamma(3/2 + r/2n) / Gamma(r/2n) * Gamma(kL/r + (r-2kM)/2n)
        / (k! Gamma(3/2 - k + kL/r + (r-2kM)/2n)),

    for any k >= 1.
    """
    x = r / (2 * n)
    arg = k * L / r + (r - 2 * k * M) / (2 * n)
    try:
        value = gamma_ratio([1.5 + x, arg], [x, 1.5 - k + arg])
    except SpecialFunctionError as exc:
        raise DictionaryError("domain", f"g_{2 * k} has a Gamma pole at n={n}",
                              {"r": r, "n": n, "L": L, "M": M, "k": k}) from exc
    return value.real / math.factorial(k)


def _check(descriptor: SchemeDescriptor, n: float) -> None:
    if descriptor.family != Family.SINGLE.value:
        raise ValueError(f"expected a single-coefficient descriptor, got {descriptor.family}")
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    if descriptor.aux["L"] <= 0:
        raise DictionaryError("domain", "single-coefficient dictionary needs L > 0",
                              {"L": descriptor.aux["L"]})
    if n <= descriptor.n_min:
        raise DictionaryError("domain", f"n={n} is not above n_min={descriptor.n_min}",
                              {"n": n, "n_min": str(descriptor.n_min)})


def z_coefficients(descriptor: SchemeDescriptor, n: float) -> Dict[int, complex]:
    """Signed Z_s with a_s = Z_s c^{i_s}, sign (-1)^{s - (j+1) i_s + N_s} included."""
    _check(descriptor, n)
    r, j = descriptor.r, descriptor.j
    L, M = descriptor.aux["L"], descriptor.aux["M"]
    nu = 2 * n / (n + r)
    out = {}
    for s in descriptor.exponents:
        i = descriptor.aux["i_s"][s]
        if i is None:
            raise DictionaryError("domain", f"s={s} is not reached by multiples of mu={descriptor.mu}")
        g = {k: g_2k(r, n, L, M, k) for k in range(1, i + 1)}
        R = graded_lagrange(g, r, 2 * M, i)
        sign = (-1) ** (s - (j + 1) * i + descriptor.aux["N_s"][s])
        out[s] = sign * inverse_power_coefficient(R, s * nu, i) / s
    return out


def c_to_a_single(descriptor: SchemeDescriptor, n: float, c: complex) -> DictionaryResult:
    """
    a_s = (-1)^{s - (j+1) i_s + N_s} Z_s c^{i_s} for every invariant of the
    scheme.

    Raises:
        DictionaryError(kind="domain") for n <= n_min or a Gamma pole in g_2k.
    """
    Z = z_coefficients(descriptor, n)
    a = {s: z * complex(c) ** descriptor.aux["i_s"][s] for s, z in Z.items()}
    logger.debug("single (%d,%d) r=%d n=%g: %d invariants", descriptor.mu, descriptor.j,
                 descriptor.r, n, len(a))
    return DictionaryResult(direction=Direction.FORWARD.value, inputs={descriptor.mu: complex(c)},
                            outputs=a, intermediates={"Z": Z})


def a_to_c_single(descriptor: SchemeDescriptor, n: float, a_mu: complex) -> DictionaryResult:
    """c from the linear invariant a_mu (i_mu = 1)."""
    Z = z_coefficients(descriptor, n)
    mu = descriptor.mu
    if mu not in Z:
        raise DictionaryError("inversion", f"a_{mu} is not an invariant of this scheme")
    if Z[mu] == 0:
        raise DictionaryError("inversion", f"Z_{mu} vanishes at n={n}", {"n": n})
    c = complex(a_mu) / Z[mu]
    return DictionaryResult(direction=Direction.INVERSE.value, inputs={mu: complex(a_mu)},
                            outputs={mu: c}, intermediates={"Z": Z})
