"""
Schemes with A mu = r j: the invariant map, the extra ODE terms
b_i E^{mu_i} e^{mu_i y}, the r = 9 sum-rule prediction, and the
reduction to an A = 0 chain with r/sigma sites.
"""

import logging
import math
from math import gcd
from typing import Dict, Mapping, Optional

from dictionary.descriptor import (
    DictionaryError,
    DictionaryResult,
    Direction,
    SchemeDescriptor,
    scheme_descriptor,
)
from dictionary.single import g_2k
from ode.models import ExtraTerm, OdeSpec
from special.fintegrals import f1, f2
from special.gamma import SpecialFunctionError, gamma_ratio
from special.lagrange import graded_lagrange, inverse_power_coefficient

logger = logging.getLogger("sixvertex.dictionary.degenerate")


def _descriptor(r: int, A: int, mu: int, allow_unverified: bool) -> SchemeDescriptor:
    if not 1 <= A <= r - 2 or (A * mu) % r:
        raise DictionaryError("domain", f"A mu = r j has no solution for r={r}, A={A}, mu={mu}",
                              {"r": r, "A": A, "mu": mu})
    return scheme_descriptor(r, A, mu, A * mu // r, allow_unverified=allow_unverified)


def log_modified_value(r: int, A: int, n: float, c: complex, K: int = 1) -> complex:
    """
    a_{r/2} = (-1)^{(r-A+2)/2} 2 Gamma(K - 1/2) / (r pi K!) Gamma(1/2 + r/2n) / Gamma(1 + r/2n) c^K.

    K = 1 is the verified case; larger K is conjectural.
    """
    x = r / (2 * n)
    sign = (-1) ** ((r - A + 2) // 2)
    weight = 2 * math.gamma(K - 0.5) / (r * math.pi * math.factorial(K))
    return sign * weight * gamma_ratio([0.5 + x], [1 + x]).real * complex(c) ** K


def degenerate_family(r: int, A: int, mu: int, n: float, c: complex,
                      allow_unverified: bool = False) -> DictionaryResult:
    """
    RG invariants of the degenerate scheme with coefficient c, and the
    exponents mu_i of the extra terms whose coefficients b_i = c^i b^_i(p, n)
    are fit slots.

    Raises:
        DictionaryError(kind="domain") when A mu != r j or at a Gamma pole.
        DictionaryError(kind="unsupported") for K > 1 unless allow_unverified.
    """
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    desc = _descriptor(r, A, mu, allow_unverified)
    aux = desc.aux
    intermediates = {"descriptor": desc, "mu_i": dict(aux["mu_i"]),
                     "b_slots": {i: complex(c) ** i for i in aux["mu_i"]}}
    if "advisory" in aux:
        logger.info("degenerate r=%d A=%d mu=%d: %s", r, A, mu, aux["advisory"])
        intermediates["advisory"] = aux["advisory"]
        return DictionaryResult(direction=Direction.FORWARD.value, inputs={mu: complex(c)},
                                outputs={}, intermediates=intermediates)

    M = r - mu
    nu = 2 * n / (n + r)
    a = {}
    for s, i in aux["i_s"].items():
        if s in desc.log_modified:
            a[s] = log_modified_value(r, A, n, c, aux["K"])
            continue
        g = {k: g_2k(r, n, 0, M, k) for k in range(1, i + 1)}
        R = graded_lagrange(g, r, 2 * M, i)
        sign = (-1) ** (s - (desc.j + 1) * i + (s - mu * i) // r)
        a[s] = sign * inverse_power_coefficient(R, s * nu, i) / s * complex(c) ** i
    return DictionaryResult(direction=Direction.FORWARD.value, inputs={mu: complex(c)},
                            outputs=a, intermediates=intermediates)


def degenerate_spec(r: int, A: int, mu: int, n: float, p: complex, c: complex,
                    b_hat: Optional[Mapping[int, complex]] = None) -> OdeSpec:
    """ODE with c E^mu e^{mu y} and b_i = c^i b^_i E^{mu_i} e^{mu_i y}."""
    desc = _descriptor(r, A, mu, allow_unverified=True)
    terms = [ExtraTerm(coefficient=complex(c), mu=mu, exponent=float(mu))]
    for i, mu_i in desc.aux["mu_i"].items():
        b = complex(c) ** i * complex((b_hat or {}).get(i, 0))
        if b != 0:
            terms.append(ExtraTerm(coefficient=b, mu=mu_i, exponent=float(mu_i)))
    return OdeSpec(p=p, n=n, r=r, A=A, extra_terms=terms)


# -- r = 9, A = 3, mu = 6 sum rules ------------------------------------------------

def _sum_rule_factor(n: float, shift: int, power: int) -> float:
    """(n+9)^{-power (n+shift)/(n+9)} / Gamma^power((n+shift)/(n+9))."""
    g = (n + shift) / (n + 9)
    return (n + 9) ** (-power * g) / math.gamma(g) ** power


def _f(fn, h: float, g: float) -> float:
    try:
        return fn(h, g)
    except SpecialFunctionError as exc:
        raise DictionaryError("domain", f"sum-rule integral failed: {exc.message}", exc.details) from exc


def h3_from_b(n: float, k: float, b: complex) -> complex:
    """h_3 limit of the r = 9 chain from the extra-term coefficient b at E^3."""
    return b * _sum_rule_factor(n, 6, 2) * _f(f1, k / 2, 3 / (n + 9))


def h6_from_b(n: float, k: float, c: complex, b: complex) -> complex:
    """h_6 limit from c and b directly."""
    return (c * _sum_rule_factor(n, 3, 2) * _f(f1, k / 2, 6 / (n + 9))
            + b ** 2 * _sum_rule_factor(n, 6, 4) * _f(f2, k / 2, 3 / (n + 9)))


def h6_prediction(n: float, k: float, c: complex, h3: complex) -> complex:
    """
    h_6 limit of the r = 9, A = 3, mu = 6 chain with b eliminated in favour
    of the measured h_3 limit:

        c (n+9)^{-2(n+3)/(n+9)} / Gamma^2((n+3)/(n+9)) f1(k/2, 6/(n+9))
          + (h3 / f1(k/2, 3/(n+9)))^2 f2(k/2, 3/(n+9)).
    """
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    g3 = 3 / (n + 9)
    return (c * _sum_rule_factor(n, 3, 2) * _f(f1, k / 2, 6 / (n + 9))
            + (h3 / _f(f1, k / 2, g3)) ** 2 * _f(f2, k / 2, g3))


# -- reduction to A = 0 ---------------------------------------------------------------

def reduction_data(r: int, A: int, mu: int) -> Dict[str, int]:
    """sigma = gcd(r, mu), r~ = r/sigma and the sign exponent I = A sigma / r."""
    sigma = gcd(r, mu)
    if (A * sigma) % r:
        raise DictionaryError("domain", f"A sigma / r is not an integer for r={r}, A={A}, mu={mu}")
    return {"sigma": sigma, "r_tilde": r // sigma, "I": A * sigma // r}


def reduced_coefficient(r: int, A: int, mu: int, c: complex) -> complex:
    """c~ of the A = 0 equation at mu~ = mu/sigma: (-1)^{I mu~} sigma^{-2(r-mu)/r} c."""
    data = reduction_data(r, A, mu)
    sigma = data["sigma"]
    return (-1) ** (data["I"] * (mu // sigma)) * sigma ** (-2 * (r - mu) / r) * complex(c)


def reduce_to_a0(r: int, A: int, mu: int, a_map: Mapping[int, complex],
                 allow_unverified: bool = False) -> DictionaryResult:
    """
    a~_s = (-1)^{(sigma-1)s} sigma^{1 - d_{sigma s}} a_{sigma s}, d~_s = d_{sigma s},
    for the chain with r/sigma sites, A = 0 and n/sigma.
    """
    desc = _descriptor(r, A, mu, allow_unverified)
    data = reduction_data(r, A, mu)
    sigma = data["sigma"]
    out = {}
    d_tilde = {}
    for s_big, d in desc.exponents.items():
        if s_big % sigma:
            raise DictionaryError("domain", f"invariant s={s_big} is not a multiple of sigma={sigma}")
        s = s_big // sigma
        d_tilde[s] = d
        out[s] = (-1) ** ((sigma - 1) * s) * sigma ** (1 - float(d)) * complex(a_map.get(s_big, 0))
    return DictionaryResult(direction=Direction.FORWARD.value, inputs=dict(a_map), outputs=out,
                            intermediates={**data, "d_tilde": d_tilde})

