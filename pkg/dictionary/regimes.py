"""
Closed-form a_s <-> c dictionaries of the multi-coefficient regimes:
A = 1, A = r/2 - 1, A = r/2, A = r - 2 and A = 0.

Coefficient maps are keyed by the power mu of E in the potential
(c_mu; for A = r/2 - 1 and A = r/2 only odd mu occur). Each regime
builds a polynomial t^r + sum_m G_2m t^{r-2m}, resums its large root with
graded_lagrange and reads the invariants off the coefficients of an
inverse power of that root.
"""

import cmath
import logging
import math
from typing import Callable, Dict, Mapping, Optional, Tuple

from dictionary.descriptor import (
    DictionaryError,
    DictionaryResult,
    Direction,
    Family,
    SchemeDescriptor,
    regime_exponents,
    scheme_descriptor,
)
from dictionary.half_filling import dictionary_half_filling
from dictionary.inversion import invert_map
from special.gamma import SpecialFunctionError, gamma_ratio
from special.lagrange import compositions_product, graded_lagrange, inverse_power_coefficient

logger = logging.getLogger("sixvertex.dictionary.regimes")

Series = Dict[int, complex]


def _ratio(num, den, n: float) -> complex:
    try:
        return gamma_ratio(num, den)
    except SpecialFunctionError as exc:
        raise DictionaryError("domain", f"Gamma pole at n={n}: {exc.message}", {"n": n}) from exc


def _prefactor(r: int, n: float) -> float:
    x = r / (2 * n)
    return _ratio([1.5 + x], [x], n).real


def _polynomial(r: int, n: float, m_max: int,
                term: Callable[[int, int], Tuple[complex, Optional[Tuple[float, float]]]]) -> Series:
    """
    G_2m = Gamma(3/2 + x)/Gamma(x) sum_{k=1}^m phase * Gamma(a)/(k! Gamma(b)) * comp
    for m = 1..m_max, where term(m, k) returns (phase * comp, (a, b)).
    """
    pref = _prefactor(r, n)
    G: Series = {}
    for m in range(1, m_max + 1):
        total = 0j
        for k in range(1, m + 1):
            weight, args = term(m, k)
            if weight == 0:
                continue
            a, b = args
            total += weight * _ratio([a], [b], n) / math.factorial(k)
        if total != 0:
            G[m] = pref * total
    return G


def _comp(c: Mapping[int, complex], numer: int, denom: int, k: int, lo: int, hi: int) -> complex:
    """Composition sum with target numer/denom; zero unless that is a non-negative integer."""
    if numer < 0 or numer % denom:
        return 0j
    return compositions_product(c, numer // denom, k, lo, hi)


def _s_value(G: Series, degree: float, order: int, z: complex) -> complex:
    R = graded_lagrange(G, degree, 2, order)
    return inverse_power_coefficient(R, z, order)


# -- A = 1 ----------------------------------------------------------------------

def _a1_odd(r: int, n: float, c: Mapping[int, complex], aux) -> Tuple[Series, Dict]:
    x = r / (2 * n)
    rate = 1 / (2 * r) + 1 / n
    hi = (r - 1) // 2
    o = aux["o_s"]

    def term(m, k):
        comp = _comp(c, k * r - m, 2, k, 1, hi)
        phase = cmath.exp(0.5j * math.pi * (m - k))
        return phase * comp, (k / 2 - rate * m + x, 1.5 - k / 2 - rate * m + x)

    G = _polynomial(r, n, max(o.values()), term)
    nu = 2 * n / (n + r)
    a = {s: (-1) ** ((r + 1) // 2 * o_s) * _s_value(G, r, o_s, s * nu) / s for s, o_s in o.items()}
    return a, {"G": G}


def _pm_combine(s: int, r: int, e_s: int, f_plus: complex, f_minus: complex, low_sign: int) -> complex:
    if 2 * s < r:
        value = low_sign * (f_plus - f_minus) / 2j
    else:
        value = (f_plus + f_minus) / 2
    return (-1) ** (e_s - 1) * value / s


def _a1_even(r: int, n: float, c: Mapping[int, complex], aux) -> Tuple[Series, Dict]:
    x = r / (2 * n)
    rate = 1 / r + 2 / n
    e = {s: (r // 2 - s if 2 * s < r else r - s) for s in range(1, r) if 2 * s != r}
    nu = 2 * n / (n + r)
    G_pm = {}
    for sign in (1, -1):
        def term(m, k, sign=sign):
            comp = _comp(c, r * k - 2 * m, 2, k, 1, r // 2 - 1)
            phase = cmath.exp(0.5j * math.pi * (r + sign) * k)
            return phase * comp, (k / 2 - rate * m + x, 1.5 - k / 2 - rate * m + x)
        G_pm[sign] = _polynomial(r, n, max(e.values()), term)
    a = {}
    for s, e_s in e.items():
        F = {sign: _s_value(G_pm[sign], r / 2, e_s, s * nu / 2) for sign in (1, -1)}
        a[s] = _pm_combine(s, r, e_s, F[1], F[-1], 1)
    return a, {"G_plus": G_pm[1], "G_minus": G_pm[-1]}


# -- A = r/2 - 1 and A = r/2 ----------------------------------------------------

def half_even_coefficient(r: int, n: float, j: int) -> complex:
    """(-1)^j Gamma(1/2 + r/2n) Gamma(1/2 - (2j+1)/r) / (r Gamma(r/2n) Gamma(1 - (2j+1)/r))."""
    x = r / (2 * n)
    s = (2 * j + 1) / r
    return (-1) ** j * _ratio([0.5 + x, 0.5 - s], [x, 1 - s], n) / r


def _half_even(r: int, n: float, c: Mapping[int, complex], aux) -> Tuple[Series, Dict]:
    coef = {2 * j + 1: half_even_coefficient(r, n, j) for j in range(r // 4)}
    return {s: coef[s] * c.get(s, 0) for s in coef}, {"coefficients": coef}


def _half(r: int, n: float, c: Mapping[int, complex], aux) -> Tuple[Series, Dict]:
    x = r / (2 * n)
    nu = 2 * n / (n + r)
    cj = {(mu - 1) // 2: v for mu, v in c.items()}
    if (r // 2) % 2 == 0:
        o = aux["o_s"]

        def term(m, k):
            comp = _comp(cj, (r - 2) * k - 2 * m, 4, k, 0, r // 4 - 1)
            phase = cmath.exp(-0.25j * math.pi * r * k)
            return phase * comp, (k / 2 - m / n + x, 1.5 - k / 2 - m / n + x)

        G = _polynomial(r, n, max(o.values()), term)
        a = {s: (-1) ** (o_s // 2 - 1) * _s_value(G, r, o_s, s * nu) / s for s, o_s in o.items()}
        return a, {"G": G}

    e = aux["e_s"]
    if not e:
        return {}, {}
    G_pm = {}
    for sign in (1, -1):
        def term(m, k, sign=sign):
            comp = _comp(cj, (r - 2) * k - 4 * m, 4, k, 0, (r - 2) // 4 - 1)
            phase = cmath.exp(0.5j * math.pi * ((r - 2) / 2 + sign) * k)
            return phase * comp, (k / 2 - 2 * m / n + x, 1.5 - k / 2 - 2 * m / n + x)
        G_pm[sign] = _polynomial(r, n, max(e.values()), term)
    a = {}
    for s, e_s in e.items():
        F = {sign: _s_value(G_pm[sign], r / 2, e_s, s * nu / 2) for sign in (1, -1)}
        a[s] = _pm_combine(s, r, e_s, F[1], F[-1], -1)
    return a, {"G_plus": G_pm[1], "G_minus": G_pm[-1]}


# -- A = r - 2 --------------------------------------------------------------------

def _rm2(r: int, n: float, c: Mapping[int, complex], aux) -> Tuple[Series, Dict]:
    x = r / (2 * n)
    rate = 2 / r + 1 / n
    hi = (r - 1) // 2
    top = r // 2

    def term(m, k):
        comp = compositions_product(c, m, k, 1, hi)
        return comp, (k - rate * m + x, 1.5 - rate * m + x)

    G = _polynomial(r, n, top, term)
    nu = 2 * n / (n + r)
    a = {s: _s_value(G, r, s, s * nu) / s for s in range(1, top + 1)}
    return a, {"G": G}


# -- A = 0 -------------------------------------------------------------------------

def log_modified_zero(r: int, n: float, c: Mapping[int, complex]) -> complex:
    """
    a_{r/2} of the A = 0 scheme at even r:

        2 Gamma(1/2 + x) / (sqrt(pi) r Gamma(1 + x))
          * sum_{k=1}^{r/2} (-1)^{r/2-k} Gamma(k - 1/2) / (sqrt(pi) k!)
            * sum_{mu_1+..+mu_k = r(k - 1/2)} prod c_mu.
    """
    x = r / (2 * n)
    total = 0j
    for k in range(1, r // 2 + 1):
        comp = compositions_product(c, r * k - r // 2, k, 1, r - 1)
        if comp:
            total += (-1) ** (r // 2 - k) * math.gamma(k - 0.5) / (math.sqrt(math.pi) * math.factorial(k)) * comp
    return 2 * _ratio([0.5 + x], [1 + x], n) / (math.sqrt(math.pi) * r) * total


def _zero(r: int, n: float, c: Mapping[int, complex], aux) -> Tuple[Series, Dict]:
    x = r / (2 * n)

    def term(m, k):
        comp = compositions_product(c, r * k - m, k, 1, r - 1)
        arg = (r - 2 * m) / (2 * n)
        return comp, (arg, 1.5 - k + arg)

    top = (r - 1) // 2
    G = _polynomial(r, n, top, term)
    nu = 2 * n / (n + r)
    a = {}
    for s in range((r + 1) // 2, r):
        if 2 * s == r:
            a[s] = log_modified_zero(r, n, c)
        else:
            a[s] = (-1) ** (s - 1) * _s_value(G, r, r - s, s * nu) / s
    return a, {"G": G}


# -- dispatch ---------------------------------------------------------------------

_FORWARD = {
    Family.HALF_EVEN: _half_even,
    Family.HALF: _half,
    Family.RM2: _rm2,
    Family.ZERO: _zero,
}


def coefficient_keys(r: int, family: Family):
    """Powers mu of E carrying a coefficient in each regime."""
    if family == Family.A1:
        return list(range(1, (r - 1) // 2 + 1))
    if family in (Family.HALF_EVEN, Family.HALF):
        return [2 * j + 1 for j in range(r // 4)]
    if family == Family.RM2:
        return list(range(1, (r - 1) // 2 + 1))
    if family == Family.ZERO:
        return list(range(1, r))
    if family == Family.HALF_FILLING:
        return list(range(1, r - 1, 2))
    raise DictionaryError("domain", f"{family} has no coefficient list")


def inverse_keys(r: int, family: Family):
    """
    Coefficients fixed by the invariants. For A = 0 these are the mu >= r/2;
    at even r that includes mu = r/2, whose invariant a_{r/2} is the
    log-modified one.
    """
    if family == Family.ZERO:
        return list(range((r + 1) // 2, r))
    return coefficient_keys(r, family)


def _check_domain(descriptor: SchemeDescriptor, n: float) -> None:
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    if descriptor.family == Family.A1.value and n <= descriptor.n_min:
        raise DictionaryError("domain", f"A=1 dictionary needs n > r(r-4)/2 = {descriptor.n_min}, got n={n}",
                              {"n": n, "n_min": str(descriptor.n_min)})


def regime_forward(r: int, family: Family, n: float, c: Mapping[int, complex]) -> Tuple[Series, Dict]:
    family = Family(family)
    exponents, aux = regime_exponents(r, family)
    if family == Family.A1:
        fn = _a1_odd if r % 2 else _a1_even
    else:
        fn = _FORWARD[family]
    return fn(r, n, c, aux)


def dictionary_regime(r: int, A: int, n: float, values: Mapping[int, complex],
                      direction: str = Direction.FORWARD.value,
                      family: Optional[str] = None) -> DictionaryResult:
    """
    Forward (c -> a) or inverse (a -> c) dictionary of the regime family of
    (r, A). `family` overrides the automatic choice when (r, A) falls into
    several regimes.

    Raises:
        DictionaryError(kind="domain") outside the regime's n-domain or when
        no regime covers (r, A).
        DictionaryError(kind="inversion") when the inverse fails.
    """
    descriptor = scheme_descriptor(r, A, family=family)
    fam = Family(descriptor.family)
    if fam == Family.HALF_FILLING:
        return dictionary_half_filling(r, n, direction, values)
    _check_domain(descriptor, n)
    direction = Direction(direction)

    if direction == Direction.FORWARD:
        bad = sorted(mu for mu in values if mu not in coefficient_keys(r, fam))
        if bad:
            raise ValueError(f"coefficient indices {bad} do not occur for {fam.value}, r={r}")
        a, extra = regime_forward(r, fam, n, values)
        return DictionaryResult(direction=direction.value, inputs=dict(values), outputs=a,
                                intermediates=extra)

    bad = sorted(s for s in values if s not in descriptor.exponents)
    if bad:
        raise ValueError(f"invariants {bad} are not in the {fam.value} scheme for r={r}")
    target = {s: values.get(s, 0) for s in descriptor.exponents}
    if fam == Family.HALF_EVEN:
        c = {s: complex(target[s]) / half_even_coefficient(r, n, (s - 1) // 2) for s in target}
    else:
        c = invert_map(lambda cc: regime_forward(r, fam, n, cc)[0], inverse_keys(r, fam), target)
    logger.debug("regime %s inverse r=%d n=%g done", fam.value, r, n)
    return DictionaryResult(direction=direction.value, inputs=dict(values), outputs=c)
