"""
Large-E asymptotics of D_+ and the Bohr-Sommerfeld approximation to its zeros.

Ray a carries zeros at phase phi_a = (pi/r)(2a - 2 - A). The wedge between
rays a and a+1 is parameterised as E = e^{i(phi_a + pi/r)} e^{2n theta/(r alpha)},
and the zeros on ray a as E = e^{i phi_a} t^{2n/alpha} with t real at leading
order, where t solves

    t^r + sum_m G~_m t^{r-m} = (pi/N0)(m - 1/2 + p/r).

Two families carry closed forms: single-coefficient specs (one (mu, j)) and
the half-filling family A = (r-1)/2 with any number of coefficients.
"""

import cmath
import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from lattice.bethe import ray_phase
from ode.models import AsymptoticData, OdeError, OdeSpec, check_exceptional
from special.gamma import SpecialFunctionError, gamma_ratio, poch
from special.lagrange import compositions_product, lagrange_root, lagrange_series, q_expansion

logger = logging.getLogger("sixvertex.ode.wkb")

LAGRANGE_ORDER = 24


def _gamma_ratio(num, den=()) -> complex:
    try:
        return gamma_ratio(num, den)
    except SpecialFunctionError as exc:
        raise OdeError("domain", f"Gamma pole in asymptotic coefficient: {exc.message}",
                       exc.details) from exc


def c_p(p: complex, n: float, r: int) -> complex:
    """sqrt(r/alpha) r^{2p/r} alpha^{-2p/alpha} Gamma(1 + 2p/r) / Gamma(1 + 2p/alpha)."""
    alpha = n + r
    p = complex(p)
    return (math.sqrt(r / alpha) * cmath.exp(2 * p / r * math.log(r) - 2 * p / alpha * math.log(alpha))
            * _gamma_ratio([1 + 2 * p / r], [1 + 2 * p / alpha]))


def is_half_filling(spec: OdeSpec) -> bool:
    return spec.r % 2 == 1 and 2 * spec.A == spec.r - 1 and spec.A > 0 and not spec.extra_terms


def _check_single(spec: OdeSpec):
    mu, j = spec.single_key
    L, M = spec.L(mu, j), spec.M(mu, j)
    if L <= 0:
        raise OdeError("domain", f"(mu, j)=({mu}, {j}) has L={L}; no asymptotic series",
                       {"mu": mu, "j": j, "L": L})
    return mu, j, L, M


def g_coefficients(r: int, n: float, L: int, M: int) -> Dict[int, float]:
    """
    g_{2k} for 1 <= k with 2kM <= r:

        Gamma(3/2 + r/2n) / Gamma(r/2n) * Gamma(kL/r + (r-2kM)/2n)
            / (k! Gamma(3/2 - k + kL/r + (r-2kM)/2n)).
    """
    out = {}
    k = 1
    while 2 * k * M <= r:
        arg = k * L / r + (r - 2 * k * M) / (2 * n)
        value = _gamma_ratio([1.5 + r / (2 * n), arg], [r / (2 * n), 1.5 - k + arg]) / math.factorial(k)
        out[k] = value.real
        k += 1
    return out


def d_coefficients(spec: OdeSpec) -> Dict[int, complex]:
    """
    D_{2j+1}, j = 0..A-1, of the half-filling family:

        sqrt(pi) Gamma(1/2 - eps) / (2n Gamma(1 - eps))
          * sum_{k=1}^{A} (-1)^{(A+1)(k-1)} Gamma(k-1+eps) / (k! Gamma(eps))
            * sum_{j_1+..+j_k = j+(k-1)A} prod c_{2j_i+1},

    eps = (n-r)(2j+1)/(2nr).
    """
    r, n, A = spec.r, spec.n, spec.A
    c = {j: spec.coeffs.get((2 * j + 1, j), 0) for j in range(A)}
    out = {}
    for j in range(A):
        eps = (n - r) * (2 * j + 1) / (2 * n * r)
        pref = math.sqrt(math.pi) * _gamma_ratio([0.5 - eps], [1 - eps]) / (2 * n)
        total = 0j
        for k in range(1, A + 1):
            weight = (-1) ** ((A + 1) * (k - 1)) * poch(eps, k - 1) / math.factorial(k)
            total += weight * compositions_product(c, j + (k - 1) * A, k, 0, A - 1)
        out[2 * j + 1] = pref * total
    return out


def phase_free_polynomial(spec: OdeSpec) -> Dict[int, complex]:
    """G_m in t^r + sum G_m t^{r-m}, before the ray phase is applied."""
    if spec.is_z_r:
        return {}
    if spec.single_key is not None:
        mu, j, L, M = _check_single(spec)
        c = spec.coeffs[(mu, j)]
        return {2 * k * M: g * c ** k for k, g in g_coefficients(spec.r, spec.n, L, M).items()}
    if is_half_filling(spec):
        return {spec.r - s: (-1) ** ((s - 1) // 2) * d / spec.N0
                for s, d in d_coefficients(spec).items() if d != 0}
    raise OdeError("domain", "no closed-form asymptotics for this coefficient pattern",
                   {"coeffs": sorted(spec.coeffs), "r": spec.r, "A": spec.A})


def ray_polynomial(spec: OdeSpec, a: int) -> Dict[int, complex]:
    """G~_m of ray a."""
    G = phase_free_polynomial(spec)
    if not G:
        return {}
    u = cmath.exp(1j * ray_phase(spec.r, spec.A, a))
    if spec.single_key is not None:
        mu, j, _, M = _check_single(spec)
        return {m: g * u ** (mu * m // (2 * M)) for m, g in G.items()}
    return {m: g * (-1j * u) ** (-m) for m, g in G.items()}


def counterterm_prefactors(spec: OdeSpec, k_max: int = LAGRANGE_ORDER) -> Dict[int, complex]:
    """
    Xi_s Lambda^{eps_s} for odd s < r of the half-filling family, where
    eps_s = s (n-r)/(r alpha) and Lambda is the cutoff on t^r.
    """
    if not is_half_filling(spec):
        return {}
    if abs(spec.n - spec.r) < 1e-12:
        raise OdeError("domain", "counterterm is singular at n = r", {"n": spec.n, "r": spec.r})
    check_exceptional(spec)
    G = phase_free_polynomial(spec)
    R = lagrange_series(G, spec.r, k_max) if G else {}
    nu = 2 * spec.n / spec.alpha
    out = {}
    for s in range(1, spec.r, 2):
        j = (s - 1) // 2
        eps = s * (spec.n - spec.r) / (spec.r * spec.alpha)
        i = spec.r - s - 1
        Q = q_expansion(R, -s * nu, max(i, 1)).get(i, 0j) if R else 0j
        out[s] = (-1) ** j * spec.r * spec.N0 / math.pi / eps * Q / s
    return out


def asymptotic_data(spec: OdeSpec) -> AsymptoticData:
    """
    Raises:
        OdeError(kind="domain") for coefficient patterns without closed forms.
    """
    M = L = None
    g: Dict[int, float] = {}
    D: Dict[int, complex] = {}
    if spec.single_key is not None:
        mu, j, L, M = _check_single(spec)
        g = {2 * k: v for k, v in g_coefficients(spec.r, spec.n, L, M).items()}
    if is_half_filling(spec) and not spec.is_z_r:
        D = d_coefficients(spec)
    G = phase_free_polynomial(spec)
    xi = counterterm_prefactors(spec) if is_half_filling(spec) and not spec.is_z_r else {}
    return AsymptoticData(M=M, L=L, g=g, G=G, D=D, C_p=c_p(spec.p, spec.n, spec.r), xi=xi)


def wkb_log_asymptotic(spec: OdeSpec, theta: complex, a: int = 1) -> complex:
    """
    Large-theta form of log D_+ in the wedge above ray a:

        N0 e^theta / cos(pi r / 2n) - corrections - 2 n p theta / (r alpha) + log C_p.

    Raises:
        OdeError(kind="domain") outside |Im theta| < pi alpha / (2n) or at a
        Gamma pole.
    """
    r, n, alpha = spec.r, spec.n, spec.alpha
    theta = complex(theta)
    if abs(theta.imag) >= math.pi * alpha / (2 * n):
        raise OdeError("domain", f"|Im theta| must stay below {math.pi * alpha / (2 * n):.6g}",
                       {"theta": theta})
    cos = math.cos(math.pi * r / (2 * n))
    if abs(cos) < 1e-12:
        raise OdeError("domain", f"cos(pi r/2n) vanishes at n={n}", {"n": n, "r": r})
    phase = cmath.exp(1j * (ray_phase(r, spec.A, a) + math.pi / r))
    value = spec.N0 * cmath.exp(theta) / cos - 2 * n * spec.p * theta / (r * alpha)
    value += cmath.log(c_p(spec.p, n, r))

    if spec.is_z_r:
        return value
    if spec.single_key is not None:
        mu, j, L, M = _check_single(spec)
        c = spec.coeffs[(mu, j)]
        k = 1
        while 2 * k * M <= r:
            shift = alpha * (r - 2 * k * M) / (2 * n * r)
            term = _gamma_ratio([k * mu / r - shift, k - 0.5 - k * mu / r + shift])
            term *= cmath.exp((r - 2 * k * M) * theta / r) * phase ** (k * mu) * c ** k
            value -= term / (2 * n * math.sqrt(math.pi) * math.factorial(k))
            k += 1
        return value
    if is_half_filling(spec):
        for s, d in d_coefficients(spec).items():
            sin = math.sin(math.pi * s * (n - r) / (2 * n * r))
            if abs(sin) < 1e-12:
                raise OdeError("domain", f"correction s={s} is singular at n={n}", {"n": n, "s": s})
            value -= d / sin * phase ** s * cmath.exp(s * theta / r)
        return value
    raise OdeError("domain", "no closed-form asymptotics for this coefficient pattern",
                   {"coeffs": sorted(spec.coeffs)})


def quantum_number(spec: OdeSpec, m: int) -> complex:
    """(pi/N0)(m - 1/2 + p/r), the right-hand side for zero m."""
    return math.pi / spec.N0 * (m - 0.5 + spec.p / spec.r)


def _solve_t(G: Dict[int, complex], r: int, lam: complex, R: Optional[Dict[int, complex]]) -> complex:
    Y = cmath.exp(cmath.log(lam) / r)
    if not G:
        return Y
    guess = lagrange_root(G, r, R, Y)
    poly = np.zeros(r + 1, dtype=complex)
    poly[0] = 1.0
    for m, g in G.items():
        poly[m] += g
    poly[r] -= lam
    roots = np.roots(poly)
    return complex(roots[np.argmin(np.abs(roots - guess))])


def bohr_sommerfeld_zeros(spec: OdeSpec, a: int, m_range: Sequence[int]) -> List[complex]:
    """
    Approximate zeros E_m on ray a for m in m_range.

    Raises:
        OdeError(kind="exceptional_n") at an exceptional n.
        OdeError(kind="domain") when the closed form does not apply.
    """
    check_exceptional(spec)
    r = spec.r
    G = ray_polynomial(spec, a)
    R = lagrange_series(G, r, LAGRANGE_ORDER) if G and r >= 2 else None
    u = cmath.exp(1j * ray_phase(r, spec.A, a))
    power = 2 * spec.n / spec.alpha
    out = []
    for m in m_range:
        t = _solve_t(G, r, quantum_number(spec, m), R)
        out.append(u * cmath.exp(power * cmath.log(t)))
    logger.debug("bohr-sommerfeld ray %d: %d zeros", a, len(out))
    return out
