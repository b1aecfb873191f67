"""
Series coefficients J_s of log D_+(E) = -sum_s J_s E^s.

Three routes: a Taylor fit on a circle inside the first zero, regularised
sums over the zeros with the large-cutoff counterterm, and the closed forms
for J_1..J_3 of the half-filling family.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ode.determinant import determinant_grid
from ode.models import OdeError, OdeSpec, ZeroTable
from ode.wkb import bohr_sommerfeld_zeros, counterterm_prefactors, is_half_filling, quantum_number
from ode.zeros import find_all_zeros
from special.fintegrals import f1, f2, f3
from special.gamma import SpecialFunctionError, rgamma

logger = logging.getLogger("sixvertex.ode.sumrules")

TAYLOR_POINTS = 64


def first_zero_modulus(spec: OdeSpec) -> float:
    """|E_1|, from Bohr-Sommerfeld when available and the Z_r leading term otherwise."""
    try:
        return min(abs(bohr_sommerfeld_zeros(spec, a, [1])[0]) for a in range(1, spec.r + 1))
    except OdeError:
        lam = abs(quantum_number(spec, 1))
        return lam ** (2 * spec.n / (spec.r * spec.alpha))


def j_taylor(spec: OdeSpec, s_max: int, rho: Optional[float] = None,
             points: int = TAYLOR_POINTS, threads: int = 1) -> Dict[int, complex]:
    """J_s for s = 1..s_max from log D_+ sampled on |E| = rho (default half of |E_1|)."""
    if s_max >= points // 2:
        raise ValueError(f"s_max must be below {points // 2}, got {s_max}")
    if rho is None:
        rho = 0.5 * first_zero_modulus(spec)
    angles = 2 * math.pi * np.arange(points) / points
    values = determinant_grid(spec, rho * np.exp(1j * angles), 1, threads=threads)
    logs = np.log(np.abs(values)) + 1j * np.unwrap(np.angle(values))
    logs -= 2j * math.pi * round(float(np.mean(logs).imag) / (2 * math.pi))
    coeffs = np.fft.fft(logs) / points
    logger.debug("taylor fit rho=%.4g |log D(0)|=%.2e", rho, abs(coeffs[0]))
    return {s: complex(-coeffs[s] / rho ** s) for s in range(1, s_max + 1)}


def log_determinant_series(J: Dict[int, complex], E: complex) -> complex:
    return -sum(v * complex(E) ** s for s, v in J.items())


def counterterm_xi(spec: OdeSpec, s: int, cutoff: int) -> complex:
    """
    Remainder of (1/s) sum over zeros beyond m = cutoff on every ray.

    Non-zero only for odd s < r in the half-filling family; zero sums of
    other specs are truncated as they stand.

    Raises:
        OdeError(kind="domain") at n = r.
    """
    if s % 2 == 0 or s >= spec.r or not is_half_filling(spec) or spec.is_z_r:
        if is_half_filling(spec) and abs(spec.n - spec.r) < 1e-12:
            raise OdeError("domain", "counterterm is singular at n = r", {"n": spec.n})
        return 0j
    pref = counterterm_prefactors(spec)[s]
    lam = math.pi / spec.N0 * (cutoff + spec.p / spec.r)
    eps = s * (spec.n - spec.r) / (spec.r * spec.alpha)
    return pref * cmath.exp(-eps * cmath.log(lam))


def j_from_zeros(spec: OdeSpec, table: ZeroTable, s_max: int,
                 cutoff: Optional[int] = None) -> Dict[int, complex]:
    """(1/s) sum_{a, m <= cutoff} E_m^{-s} + Xi_s(cutoff)."""
    missing = [a for a in range(1, spec.r + 1) if a not in table.rays()]
    if missing:
        raise ValueError(f"zero table lacks rays {missing}")
    if cutoff is None:
        cutoff = min(max(row.m for row in table if row.ray == a) for a in table.rays())
    out = {}
    for s in range(1, s_max + 1):
        total = sum(row.E ** (-s) for row in table if row.m <= cutoff) / s
        out[s] = complex(total + counterterm_xi(spec, s, cutoff))
    return out


@dataclass
class JCoefficients:
    taylor: Dict[int, complex]
    zeros: Dict[int, complex] = field(default_factory=dict)
    cutoff: Optional[int] = None

    def deviation(self, s: int) -> float:
        """Relative difference of the two routes at order s."""
        a, b = self.taylor[s], self.zeros[s]
        return abs(a - b) / max(abs(a), 1e-300)

    def to_dict(self) -> Dict:
        return {
            "cutoff": self.cutoff,
            "taylor": {s: [v.real, v.imag] for s, v in self.taylor.items()},
            "zeros": {s: [v.real, v.imag] for s, v in self.zeros.items()},
        }


def j_coefficients(spec: OdeSpec, s_max: int, cutoff: Optional[int] = None,
                   table: Optional[ZeroTable] = None, rho: Optional[float] = None,
                   threads: int = 1) -> JCoefficients:
    """
    J_s by the Taylor route, cross-checked by the zero sum when zeros are
    given or a cutoff is set.
    """
    taylor = j_taylor(spec, s_max, rho=rho, threads=threads)
    if table is None and cutoff is None:
        return JCoefficients(taylor=taylor)
    if table is None:
        table = find_all_zeros(spec, cutoff, threads=threads)
    zeros = j_from_zeros(spec, table, s_max, cutoff)
    return JCoefficients(taylor=taylor, zeros=zeros, cutoff=cutoff)


def j_analytic_123(spec: OdeSpec) -> Tuple[float, float, float]:
    """
    J_1, J_2, J_3 of the half-filling family in closed form:

        J_1 = c_1 rho_1 f1(h, g_0),   J_2 = (c_1 rho_1)^2 f2(h, g_0),
        J_3 = (c_1 rho_1)^3 f3(h, g_0) + c_3 rho_3 f1(h, g_1),

    h = p/alpha, g_j = 1/2 - (2j+1)(n-r)/(2 r alpha), rho = alpha^{2g-2}/Gamma(1-g)^2.
    For r = 3 the E^r term plays c_3.

    Raises:
        OdeError(kind="domain") off the family or on a branch boundary of g.
    """
    r, n, alpha = spec.r, spec.n, spec.alpha
    if not is_half_filling(spec):
        raise OdeError("domain", f"closed forms need odd r and A=(r-1)/2, got r={r}, A={spec.A}",
                       {"r": r, "A": spec.A})
    if abs(spec.p.imag) > 0:
        raise OdeError("domain", "closed forms need real p", {"p": spec.p})
    if abs(n - r) < 1e-12:
        raise OdeError("domain", "g = 1/2 at n = r", {"n": n, "r": r})
    h = spec.p.real / alpha
    c1 = spec.coeffs.get((1, 0), 0).real
    c3 = float((-1) ** spec.A) if r == 3 else spec.coeffs.get((3, 1), 0).real

    def g_of(j):
        return 0.5 - (2 * j + 1) * (n - r) / (2 * r * alpha)

    def rho_of(g):
        return alpha ** (2 * g - 2) * rgamma(1 - g).real ** 2

    g0, g1 = g_of(0), g_of(1)
    try:
        x = c1 * rho_of(g0)
        J1 = x * f1(h, g0) if c1 else 0.0
        J2 = x ** 2 * f2(h, g0) if c1 else 0.0
        J3 = x ** 3 * f3(h, g0) if c1 else 0.0
        if c3:
            J3 += c3 * rho_of(g1) * f1(h, g1)
    except SpecialFunctionError as exc:
        raise OdeError("domain", f"g on a branch boundary: {exc.message}", exc.details) from exc
    return J1, J2, J3
