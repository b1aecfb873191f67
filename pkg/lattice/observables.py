"""
Lattice observables built from a solved root set: scaled roots, sum rules
with counterterms, energy, quasi-shift and translation eigenvalues.
"""

import cmath
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import integrate

from lattice.models import BetheRootSet, ChainSpec, Inhomogeneities, RgScheme, SchemeKind, SolverError

logger = logging.getLogger("sixvertex.lattice.observables")

_POLE_EPS = 1e-14


def _roots(roots) -> np.ndarray:
    if isinstance(roots, BetheRootSet):
        return roots.roots
    return np.asarray(roots, dtype=complex)


def _eta(eta) -> np.ndarray:
    if isinstance(eta, Inhomogeneities):
        return eta.eta
    return np.asarray(eta, dtype=complex)


def scaled_roots(root_set: BetheRootSet, chain: ChainSpec, barred: bool = False,
                 m_max: Optional[int] = None) -> Dict[Tuple[int, int], complex]:
    """
    Finite-N estimates of E_m^(a) = scale^(2n/(r(n+r))) zeta_m^(a).

    With `barred` the m-th largest root of each ray is inverted instead.
    """
    factor = chain.scale ** chain.root_exponent
    out = {}
    for a, zs in root_set.by_ray().items():
        seq = 1.0 / zs[::-1] if barred else zs
        top = len(seq) if m_max is None else min(m_max, len(seq))
        for m in range(1, top + 1):
            out[(a, m)] = complex(factor * seq[m - 1])
    return out


def sum_rule(roots, s: int) -> complex:
    """h_s = s^-1 sum zeta^-s."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    z = _roots(roots)
    return complex(np.sum(z ** (-s)) / s)


def sum_rule_reg(roots, eta, chain: ChainSpec, scheme: Optional[RgScheme], s: int) -> complex:
    """
    h_s plus the counterterm that removes the growth driven by the invariants.

    Without a scheme (or for barred, CP/T and log-modified entries) the
    counterterm is (-1)^(s-1) N / (2 s r cos(s gamma)) sum eta^-s. For a
    standard scheme it is written through a_s and d_s directly.

    Raises:
        SolverError(kind="evaluation") when cos(s gamma) = 0.
    """
    c = math.cos(s * chain.gamma)
    if abs(c) < 1e-12:
        raise SolverError(
            kind="evaluation",
            message=f"counterterm pole: cos({s} gamma) = 0",
            details={"s": s, "gamma": chain.gamma},
        )
    plain = sum_rule(roots, s)
    sign = (-1) ** (s - 1)
    entry = scheme.entry(s) if scheme is not None else None
    if scheme is not None and scheme.kind == SchemeKind.STANDARD.value and (
            entry is None or not entry.log_modified):
        if entry is None:
            return plain
        counter = (sign * chain.r * chain.N0 * complex(entry.value) / (2 * c)
                   * chain.scale ** (1 - entry.d))
        return plain + counter
    power = complex(np.sum(_eta(eta) ** (-s)))
    return plain + sign * chain.N / (2 * s * chain.r * c) * power


def scaled_sum_rule(value: complex, chain: ChainSpec, s: int) -> complex:
    """(r N_0 / N)^(2sn/(r(n+r))) times a finite-N sum rule."""
    return complex(value) * chain.scale ** (-s * chain.root_exponent)


def energy(roots, eta, chain: ChainSpec) -> complex:
    """
    2i sum_l sum_m [1/(1 + zeta q^-1/eta) - 1/(1 + zeta q/eta)].

    Raises:
        SolverError(kind="evaluation") at a pole of a summand.
    """
    z = _roots(roots)[:, None]
    e = _eta(eta)[None, :]
    q = chain.q
    d1 = 1 + z / (q * e)
    d2 = 1 + z * q / e
    if min(float(np.min(np.abs(d1))), float(np.min(np.abs(d2)))) < _POLE_EPS:
        raise SolverError(kind="evaluation", message="energy summand has a pole")
    return complex(2j * np.sum(1 / d1 - 1 / d2))


def _bulk_integrand(t: float, a: float, b: float) -> float:
    if t == 0:
        return a / b
    return (2 * math.exp((a - b - 1) * t) * (-math.expm1(-2 * a * t))
            / ((-math.expm1(-2 * b * t)) * (1 + math.exp(-2 * t))))


def bulk_energy(r: int, n: float) -> Tuple[float, float]:
    """(e_inf, v_F) of the Z_r invariant chain."""
    v_f = r * (n + r) / n
    a, b = r / n, (n + r) / n
    value, _ = integrate.quad(_bulk_integrand, 0, np.inf, args=(a, b), epsabs=1e-13, epsrel=1e-12,
                              limit=200)
    return -2 * v_f / math.pi * value, v_f


def energy_finite_size_coefficient(E: complex, chain: ChainSpec) -> complex:
    """(E - N e_inf) N / (2 pi r v_F); tends to (n+r) k^2/2 - r/12 at the Z_r point."""
    e_inf, v_f = bulk_energy(chain.r, chain.n)
    return (complex(E) - chain.N * e_inf) * chain.N / (2 * math.pi * chain.r * v_f)


# leading vacuum shift -C a_1^3 for r = 3; C is known only at the free fermion point
_VACUUM_SHIFT_C = {(3, 3.0): 0.5}


def vacuum_shift_prediction(r: int, n: float, a1: complex) -> complex:
    """
    Predicted N (E_vac - E_vac^(0)) / (2 pi r v_F) away from the Z_r point.

    Raises:
        ValueError when no value of C is available for (r, n).
    """
    c = _VACUUM_SHIFT_C.get((r, float(n)))
    if c is None:
        raise ValueError(f"vacuum shift constant unknown for r={r}, n={n}")
    return -c * complex(a1) ** 3


def _log_quasi_shift(z: np.ndarray, eta_l: complex, chain: ChainSpec) -> complex:
    q = chain.q
    num = z + eta_l * q
    den = z + eta_l / q
    if min(float(np.min(np.abs(num))), float(np.min(np.abs(den)))) < _POLE_EPS:
        raise SolverError(kind="evaluation", message="quasi-shift factor vanishes",
                          details={"eta": complex(eta_l)})
    total = (1j * math.pi * chain.k - len(z) * 1j * chain.gamma
             + np.sum(np.log(num)) - np.sum(np.log(den)))
    return complex(total.real, math.remainder(total.imag, 2 * math.pi))


def quasi_shift(roots, eta, chain: ChainSpec, ell: int) -> complex:
    """K^(l) = e^(i pi k) q^-M prod_m (zeta_m + eta_l q)/(zeta_m + eta_l/q)."""
    e = _eta(eta)
    if not 1 <= ell <= len(e):
        raise ValueError(f"ell must be in 1..{len(e)}, got {ell}")
    return cmath.exp(_log_quasi_shift(_roots(roots), e[ell - 1], chain))


def translation_eigenvalue(roots, eta, chain: ChainSpec) -> complex:
    """K = prod_l K^(l), the r-site translation eigenvalue."""
    z = _roots(roots)
    total = sum(_log_quasi_shift(z, e, chain) for e in _eta(eta))
    return cmath.exp(total)


def quasi_shift_limits(roots, eta, chain: ChainSpec) -> Dict[int, complex]:
    """
    Finite-N estimates of b_mu, mu = 1..r-1:

        scale^((r - 2 mu)/r) (2 pi i r)^-1 sum_l e^(i pi mu (r+1-2l)/r) log K^(l)

    with principal logarithms, which vanish at the Z_r point.
    """
    z = _roots(roots)
    e = _eta(eta)
    r = chain.r
    logs = np.array([_log_quasi_shift(z, eta_l, chain) for eta_l in e])
    ell = np.arange(1, r + 1)
    out = {}
    for mu in range(1, r):
        phases = np.exp(1j * math.pi * mu * (r + 1 - 2 * ell) / r)
        out[mu] = complex(chain.scale ** ((r - 2 * mu) / r)
                          * np.sum(phases * logs) / (2j * math.pi * r))
    return out
