"""
Spectral determinants D_+- from Wronskians of chi with the Jost solutions.

    D_+-(E) = sqrt(pi) / Gamma(1 +- 2p/alpha) * alpha^(-1/2 -+ 2p/alpha) * W[chi, psi_{+-p}]

with W[f, g] = f g' - f' g and alpha = n + r.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Mapping, Sequence, Tuple

import numpy as np

from ode.chi import MATCH_STEPS, RTOL as CHI_RTOL, chi_frame, chi_log_data
from ode.jost import RTOL as JOST_RTOL, parse_sign, jost_profile
from ode.models import OdeError, OdeSpec
from special.gamma import gamma_ratio, rgamma

logger = logging.getLogger("sixvertex.ode.determinant")

# spread of W across the matching points, relative to the size of its two
# terms, allowed before D is rejected
SPREAD_FACTOR = 1e5
WRONSKIAN_SPREAD = SPREAD_FACTOR * max(CHI_RTOL, JOST_RTOL)


def _wronskian_terms(spec: OdeSpec, E: complex, sign) -> Tuple[List[complex], float]:
    frame = chi_frame(spec, E)
    ys = [frame.y_match + step for step in MATCH_STEPS]
    chi_data = chi_log_data(frame, ys)
    values, derivs = jost_profile(spec, E, sign, ys)
    samples, size = [], 0.0
    for (log_chi, w), psi, dpsi in zip(chi_data, values, derivs):
        chi = cmath.exp(log_chi)
        samples.append(chi * (dpsi - w * psi))
        size = max(size, abs(chi * dpsi), abs(chi * w * psi))
    return samples, size


def wronskian_samples(spec: OdeSpec, E: complex, sign) -> List[complex]:
    """W[chi, psi_{sign p}] at the matching points y_m, y_m + 0.2, y_m + 0.4."""
    return _wronskian_terms(spec, E, sign)[0]


def _prefactor(spec: OdeSpec, sign: int) -> complex:
    nu = 2 * sign * spec.p / spec.alpha
    return math.sqrt(math.pi) * rgamma(1 + nu) * cmath.exp((-0.5 - nu) * math.log(spec.alpha))


def spectral_determinant(spec: OdeSpec, E: complex, sign=1,
                         spread_tol: float = WRONSKIAN_SPREAD) -> complex:
    """
    D_+ (sign=+1) or D_- (sign=-1) at E.

    The spread of W is measured against chi psi' and chi' psi rather than
    against W itself, which vanishes at the zeros of D.

    Raises:
        OdeError(kind="accuracy") when the Wronskian is not constant across
        the matching points.
    """
    s = parse_sign(sign)
    samples, size = _wronskian_terms(spec, E, s)
    ref = samples[0]
    spread = max(abs(w - ref) for w in samples[1:])
    scale = max(size, 1e-300)
    if spread > spread_tol * scale:
        raise OdeError("accuracy", f"Wronskian drifts by {spread / scale:.2e} across matching points",
                       {"E": complex(E), "sign": s, "spread": spread / scale})
    value = _prefactor(spec, s) * sum(samples) / len(samples)
    logger.debug("D%s(%s) = %s", "+" if s > 0 else "-", E, value)
    return complex(value)


def determinant_grid(spec: OdeSpec, energies: Sequence[complex], sign=1,
                     threads: int = 1) -> np.ndarray:
    """D at each energy; results keep the input order."""
    energies = [complex(E) for E in energies]
    if threads <= 1:
        return np.array([spectral_determinant(spec, E, sign) for E in energies])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(lambda E: spectral_determinant(spec, E, sign), energies)))


def quantum_wronskian_residual(spec: OdeSpec, E: complex) -> float:
    """
    |e^{2 pi i p/alpha} D+(qE) D-(E/q) - e^{-2 pi i p/alpha} D+(E/q) D-(qE) - 2i sin(2 pi p/alpha)|,
    relative to max(1, size of the terms).
    """
    q = spec.q
    phase = cmath.exp(2j * math.pi * spec.p / spec.alpha)
    first = phase * spectral_determinant(spec, q * E, 1) * spectral_determinant(spec, E / q, -1)
    second = spectral_determinant(spec, E / q, 1) * spectral_determinant(spec, q * E, -1) / phase
    target = 2j * cmath.sin(2 * math.pi * spec.p / spec.alpha)
    scale = max(1.0, abs(first), abs(second))
    return abs(first - second - target) / scale


def shift_covariance_residual(spec: OdeSpec, E: complex) -> float:
    """|D+ of the shifted equation at E - D+ at q^{-2} E|, relative."""
    shifted = spectral_determinant(spec.shifted(), E, 1)
    direct = spectral_determinant(spec, E / spec.q ** 2, 1)
    return abs(shifted - direct) / max(1.0, abs(direct))


# ---------------------------------------------------------------------------
# Free fermion
# ---------------------------------------------------------------------------

def free_fermion_lambda(r: int, a_map: Mapping[int, complex], E: complex) -> complex:
    """(-1)^A E^r / r + sum_j (-1)^j a_{2j+1} E^{2j+1}, A = (r-1)/2."""
    if r % 2 == 0:
        raise ValueError(f"free fermion needs odd r, got {r}")
    A = (r - 1) // 2
    E = complex(E)
    value = (-1) ** A * E ** r / r
    for s, a in a_map.items():
        value += (-1) ** ((s - 1) // 2) * complex(a) * E ** s
    return value


def free_fermion_determinant(r: int, k: float, a_map: Mapping[int, complex], E: complex) -> complex:
    """D_+ = Gamma(1/2 + k) / Gamma(1/2 + k - lambda(E)/2)."""
    lam = free_fermion_lambda(r, a_map, E)
    return gamma_ratio([0.5 + k]) * rgamma(0.5 + k - lam / 2)

