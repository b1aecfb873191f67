"""
Jost solutions psi_{+-p}: the solutions behaving as e^{+-p y} at y -> -inf.

Near y_min each is a convergent exponential series
    psi = e^{s y} sum_K a_K e^{K y},   s = +-p,
with K running over non-negative combinations of the potential exponents;
the series is truncated at third order and handed to DOP853.
"""

import cmath
import logging
import math
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ode.models import OdeError, OdeSpec

logger = logging.getLogger("sixvertex.ode.jost")

SERIES_ORDER = 3
SERIES_SMALLNESS = 1e-4
RTOL = 1e-12


def parse_sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def series_coefficients(terms: Sequence[Tuple[complex, float]], s: complex,
                        order: int = SERIES_ORDER) -> List[Tuple[float, complex]]:
    """
    (K, a_K) pairs of phi = psi e^{-s y}, from (K^2 + 2 s K) a_K = sum_i v_i a_{K - kappa_i}.

    Raises:
        OdeError(kind="resonance") when K + 2s vanishes for a generated K.
    """
    vs = [complex(v) for v, _ in terms]
    kappas = [float(k) for _, k in terms]
    m = len(terms)
    coeffs: Dict[Tuple[int, ...], complex] = {(0,) * m: 1.0 + 0j}
    out = [(0.0, 1.0 + 0j)]
    for total in range(1, order + 1):
        for combo in combinations_with_replacement(range(m), total):
            idx = [0] * m
            for i in combo:
                idx[i] += 1
            K = sum(c * k for c, k in zip(idx, kappas))
            if abs(K + 2 * s) < 1e-10 * max(1.0, K):
                raise OdeError("resonance", f"series exponent K={K} meets -2s for s={s}",
                               {"K": K, "s": s})
            acc = 0j
            for i in range(m):
                if idx[i]:
                    prev = list(idx)
                    prev[i] -= 1
                    acc += vs[i] * coeffs[tuple(prev)]
            a = acc / (K * (K + 2 * s))
            coeffs[tuple(idx)] = a
            out.append((K, a))
    return out


def start_point(terms: Sequence[Tuple[complex, float]], smallness: float = SERIES_SMALLNESS) -> float:
    """Largest y at which every |v_i| e^{kappa_i y} is below `smallness`, capped at -1."""
    y = -1.0
    for v, kappa in terms:
        if abs(v) > 0:
            y = min(y, math.log(smallness / abs(v)) / kappa)
    return y


def _evaluate_series(series, s: complex, y: float) -> Tuple[complex, complex]:
    value = 0j
    deriv = 0j
    for K, a in series:
        e = a * cmath.exp((s + K) * y)
        value += e
        deriv += (s + K) * e
    return value, deriv


def _rhs(y, z, terms, p2):
    u = p2
    for v, kappa in terms:
        u += v * cmath.exp(kappa * y)
    return [z[1], u * z[0]]


def _check_resonance(spec: OdeSpec, s: complex) -> None:
    ratio = -2 * s / spec.alpha
    if abs(ratio.imag) < 1e-12 and ratio.real > 0.5 and abs(ratio.real - round(ratio.real)) < 1e-10:
        raise OdeError("resonance", f"2p/(n+r) = {ratio.real} is an integer for this sign",
                       {"p": spec.p, "n": spec.n, "r": spec.r})


def jost_profile(spec: OdeSpec, E: complex, sign, ys: Sequence[float],
                 rtol: float = RTOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    psi_{sign p} and its derivative at the increasing points `ys`.

    Points below the series start are evaluated from the series itself.

    Raises:
        OdeError(kind="resonance") at an excluded p.
        OdeError(kind="integration") when the stepper fails.
    """
    s = parse_sign(sign) * spec.p
    _check_resonance(spec, s)
    terms = spec.potential_terms(E)
    series = series_coefficients(terms, s)
    y0 = start_point(terms)
    ys = np.asarray(ys, dtype=float)
    if np.any(np.diff(ys) < 0):
        raise ValueError("evaluation points must be increasing")
    values = np.zeros(len(ys), dtype=complex)
    derivs = np.zeros(len(ys), dtype=complex)
    inside = ys <= y0
    for i in np.flatnonzero(inside):
        values[i], derivs[i] = _evaluate_series(series, s, ys[i])
    outside = ys[~inside]
    if len(outside):
        psi0, dpsi0 = _evaluate_series(series, s, y0)
        scale = max(abs(psi0), abs(dpsi0), 1e-300)
        sol = solve_ivp(
            _rhs,
            method="DOP853",
            t_span=(y0, float(outside[-1])),
            y0=[psi0, dpsi0],
            t_eval=outside,
            rtol=rtol,
            atol=1e-14 * scale,
            args=(terms, spec.p ** 2),
        )
        if not sol.success or len(sol.t) != len(outside):
            where = float(sol.t[-1]) if len(sol.t) else y0
            raise OdeError("integration", f"Jost integration stopped at y={where:.6g}: {sol.message}",
                           {"y": where, "E": complex(E), "sign": parse_sign(sign)})
        values[~inside] = sol.y[0]
        derivs[~inside] = sol.y[1]
        logger.debug("jost sign=%+d E=%s y0=%.3f nfev=%d", parse_sign(sign), E, y0, sol.nfev)
    return values, derivs


def jost_psi(spec: OdeSpec, E: complex, sign, y: float) -> Tuple[complex, complex]:
    """(psi_{sign p}(y), psi'_{sign p}(y))."""
    values, derivs = jost_profile(spec, E, sign, [y])
    return complex(values[0]), complex(derivs[0])
