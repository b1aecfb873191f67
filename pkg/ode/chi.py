"""
The subdominant solution chi, decaying as y -> +inf.

Write U = e^{alpha y} (1 + x(y)), alpha = n + r. The normalisation is

    chi = U^{-1/4} exp(-S(y)) f(y),   S' = sqrt(U),   f -> 1,

with S fixed by requiring S(y) - S_div(y) -> 0, where S_div collects the
non-decaying terms of the large-y expansion of int sqrt(U). A term whose
exponent vanishes contributes C0 (y - y_ref) with y_ref = (2/alpha) log(alpha/4);
at n = r this reproduces the Gamma-ratio form of D_+.

The correction h = f'/f obeys the Riccati equation
    h' = -R - h^2 - 2 w0 h,   w0 = -sqrt(U) - U'/(4U),   R = 5U'^2/(16U^2) - U''/(4U),
which is integrated backwards with BDF (complex state) from a far point,
starting from the adiabatic value plus its first correction, down to the
matching region. S is carried along as a quadrature of sqrt(U) - S_div'.
Below the matching region chi itself is integrated with DOP853.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import List, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ode.models import OdeError, OdeSpec

logger = logging.getLogger("sixvertex.ode.chi")

FAR_AMPLITUDE = 1e5
FAR_SMALLNESS = 1e-4
MATCH_FLOOR = 0.25
MATCH_STEPS = (0.0, 0.2, 0.4)
MAX_EXPANSION_TERMS = 200000
RTOL = 1e-12
_ZERO_EXPONENT = 1e-12


@dataclass
class ChiFrame:
    """Everything needed to evaluate chi at and above the matching point."""
    spec: OdeSpec
    E: complex
    alpha: float
    terms: List[Tuple[complex, float]]
    x_terms: List[Tuple[complex, float]]
    kept: List[Tuple[complex, float]]
    log_coefficient: complex
    tail_s: complex
    y_far: float
    y_match: float

    @property
    def p2(self) -> complex:
        return self.spec.p ** 2

    @property
    def y_ref(self) -> float:
        return 2.0 / self.alpha * math.log(self.alpha / 4.0)

    def one_plus_x(self, y: float) -> complex:
        total = 1.0 + 0j
        for w, beta in self.x_terms:
            total += w * cmath.exp(beta * y)
        return total

    def derivatives(self, y: float) -> Tuple[complex, complex, complex]:
        """U, U', U'' at y."""
        u, du, ddu = self.p2, 0j, 0j
        for v, kappa in self.terms:
            e = v * cmath.exp(kappa * y)
            u += e
            du += kappa * e
            ddu += kappa * kappa * e
        return u, du, ddu

    def sqrt_u(self, y: float) -> complex:
        return cmath.exp(0.5 * self.alpha * y) * cmath.sqrt(self.one_plus_x(y))

    def log_u(self, y: float) -> complex:
        return self.alpha * y + cmath.log(self.one_plus_x(y))

    def s_div(self, y: float) -> complex:
        total = self.log_coefficient * (y - self.y_ref)
        for coef, gamma in self.kept:
            if gamma > _ZERO_EXPONENT:
                total += coef * cmath.exp(gamma * y) / gamma
        return total

    def s_div_prime(self, y: float) -> complex:
        return sum((coef * cmath.exp(gamma * y) for coef, gamma in self.kept), 0j)


def _x_terms(spec: OdeSpec, terms) -> List[Tuple[complex, float]]:
    lead, alpha = terms[0]
    out = [(v / lead, kappa - alpha) for v, kappa in terms[1:]]
    if spec.p != 0:
        out.append((spec.p ** 2 / lead, -alpha))
    return out


def sqrt_expansion(x_terms: Sequence[Tuple[complex, float]], alpha: float,
                   k_max: int) -> List[Tuple[complex, float]]:
    """
    (coefficient, exponent) pairs of e^{alpha y/2} (1 + x)^{1/2} through total order k_max.

    Raises:
        OdeError(kind="domain") when the expansion has too many terms.
    """
    m = len(x_terms)
    out: List[Tuple[complex, float]] = []
    binom = 1.0
    for k in range(k_max + 1):
        if k:
            binom *= (0.5 - (k - 1)) / k
        for combo in combinations_with_replacement(range(m), k):
            counts = [0] * m
            for i in combo:
                counts[i] += 1
            coef = binom * math.factorial(k)
            gamma = 0.5 * alpha
            for c, (w, beta) in zip(counts, x_terms):
                if c:
                    coef = coef * w ** c / math.factorial(c)
                    gamma += c * beta
            out.append((complex(coef), gamma))
            if len(out) > MAX_EXPANSION_TERMS:
                raise OdeError("domain", "large-y expansion of sqrt(U) does not truncate",
                               {"alpha": alpha, "k_max": k_max})
    return out


def _far_point(alpha: float, x_terms) -> float:
    y = 2.0 * math.log(FAR_AMPLITUDE) / alpha
    count = max(len(x_terms), 1)
    for w, beta in x_terms:
        if abs(w) > 0:
            y = max(y, math.log(count * abs(w) / FAR_SMALLNESS) / (-beta))
    return y


def _match_point(frame: ChiFrame) -> float:
    """Lowest y above which Re(1 + x) stays >= MATCH_FLOOR up to y_far."""
    start = -1.0
    for w, beta in frame.x_terms:
        if abs(w) > 0:
            start = min(start, math.log(abs(w)) / (-beta) - 2.0)
    grid = np.linspace(start, frame.y_far, 2001)
    bad = [i for i, y in enumerate(grid) if frame.one_plus_x(float(y)).real < MATCH_FLOOR]
    if not bad:
        return float(grid[0])
    if bad[-1] + 1 >= len(grid):
        raise OdeError("window", "no WKB region below the far point",
                       {"E": frame.E, "y_far": frame.y_far})
    return float(grid[bad[-1] + 1])


def chi_frame(spec: OdeSpec, E: complex) -> ChiFrame:
    """
    Set up the WKB data for chi at energy E.

    Raises:
        OdeError(kind="window") if the matching region cannot be placed
        below the far point.
    """
    terms = spec.potential_terms(E)
    alpha = terms[0][1]
    x_terms = _x_terms(spec, terms)
    y_far = _far_point(alpha, x_terms)
    if 0.5 * alpha * y_far > 60:
        raise OdeError("window", f"far point y={y_far:.3g} is out of range",
                       {"E": complex(E), "y_far": y_far})

    if x_terms:
        beta_min = min(-beta for _, beta in x_terms)
        k_kept = int(math.floor(0.5 * alpha / beta_min + 1e-9))
        x_far = sum(abs(w) * math.exp(beta * y_far) for w, beta in x_terms)
        amp = math.exp(0.5 * alpha * y_far)
        k_tail = k_kept + 1
        if x_far > 0:
            k_tail = max(k_tail, int(math.ceil(math.log(1e-17 / amp) / math.log(x_far))))
        expansion = sqrt_expansion(x_terms, alpha, k_tail)
    else:
        expansion = [(1.0 + 0j, 0.5 * alpha)]
    kept = [(c, g) for c, g in expansion if g >= -_ZERO_EXPONENT]
    dropped = [(c, g) for c, g in expansion if g < -_ZERO_EXPONENT]
    log_coefficient = sum((c for c, g in kept if abs(g) <= _ZERO_EXPONENT), 0j)
    tail_s = sum((-c * cmath.exp(g * y_far) / g for c, g in dropped), 0j)

    frame = ChiFrame(spec=spec, E=complex(E), alpha=alpha, terms=terms, x_terms=x_terms,
                     kept=kept, log_coefficient=log_coefficient, tail_s=tail_s,
                     y_far=y_far, y_match=0.0)
    frame.y_match = _match_point(frame)
    if frame.y_match + MATCH_STEPS[-1] >= y_far:
        raise OdeError("window", "matching region collides with the far point",
                       {"E": complex(E), "y_match": frame.y_match, "y_far": y_far})
    logger.debug("chi frame E=%s y_match=%.3f y_far=%.3f kept=%d", E, frame.y_match, y_far, len(kept))
    return frame


def _riccati_rhs(y, z, frame: ChiFrame):
    u, du, ddu = frame.derivatives(y)
    root = frame.sqrt_u(y)
    w0 = -root - du / (4 * u)
    R = 5 * du * du / (16 * u * u) - ddu / (4 * u)
    h = z[0]
    return [-R - h * h - 2 * w0 * h, h, root - frame.s_div_prime(y)]


def _w0_and_r(frame: ChiFrame, y: float) -> Tuple[complex, complex]:
    u, du, ddu = frame.derivatives(y)
    w0 = -frame.sqrt_u(y) - du / (4 * u)
    return w0, 5 * du * du / (16 * u * u) - ddu / (4 * u)


def _adiabatic_h(frame: ChiFrame, y: float) -> complex:
    w0, R = _w0_and_r(frame, y)
    return -R / (2 * w0)


def _riccati_start(frame: ChiFrame, step: float = 1e-4) -> complex:
    """h at y_far: -(R + h_a' + h_a^2) / (2 w0) around the adiabatic h_a = -R / (2 w0)."""
    y = frame.y_far
    w0, R = _w0_and_r(frame, y)
    h_a = -R / (2 * w0)
    dh_a = (_adiabatic_h(frame, y + step) - _adiabatic_h(frame, y - step)) / (2 * step)
    return -(R + dh_a + h_a * h_a) / (2 * w0)


def _riccati_jac(y, z, frame: ChiFrame):
    u, du, _ = frame.derivatives(y)
    w0 = -frame.sqrt_u(y) - du / (4 * u)
    return np.array([[-2 * z[0] - 2 * w0, 0, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)


def chi_log_data(frame: ChiFrame, ys: Sequence[float]) -> List[Tuple[complex, complex]]:
    """
    (log chi, chi'/chi) at points ys, each within [y_match, y_far).

    Raises:
        OdeError(kind="integration") when the Riccati integration fails.
    """
    ys = [float(y) for y in ys]
    if any(y < frame.y_match - 1e-12 or y >= frame.y_far for y in ys):
        raise ValueError(f"points must lie in [{frame.y_match}, {frame.y_far})")
    order = sorted(range(len(ys)), key=lambda i: -ys[i])
    t_eval = [ys[i] for i in order]

    h0 = _riccati_start(frame)
    sol = solve_ivp(
        _riccati_rhs,
        method="BDF",
        t_span=(frame.y_far, min(ys)),
        y0=np.array([h0, 0j, 0j]),
        t_eval=t_eval,
        rtol=RTOL,
        atol=1e-15,
        jac=_riccati_jac,
        args=(frame,),
    )
    if not sol.success or len(sol.t) != len(t_eval):
        where = float(sol.t[-1]) if len(sol.t) else frame.y_far
        raise OdeError("integration", f"chi correction stopped at y={where:.6g}: {sol.message}",
                       {"y": where, "E": frame.E})

    tail_h = frame.alpha / 16.0 * math.exp(-0.5 * frame.alpha * frame.y_far)
    out: List[Tuple[complex, complex]] = [(0j, 0j)] * len(ys)
    for col, i in enumerate(order):
        y = ys[i]
        h, integral, quadrature = sol.y[:, col]
        S = frame.s_div(y) + quadrature - frame.tail_s
        log_chi = -S - 0.25 * frame.log_u(y) + integral - tail_h
        u, du, _ = frame.derivatives(y)
        w = -frame.sqrt_u(y) - du / (4 * u) + h
        out[i] = (complex(log_chi), complex(w))
    return out


def _rhs(y, z, terms, p2):
    u = p2
    for v, kappa in terms:
        u += v * cmath.exp(kappa * y)
    return [z[1], u * z[0]]


def chi_subdominant(spec: OdeSpec, E: complex, y: float) -> Tuple[complex, complex]:
    """
    (chi(y), chi'(y)).

    Above the matching point the WKB data are used directly; below it chi
    is integrated backwards from the matching point.

    Raises:
        OdeError(kind="window") or OdeError(kind="integration").
    """
    frame = chi_frame(spec, E)
    if y >= frame.y_match:
        if y >= frame.y_far:
            raise OdeError("window", f"y={y} lies beyond the far point {frame.y_far:.3g}",
                           {"y": y, "y_far": frame.y_far})
        log_chi, w = chi_log_data(frame, [y])[0]
        value = cmath.exp(log_chi)
        return value, w * value
    log_chi, w = chi_log_data(frame, [frame.y_match])[0]
    value = cmath.exp(log_chi)
    start = [value, w * value]
    scale = max(abs(start[0]), abs(start[1]), 1e-300)
    sol = solve_ivp(
        _rhs,
        method="DOP853",
        t_span=(frame.y_match, float(y)),
        y0=start,
        rtol=RTOL,
        atol=1e-14 * scale,
        args=(frame.terms, spec.p ** 2),
    )
    if not sol.success:
        where = float(sol.t[-1])
        raise OdeError("integration", f"chi integration stopped at y={where:.6g}: {sol.message}",
                       {"y": where, "E": complex(E)})
    return complex(sol.y[0, -1]), complex(sol.y[1, -1])
