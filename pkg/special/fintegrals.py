"""
The integrals f1, f2, f3 that enter the perturbative coefficients J_1..J_3.

All three are real for real (h, g) with h > 0. The integrands are built from
products |Gamma(a + 2ix)|^2, evaluated in log space, and decay like
exp(-4 pi |x|), so every real-line integral is cut at CUTOFF.

f2 is integrated adaptively with scipy.integrate.quad. f3 uses composite
Gauss-Legendre panels on both axes; the 1/(x - y - i0) kernel is split into
a principal value (handled by subtracting the singular part) plus i*pi times
the residue at x = y.
"""

import logging
import math

import numpy as np
from scipy import integrate

from special.gamma import SpecialFunctionError, gamma, gamma_ratio, log_gamma

logger = logging.getLogger("sixvertex.special.fintegrals")

CUTOFF = 8.0
F2_TOL = 1e-9
_BRANCH_EPS = 1e-12


def _abs_gamma_sq_log(a: float, x: np.ndarray) -> np.ndarray:
    """log |Gamma(a + 2ix)|^2 for real a."""
    return 2.0 * np.real(log_gamma(a + 2j * x))


def _s1(x: np.ndarray, g: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    log_mag = _abs_gamma_sq_log(1 - 2 * g, x) + 2 * _abs_gamma_sq_log(g, x)
    return np.sinh(2 * np.pi * x) * np.exp(log_mag)


def _v(y: np.ndarray, g: float) -> np.ndarray:
    """The y-factor of S2(x, y) = S1(x) V(y)."""
    y = np.asarray(y, dtype=float)
    log_mag = (_abs_gamma_sq_log(g, y) + _abs_gamma_sq_log(2 * g, y)
               + _abs_gamma_sq_log(2 - 3 * g, y))
    return np.sinh(2 * np.pi * y) * np.exp(log_mag)


def _s3(x: np.ndarray, g: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    log_mag = _abs_gamma_sq_log(2 - 3 * g, x) + 3 * _abs_gamma_sq_log(g, x)
    ratio = ((np.sin(4j * np.pi * x + 2 * np.pi * g) - 2 * np.sin(2 * np.pi * g))
             / np.sin(2j * np.pi * x + 2 * np.pi * g))
    return np.sinh(2 * np.pi * x) * np.exp(log_mag) * ratio


def _s3_tilde(x: np.ndarray, g: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    const = (3.0 / np.pi**2 * math.sin(4 * math.pi * g) * math.sin(2 * math.pi * g)
             * _real(gamma(3 - 4 * g)) * _real(gamma(1 - g))**2 * _real(gamma(3 * g - 1))**2)
    log_mag = (_abs_gamma_sq_log(2 - 3 * g, x) + _abs_gamma_sq_log(g, x)
               + _abs_gamma_sq_log(2 * g - 1, x))
    return _s3(x, g) - const * np.sinh(2 * np.pi * x) * np.exp(log_mag)


def _s4(h: float, g: float) -> float:
    pole = (2 - 3 * g)**2 - 4 * h**2
    trig = 2 * math.cos(2 * math.pi * g) + 2 * math.cos(4 * math.pi * g) + 1
    if abs(pole) < _BRANCH_EPS or abs(trig) < _BRANCH_EPS:
        raise SpecialFunctionError(
            kind="domain",
            message=f"f3 continuation singular at h={h}, g={g}",
            details={"h": h, "g": g},
        )
    s2g, s3g = math.sin(2 * math.pi * g), math.sin(3 * math.pi * g)
    first = (s2g * s3g * _real(gamma(5 - 6 * g)) * _real(gamma(2 - 2 * g))
             * _real(gamma(1 - g))**3 * _real(gamma(3 * g - 1))**2
             * _real(gamma(5 * g - 3))) / (math.pi * pole)
    poly = (3 * g - 6 * h - 2
            + (15 * g - 6 * h - 10) * math.cos(2 * math.pi * g)
            + (9 * g - 6 * h - 6) * math.cos(4 * math.pi * g)
            + 2 * (3 * g - 2) * math.cos(6 * math.pi * g))
    second = (4 * s3g * math.cos(math.pi * g) * _real(gamma(4 - 6 * g))
              * _real(gamma(2 - 2 * g))**3 * _real(gamma(4 * g - 2))**3
              / (3 * pole * trig)) * poly
    return first + second


def _real(value) -> float:
    return float(np.real(value))


def _check_h(h: float) -> None:
    if not h > 0:
        raise SpecialFunctionError(
            kind="domain",
            message=f"f2/f3 need Re(h) > 0, got h={h}",
            details={"h": h},
        )


def f1(h: float, g: float) -> float:
    """
    pi Gamma(1-2g) / sin(pi g) * Gamma(g+2h) / Gamma(1-g+2h).

    Raises:
        SpecialFunctionError(kind="domain") at a Gamma pole or sin(pi g) = 0.
    """
    s = math.sin(math.pi * g)
    if abs(s) < _BRANCH_EPS:
        raise SpecialFunctionError(
            kind="domain",
            message=f"f1 has a pole at g={g}",
            details={"g": g},
        )
    value = math.pi / s * gamma_ratio([1 - 2 * g, g + 2 * h], [1 - g + 2 * h])
    return float(value.real)


def f2(h: float, g: float) -> float:
    """
    Second-order integral, with its analytic continuation for 1/2 < g < 1.

    Raises:
        SpecialFunctionError(kind="domain") for g outside (0,1/2) U (1/2,1) or h <= 0.
        SpecialFunctionError(kind="quadrature") when the error estimate exceeds 1e-9 (relative to max(1, |integral|)).
    """
    _check_h(h)
    if not 0 < g < 1 or abs(g - 0.5) < _BRANCH_EPS:
        raise SpecialFunctionError(
            kind="domain",
            message=f"f2 is defined for g in (0,1/2) U (1/2,1), got g={g}",
            details={"g": g},
        )
    prefactor = (2.0**(1 - 4 * g) * _real(gamma(1 - g))**2 / _real(gamma(0.5 + g))**2
                 * _real(gamma_ratio([2 * g + 2 * h], [1 - 2 * g + 2 * h])))

    def integrand(x: float) -> float:
        return float(_s1(np.array([x]), g)[0]) * x / (x * x + h * h)

    points = sorted({p for p in (h, abs(1 - 2 * g) / 2) if 0 < p < CUTOFF})
    value, err = integrate.quad(integrand, 0.0, CUTOFF, points=points,
                                limit=400, epsabs=1e-13, epsrel=1e-12)
    if err > F2_TOL * max(1.0, abs(value)):
        raise SpecialFunctionError(
            kind="quadrature",
            message=f"f2 quadrature error estimate {err:.2e} above tolerance",
            details={"h": h, "g": g, "error": err, "partial_sum": value},
        )
    bracket = value / math.pi
    if g > 0.5:
        den = (2 * h + 1 - 2 * g) * (2 * h - 1 + 2 * g)
        if abs(den) < _BRANCH_EPS:
            raise SpecialFunctionError(
                kind="domain",
                message=f"f2 continuation has a pole at h={h}, g={g}",
                details={"h": h, "g": g},
            )
        bracket -= (math.sin(2 * math.pi * g) * _real(gamma(3 - 4 * g))
                    * _real(gamma(1 - g))**2 * _real(gamma(3 * g - 1))**2) / den
    return prefactor * bracket


def _panels(h: float, g: float, panels: int) -> np.ndarray:
    """Breakpoints on [0, CUTOFF], graded towards the origin."""
    fine = np.geomspace(1e-6, 0.5, 14)
    coarse = np.linspace(0.5, CUTOFF, panels + 1)
    pinch = abs(2 - 3 * g) / 2
    # Gamma(2 - 3g +- 2ix) nearly pinches the real axis at x ~ pinch when g ~ 2/3
    extra = [p for p in (h, abs(1 - 2 * g) / 2, pinch, 0.1 * pinch, 0.3 * pinch, 3 * pinch, 10 * pinch)
             if 1e-7 < p < CUTOFF]
    return np.unique(np.concatenate([[0.0], fine, coarse, extra]))


def _composite_nodes(breaks: np.ndarray, order: int):
    t, w = np.polynomial.legendre.leggauss(order)
    a, b = breaks[:-1, None], breaks[1:, None]
    nodes = 0.5 * (b - a) * t[None, :] + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def _principal_values(y: np.ndarray, g: float, breaks: np.ndarray, order: int) -> np.ndarray:
    """PV integral over the real line of S1(x)/(x - y), for each y > 0."""
    x, w = _composite_nodes(breaks, order)
    s1x = _s1(x, g)
    s1y = _s1(y, g)
    # oddness of S1 folds the line onto [0, X]: kernel 2x / (x^2 - y^2)
    phi = 2 * x[None, :] * s1x[None, :] / (x[None, :] + y[:, None])
    diff = (phi - s1y[:, None]) / (x[None, :] - y[:, None])
    return diff @ w + s1y * np.log((CUTOFF - y) / y)


def f3(h: float, g: float, panels: int = 60, order: int = 16) -> float:
    """
    Third-order integral for g in (0,1/3) U (1/3,1/2) U (1/2,2/3) U (2/3,1).

    `panels` sets the uniform panel count on [0.5, CUTOFF]; doubling it is
    the refinement check.

    Raises:
        SpecialFunctionError(kind="domain") on a branch boundary or h <= 0.
    """
    _check_h(h)
    if not 0 < g < 1 or any(abs(g - b) < _BRANCH_EPS for b in (1 / 3, 0.5, 2 / 3)):
        raise SpecialFunctionError(
            kind="domain",
            message=f"f3 undefined on branch boundary or outside (0,1): g={g}",
            details={"g": g},
        )
    prefactor = (2.0**(2 - 6 * g) * math.sqrt(math.pi)
                 * _real(gamma(1 - g))**3 / _real(gamma(0.5 + g))**3
                 * _real(gamma_ratio([3 * g - 1 + 2 * h], [2 - 3 * g + 2 * h])))

    breaks = _panels(h, g, panels)
    y, wy = _composite_nodes(breaks, order)
    pv = _principal_values(y, g, breaks, order + 8)
    vy = _v(y, g)
    s1y = _s1(y, g)
    outer = (vy * pv * y + math.pi * h * vy * s1y) / (y * y + h * h)
    double = 2.0 * float(outer @ wy) / (2 * math.pi)**2
    if not np.isfinite(double):
        raise SpecialFunctionError(
            kind="quadrature",
            message=f"f3 principal-value integral failed at h={h}, g={g}",
            details={"h": h, "g": g},
        )

    s3 = _s3_tilde if g > 0.5 else _s3
    odd_part = s3(y, g) / (y + 1j * h) + s3(-y, g) / (-y + 1j * h)
    single_c = complex(odd_part @ wy) / (2 * math.pi)
    if abs(single_c.imag) > 1e-8 * max(1.0, abs(single_c.real)):
        logger.warning("f3 single integral has imaginary residue %.2e", single_c.imag)

    bracket = -math.sin(4 * math.pi * g) / math.pi**2 * double + single_c.real / 3
    if g > 2 / 3:
        bracket += _s4(h, g)
    return prefactor * bracket


def f_perturbative(s: int, h: float, g: float) -> float:
    """Dispatch f_s for s in 1..3."""
    table = {1: f1, 2: f2, 3: f3}
    if s not in table:
        raise ValueError(f"f_s is available for s in 1..3, got {s}")
    return table[s](h, g)


__all__ = ["f1", "f2", "f3", "f_perturbative"]
