"""
Even r, even A with (mu, j) = (r/2, A/2): the scheme that trades the
log-modified invariant a_{r/2} for the quasi-shift parameter s.

The chain reduces to a two-site chain with N~ = 2N/r, n~ = 2n/r. The
parameter s solves the ground-state quantization condition

    4 s log(N~ / (2 N~_0)) - delta_k(s)
        = (-1)^(r/2 - 1) a_{r/2} 4 (n~+2)/n~ N~_0 log(r N~ / (4 N~_0)),

and enters the ODE as c = (-1)^(A/2) r s / 2.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy import integrate
from scipy.optimize import brentq

from dictionary.descriptor import DictionaryError
from special.gamma import SpecialFunctionError, gamma_ratio, log_gamma

logger = logging.getLogger("sixvertex.harness.quasi_shift_scheme")

_MAX_EXPANSIONS = 60


@dataclass
class QuasiShiftResult:
    s: float
    alpha: float
    consistency: float
    c: float
    N_tilde: float
    n_tilde: float

    def to_dict(self) -> Dict:
        return {"s": self.s, "alpha": self.alpha, "consistency": self.consistency, "c": self.c,
                "N_tilde": self.N_tilde, "n_tilde": self.n_tilde}


def _check(r: int, A: int) -> None:
    if r < 4 or r % 2 or A % 2 or not 1 <= A <= r - 2:
        raise ValueError(f"needs even r >= 4 and even A in 1..r-2, got r={r}, A={A}")


def n0_tilde(n_tilde: float) -> float:
    """sqrt(pi) Gamma(1 + 1/n~) / (2 Gamma(3/2 + 1/n~))."""
    if not n_tilde > 0:
        raise ValueError(f"n_tilde must be positive, got {n_tilde}")
    x = 1.0 / n_tilde
    return math.sqrt(math.pi) * gamma_ratio([1 + x], [1.5 + x]).real / 2


def alpha_angle(r: int, n_tilde: float, a_half: float, N_tilde: float) -> float:
    """Leading-order arg of the first reduced inhomogeneity."""
    N0 = n0_tilde(n_tilde)
    return (math.pi / 2 + (-1) ** (r // 2) * a_half * (2 * N0 / N_tilde)
            * math.log(r * N_tilde / (4 * N0)))


def _im_log_gamma(x: float, y: float) -> float:
    """Im log Gamma(x + iy) on the branch continuous in y, for x > 0."""
    shift, total = 0, 0.0
    while x + shift < 0.5:
        total -= math.atan2(y, x + shift)
        shift += 1
    return log_gamma(complex(x + shift, y)).imag + total


def delta_k(s: float, n_tilde: float, k: float = 0.0) -> float:
    """
    -4 s (n~+2)/n~ log 2 + 4 [Im log Gamma(1/2 + p + is/2) + Im log Gamma(1/2 - p + is/2)]

    with p = (n~ + 2) k / 2.
    """
    p = 0.5 * (n_tilde + 2) * k
    if not abs(p) < 0.5:
        raise ValueError(f"|p~| must be below 1/2, got {p}")
    return (-4 * s * (n_tilde + 2) / n_tilde * math.log(2)
            + 4 * (_im_log_gamma(0.5 + p, s / 2) + _im_log_gamma(0.5 - p, s / 2)))


def _rhs(r: int, n_tilde: float, a_half: float, N_tilde: float) -> float:
    N0 = n0_tilde(n_tilde)
    return ((-1) ** (r // 2 - 1) * a_half * 4 * (n_tilde + 2) / n_tilde * N0
            * math.log(r * N_tilde / (4 * N0)))


def quantization_residual(s: float, r: int, n_tilde: float, a_half: float, N_tilde: float,
                          k: float = 0.0) -> float:
    N0 = n0_tilde(n_tilde)
    return (4 * s * math.log(N_tilde / (2 * N0)) - delta_k(s, n_tilde, k)
            - _rhs(r, n_tilde, a_half, N_tilde))


def _bracket(f) -> float:
    lo, hi = -1.0, 1.0
    for _ in range(_MAX_EXPANSIONS):
        f_lo, f_hi = f(lo), f(hi)
        if f_lo == 0:
            return lo
        if f_hi == 0:
            return hi
        if f_lo * f_hi < 0:
            return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        lo, hi = 2 * lo, 2 * hi
    raise DictionaryError("inversion", "quantization condition has no bracketed root",
                          {"lo": lo, "hi": hi})


def quasi_shift_scheme(r: int, A: int, n: float, a_half: float, N_tilde: float,
                       k: float = 0.0) -> QuasiShiftResult:
    """
    s for a given a_{r/2} at reduced size N_tilde.

    Raises:
        DictionaryError(kind="inversion") when no root is bracketed.
    """
    _check(r, A)
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    n_t = 2 * n / r
    N0 = n0_tilde(n_t)
    if not N_tilde > 2 * N0:
        raise ValueError(f"N_tilde must exceed 2 N~_0 = {2 * N0:.6g}, got {N_tilde}")
    try:
        s = _bracket(lambda x: quantization_residual(x, r, n_t, a_half, N_tilde, k))
    except SpecialFunctionError as exc:
        raise DictionaryError("inversion", f"delta_k failed: {exc.message}", exc.details) from exc
    consistency = s + (-1) ** (r // 2) * a_half * (n_t + 2) / n_t * N0
    logger.debug("r=%d n~=%.4g N~=%.4g: s=%.10g consistency=%.3e", r, n_t, N_tilde, s, consistency)
    return QuasiShiftResult(s=float(s), alpha=alpha_angle(r, n_t, a_half, N_tilde),
                           consistency=float(consistency), c=ode_coefficient(A, r, s),
                           N_tilde=float(N_tilde), n_tilde=n_t)


def a_half_for_s(r: int, A: int, n: float, s: float, N_tilde: float, k: float = 0.0) -> float:
    """The a_{r/2} that puts s at reduced size N_tilde; the condition is linear in it."""
    _check(r, A)
    n_t = 2 * n / r
    N0 = n0_tilde(n_t)
    lhs = 4 * s * math.log(N_tilde / (2 * N0)) - delta_k(s, n_t, k)
    return lhs / _rhs(r, n_t, 1.0, N_tilde)


def ode_coefficient(A: int, r: int, s: float) -> float:
    """c = (-1)^(A/2) r s / 2."""
    return (-1) ** (A // 2) * r * s / 2


def _log_sinh(x: float) -> float:
    return x + math.log1p(-math.exp(-2 * x)) - math.log(2)


def _b_integrand(t: float, n_tilde: float, beta: float) -> float:
    if t == 0:
        return (n_tilde + 1) * beta / n_tilde
    c = n_tilde + 2
    if beta == 0:
        return 0.0
    log_value = (_log_sinh(t) + _log_sinh((n_tilde + 1) * t) - _log_sinh(n_tilde * t)
                 - _log_sinh(c * t) + _log_sinh(abs(beta) * c * t) - math.log(t))
    return math.copysign(math.exp(log_value), beta)


def b_infinity(n_tilde: float, alpha: float) -> float:
    """
    Slope of the ground-state s in N~ at fixed alpha:

        -(n~/pi) int_0^inf dt/t sinh t sinh((n~+1)t) sinh((1 - 2 alpha/pi)(n~+2)t)
                                / (sinh(n~ t) sinh((n~+2)t)).

    Raises:
        ValueError when |1 - 2 alpha/pi| (n~+2) >= n~ and the integral diverges.
    """
    if not n_tilde > 0:
        raise ValueError(f"n_tilde must be positive, got {n_tilde}")
    beta = 1 - 2 * alpha / math.pi
    if abs(beta) * (n_tilde + 2) >= n_tilde:
        raise ValueError(f"alpha={alpha} is outside the convergent window for n~={n_tilde}")
    value, _ = integrate.quad(_b_integrand, 0, np.inf, args=(n_tilde, beta),
                              epsabs=1e-13, epsrel=1e-11, limit=200)
    return -n_tilde / math.pi * value
