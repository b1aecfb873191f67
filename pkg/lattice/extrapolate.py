"""Large-N extrapolation of finite-size sequences."""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from lattice.models import ChainSpec, SumRuleSeries

logger = logging.getLogger("sixvertex.lattice.extrapolate")

MIN_POINTS = 4
COND_LIMIT = 1e10
MODELS = ("power-law", "power-law-plus-known-exponent")


@dataclass
class FitError(Exception):
    kind: str  # too_few_points | unstable
    message: str
    details: Optional[Dict[str, Any]] = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass
class FitResult:
    limit: complex
    exponent: float
    residual: float
    unstable: bool = False
    condition: float = float("nan")


def _guess_exponent(Ns: np.ndarray, values: np.ndarray) -> float:
    d1 = abs(values[-2] - values[-3])
    d2 = abs(values[-1] - values[-2])
    if d1 == 0 or d2 == 0:
        return 1.0
    # consecutive differences scale like N^-delta
    ratio = math.log(d1 / d2) / math.log(Ns[-1] / Ns[-2])
    return float(min(max(ratio, 0.1), 6.0))


def _fit_free(Ns: np.ndarray, values: np.ndarray) -> FitResult:
    delta0 = _guess_exponent(Ns, values)
    x0 = np.array([values[-1].real, values[-1].imag,
                   (values[0] - values[-1]).real * Ns[0] ** delta0,
                   (values[0] - values[-1]).imag * Ns[0] ** delta0, delta0])
    logN = np.log(Ns)

    def resid(p):
        model = (p[0] + 1j * p[1]) + (p[2] + 1j * p[3]) * np.exp(-p[4] * logN)
        diff = model - values
        return np.concatenate([diff.real, diff.imag])

    sol = least_squares(resid, x0, bounds=([-np.inf] * 4 + [1e-3], [np.inf] * 4 + [20.0]),
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    cond = float(np.linalg.cond(sol.jac))
    return FitResult(limit=complex(sol.x[0], sol.x[1]), exponent=float(sol.x[4]),
                     residual=float(np.max(np.abs(sol.fun))), condition=cond,
                     unstable=bool(cond > COND_LIMIT or not sol.success))


def _fit_pinned(Ns: np.ndarray, values: np.ndarray, exponent: float, terms: int) -> FitResult:
    design = np.column_stack([Ns ** (-exponent * i) for i in range(terms + 1)]).astype(complex)
    norms = np.linalg.norm(design, axis=0)
    coef, *_ = np.linalg.lstsq(design / norms, values, rcond=None)
    coef = coef / norms
    cond = float(np.linalg.cond(design / norms))
    fitted = design @ coef
    return FitResult(limit=complex(coef[0]), exponent=float(exponent),
                     residual=float(np.max(np.abs(fitted - values))), condition=cond,
                     unstable=bool(cond > COND_LIMIT))


def extrapolate(Ns: Sequence[int], values: Sequence[complex], model: str = "power-law",
                exponent: Optional[float] = None, terms: int = 1) -> FitResult:
    """
    Fit b1 + b2 N^-delta (+ b3 N^-2delta ...) and return b1.

    `model="power-law"` fits delta freely; with a known `exponent` (or
    model "power-law-plus-known-exponent") delta is pinned and `terms`
    correction powers are used.

    Raises:
        FitError(kind="too_few_points") with fewer than 4 N values.
    """
    if model not in MODELS:
        raise ValueError(f"Unknown extrapolation model: {model}")
    Ns_arr = np.asarray(Ns, dtype=float)
    vals = np.asarray(values, dtype=complex)
    if len(Ns_arr) != len(vals):
        raise ValueError(f"got {len(Ns_arr)} N values and {len(vals)} data points")
    if len(Ns_arr) < MIN_POINTS:
        raise FitError(
            kind="too_few_points",
            message=f"need at least {MIN_POINTS} points, got {len(Ns_arr)}",
            details={"Ns": list(Ns)},
        )
    if model == "power-law-plus-known-exponent" and exponent is None:
        raise ValueError("model power-law-plus-known-exponent needs an exponent")
    if exponent is not None:
        if terms + 1 > len(Ns_arr):
            raise FitError(kind="too_few_points",
                           message=f"{terms + 1} coefficients from {len(Ns_arr)} points")
        result = _fit_pinned(Ns_arr, vals, exponent, terms)
    else:
        result = _fit_free(Ns_arr, vals)
    if result.unstable:
        logger.warning("extrapolation unstable: condition number %.2e", result.condition)
    return result


def fit_sum_rule_series(series: SumRuleSeries, chain: ChainSpec, model: str = "power-law",
                        exponent: Optional[float] = None, terms: int = 1) -> SumRuleSeries:
    """Scale h_reg by (rN_0/N)^(2sn/(r(n+r))) and extrapolate in N."""
    scaled = [complex(v) * chain.with_(N=N).scale ** (-series.s * chain.root_exponent)
              for N, v in zip(series.Ns, series.h_reg)]
    fit = extrapolate(series.Ns, scaled, model=model, exponent=exponent, terms=terms)
    return SumRuleSeries(s=series.s, Ns=list(series.Ns), h=list(series.h), h_reg=list(series.h_reg),
                         limit=fit.limit, exponent=fit.exponent, residual=fit.residual)
