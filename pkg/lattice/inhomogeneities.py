"""
Inhomogeneities from RG invariants.

For the standard and barred schemes the r numbers eta_l (or their
reciprocals) are the roots of one degree-r polynomial whose power sums are
prescribed; Newton's identities give the coefficients and the companion
matrix gives the roots. The CP/T scheme fixes the phases directly.
"""

import logging
import math
from typing import List, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from lattice.models import ChainSpec, Inhomogeneities, RgScheme, SchemeKind, SolverError

logger = logging.getLogger("sixvertex.lattice.inhomogeneities")


def z_r_inhomogeneities(r: int) -> Inhomogeneities:
    """eta_l = (-1)^r exp(i pi (2l - 1) / r), the Z_r invariant point."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    ell = np.arange(1, r + 1)
    return Inhomogeneities(eta=(-1) ** r * np.exp(1j * np.pi * (2 * ell - 1) / r))


def target_power_sums(chain: ChainSpec, scheme: RgScheme) -> List[complex]:
    """
    Prescribed p_s for s = 1..r.

    p_s is sum eta^-s for the standard kind and sum eta^s for the barred
    kind; p_r carries the normalization r (-1)^(r-1).
    """
    r, x = chain.r, chain.scale
    sums = []
    for s in range(1, r):
        e = scheme.entry(s)
        if e is None or complex(e.value) == 0:
            sums.append(0j)
        elif e.log_modified:
            sums.append(complex(e.value) * r * r / 2 * math.log(x) / x)
        else:
            sums.append(complex(e.value) * s * r * x ** (-e.d))
    sums.append(complex(r * (-1) ** (r - 1)))
    return sums


def elementary_from_power_sums(p: List[complex]) -> List[complex]:
    """Newton's identities: e_1..e_r from p_1..p_r."""
    e = [1.0 + 0j]
    for k in range(1, len(p) + 1):
        acc = 0j
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e.append(acc / k)
    return e[1:]


def _polish(coeffs: np.ndarray, roots: np.ndarray, sweeps: int = 3) -> np.ndarray:
    deriv = np.polyder(coeffs)
    for _ in range(sweeps):
        dp = np.polyval(deriv, roots)
        ok = dp != 0
        roots = roots.copy()
        roots[ok] -= np.polyval(coeffs, roots[ok]) / dp[ok]
    return roots


def canonical_order(eta: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Permute eta so that eta[l] sits closest to reference[l]."""
    cost = np.abs(eta[:, None] - reference[None, :])
    rows, cols = linear_sum_assignment(cost)
    out = np.empty_like(eta)
    out[cols] = eta[rows]
    return out


def _roots_with_power_sums(p: List[complex]) -> np.ndarray:
    e = elementary_from_power_sums(p)
    coeffs = np.array([1.0 + 0j] + [(-1) ** k * e[k - 1] for k in range(1, len(e) + 1)])
    roots = _polish(coeffs, np.roots(coeffs))
    if len(roots) != len(p) or not np.all(np.isfinite(roots)):
        raise SolverError(
            kind="construction",
            message="power-sum polynomial has no finite root set",
            details={"power_sums": p},
        )
    if np.min(np.abs(roots)) < 1e-14 * max(1.0, float(np.max(np.abs(roots)))):
        raise SolverError(
            kind="construction",
            message="power-sum polynomial has a root at zero",
            details={"power_sums": p},
        )
    return roots


def _cpt_phases(chain: ChainSpec, scheme: RgScheme) -> np.ndarray:
    r, A = chain.r, chain.A
    if r % 2 == 0 or 2 * A != r - 1:
        raise SolverError(
            kind="construction",
            message=f"CP/T phases need odd r and A=(r-1)/2, got r={r}, A={A}",
            details={"r": r, "A": A},
        )
    delta = np.zeros(r)
    for ell in range(1, A + 2):
        acc = 0.0
        for j in range(A):
            b = scheme.value(2 * j + 1).real
            if b:
                acc += (math.sin(math.pi / r * (2 * ell - 1) * (2 * j + 1)) * b
                        * chain.scale ** (-(1 - (2 * j + 1) / r)))
        delta[ell - 1] = 2 * acc
        delta[r - ell] = -2 * acc
    return delta


def build_inhomogeneities(chain: ChainSpec, scheme: RgScheme) -> Inhomogeneities:
    """
    The eta set realising `scheme` at the chain's N and n.

    Raises:
        SolverError(kind="construction") if the polynomial degenerates.
    """
    scheme.validate(chain.r)
    base = z_r_inhomogeneities(chain.r).eta
    if scheme.kind == SchemeKind.CPT.value:
        eta = base * np.exp(1j * _cpt_phases(chain, scheme))
        return Inhomogeneities(eta=eta)
    if scheme.is_trivial:
        return Inhomogeneities(eta=base)

    roots = _roots_with_power_sums(target_power_sums(chain, scheme))
    eta = roots if scheme.kind == SchemeKind.BARRED.value else 1.0 / roots
    eta = canonical_order(eta, base)
    logger.debug("built %d inhomogeneities for N=%d (%s scheme)", chain.r, chain.N, scheme.kind)
    return Inhomogeneities(eta=eta)


def reduced_inhomogeneities(eta: Inhomogeneities, sigma: int) -> Inhomogeneities:
    """
    eta~_l = (-1)^(sigma-1) eta_l^sigma, l = 1..r/sigma.

    Requires eta_{l + r/sigma} = exp(2 pi i / sigma) eta_l.
    """
    r = eta.r
    if sigma < 1 or r % sigma != 0:
        raise ValueError(f"sigma must divide r={r}, got {sigma}")
    block = r // sigma
    ordered = _sigma_ordered(eta.eta, sigma)
    return Inhomogeneities(eta=(-1) ** (sigma - 1) * ordered[:block] ** sigma)


def _sigma_ordered(eta: np.ndarray, sigma: int) -> np.ndarray:
    """Arrange eta as consecutive blocks related by exp(2 pi i / sigma)."""
    r = len(eta)
    block = r // sigma
    rot = np.exp(2j * np.pi / sigma)
    first = eta[:block]
    out = [first]
    for b in range(1, sigma):
        expected = first * rot ** b
        matched = eta[np.argmin(np.abs(eta[None, :] - expected[:, None]), axis=1)]
        if np.max(np.abs(matched - expected)) > 1e-10 * max(1.0, float(np.max(np.abs(eta)))):
            raise ValueError(f"inhomogeneities are not {sigma}-periodic up to a phase")
        out.append(matched)
    return np.concatenate(out)


def reduced_parameters(chain: ChainSpec, sigma: int) -> Tuple[int, int, complex]:
    """(N~, r~, q~) with q~ = (-1)^I q^sigma and I = A sigma / r."""
    if sigma < 1 or chain.r % sigma != 0:
        raise ValueError(f"sigma must divide r={chain.r}, got {sigma}")
    if (chain.A * sigma) % chain.r != 0:
        raise ValueError(f"A sigma / r must be an integer, got A={chain.A}, sigma={sigma}, r={chain.r}")
    I = chain.A * sigma // chain.r
    return chain.N // sigma, chain.r // sigma, (-1) ** I * chain.q ** sigma
