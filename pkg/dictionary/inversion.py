"""Numerical inversion of the forward a(c) maps."""

import logging
from typing import Callable, Dict, Hashable, Mapping, Optional, Sequence

import numpy as np

from dictionary.descriptor import DictionaryError

logger = logging.getLogger("sixvertex.dictionary.inversion")

STEP = 1e-6
TOL = 1e-12
MAX_ITER = 60


def _jacobian(F, x: np.ndarray, fx: np.ndarray) -> np.ndarray:
    jac = np.empty((len(fx), len(x)), dtype=complex)
    for k in range(len(x)):
        h = STEP * max(1.0, abs(x[k]))
        shifted = x.copy()
        shifted[k] += h
        jac[:, k] = (F(shifted) - fx) / h
    return jac


def invert_map(forward: Callable[[Dict], Dict], unknowns: Sequence[Hashable],
               target: Mapping, guess: Optional[Mapping] = None) -> Dict:
    """
    Solve forward(c) = target for c over `unknowns` by Newton iteration with
    a forward-difference Jacobian. More targets than unknowns are handled in
    the least-squares sense; the solution must still reproduce the targets.

    Raises:
        DictionaryError(kind="inversion") for a rank-deficient Jacobian, for
        targets outside the image of the map, or on non-convergence.
    """
    keys = list(target)
    goal = np.array([complex(target[s]) for s in keys])
    x = np.array([complex((guess or {}).get(u, 0)) for u in unknowns])

    def F(v: np.ndarray) -> np.ndarray:
        out = forward(dict(zip(unknowns, v)))
        return np.array([complex(out.get(s, 0)) for s in keys])

    scale = max(1.0, float(np.linalg.norm(goal)))
    last = np.inf
    for it in range(MAX_ITER):
        fx = F(x)
        resid = fx - goal
        norm = float(np.linalg.norm(resid))
        if norm <= TOL * scale:
            logger.debug("inversion converged in %d steps, residual %.3g", it, norm)
            return dict(zip(unknowns, x))
        jac = _jacobian(F, x, fx)
        if not np.all(np.isfinite(jac)) or np.linalg.matrix_rank(jac, tol=1e-12 * max(1.0, np.abs(jac).max())) < len(x):
            raise DictionaryError("inversion", "singular Jacobian", {"iteration": it, "residual": norm})
        dx, *_ = np.linalg.lstsq(jac, -resid, rcond=None)
        if it > 5 and norm > 0.5 * last and np.linalg.norm(dx) < 1e-14 * max(1.0, float(np.linalg.norm(x))):
            raise DictionaryError("inversion", "target values are not in the image of the forward map",
                                  {"residual": norm})
        last = norm
        x = x + dx
    raise DictionaryError("inversion", f"no convergence in {MAX_ITER} steps",
                          {"residual": float(np.linalg.norm(F(x) - goal))})
