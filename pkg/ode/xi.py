"""Admissible (mu, j) index sets of the perturbing potential."""

from math import gcd
from typing import FrozenSet, Tuple

Key = Tuple[int, int]


def _check(r: int, A: int) -> None:
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if not 0 <= A <= r - 1:
        raise ValueError(f"A must be in 0..{r - 1}, got {A}")


def xi_set(r: int, A: int) -> FrozenSet[Key]:
    """
    Pairs (mu, j) with r j / A < mu < r (j + 1) / (A + 1), j >= 0.

    A = 0 gives mu = 1..r-1 with j = 0, and A = r-1 gives mu = j + 1,
    j = 0..r-2. Pairs with A mu = r j never appear here; see xi_degenerate.
    """
    _check(r, A)
    if A == 0:
        return frozenset((mu, 0) for mu in range(1, r))
    if A == r - 1:
        return frozenset((j + 1, j) for j in range(r - 1))
    out = set()
    for j in range(A):
        for mu in range(1, r):
            if mu * A > r * j and mu * (A + 1) < r * (j + 1):
                out.add((mu, j))
    return frozenset(out)


def xi_degenerate(r: int, A: int) -> FrozenSet[Key]:
    """Pairs with A mu = r j and 1 <= mu <= r-1, for 1 <= A <= r-2."""
    _check(r, A)
    if not 1 <= A <= r - 2:
        return frozenset()
    g = gcd(r, A)
    step_mu, step_j = r // g, A // g
    return frozenset((t * step_mu, t * step_j) for t in range(1, (r - 1) // step_mu + 1))


def diophantine_count(r: int, A: int) -> int:
    """Solutions of A mu - r j = L with 1 <= mu < r - L, j >= 0, summed over L >= 1."""
    _check(r, A)
    total = 0
    for L in range(1, r):
        for mu in range(1, r - L):
            rest = A * mu - L
            if rest >= 0 and rest % r == 0:
                total += 1
    return total


def xi_count_bounds(r: int) -> Tuple[int, int]:
    """[(r+1)/4] <= |Xi_{r,A}| <= [(r-1)/2] for 1 <= A <= r-2."""
    if r < 3:
        raise ValueError(f"count bounds need r >= 3, got {r}")
    return (r + 1) // 4, (r - 1) // 2
