"""Tests for ode/xi.py -- admissible (mu, j) sets."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from ode.xi import diophantine_count, xi_count_bounds, xi_degenerate, xi_set


def test_small_sets():
    """Known sets for r=3 and r=5."""
    assert xi_set(3, 1) == {(1, 0)}
    assert xi_set(5, 2) == {(1, 0), (3, 1)}
    assert xi_set(4, 2) == {(1, 0)}


def test_a_zero_takes_every_mu():
    """A=0 admits mu = 1..r-1 with j = 0."""
    assert xi_set(6, 0) == {(mu, 0) for mu in range(1, 6)}


def test_a_top_is_diagonal():
    """A=r-1 admits mu = j+1."""
    assert xi_set(5, 4) == {(1, 0), (2, 1), (3, 2), (4, 3)}


def test_count_within_bounds():
    """Every 1 <= A <= r-2 respects the counting bounds for 3 <= r <= 30."""
    for r in range(3, 31):
        lo, hi = xi_count_bounds(r)
        for A in range(1, r - 1):
            assert lo <= len(xi_set(r, A)) <= hi, (r, A)


def test_matches_diophantine_enumeration():
    """The set size equals the brute-force Diophantine count."""
    for r in range(3, 11):
        for A in range(1, r - 1):
            assert len(xi_set(r, A)) == diophantine_count(r, A), (r, A)


def test_degenerate_pairs_are_excluded():
    """A mu = r j pairs form their own family."""
    assert xi_degenerate(6, 3) == {(2, 1), (4, 2)}
    assert not xi_degenerate(6, 3) & xi_set(6, 3)
    assert xi_degenerate(5, 2) == frozenset()


def test_rejects_bad_arguments():
    """A outside 0..r-1 and tiny r are rejected."""
    with pytest.raises(ValueError):
        xi_set(3, 3)
    with pytest.raises(ValueError):
        xi_count_bounds(2)
