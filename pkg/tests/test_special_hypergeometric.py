"""Tests for special/hypergeometric.py -- Kummer's 1F1."""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest
from scipy import special as sp

from special.gamma import SpecialFunctionError
from special.hypergeometric import _asymptotic, _taylor, kummer_1f1


def _partial_sums(a, b, z, terms=200):
    """Term-by-term Taylor sum, no early exit."""
    term, total = 1.0, 1.0
    for k in range(terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
    return total


def test_zero_argument():
    """1F1(a; b; 0) = 1."""
    assert kummer_1f1(0.3, 1.7, 0) == 1


def test_exponential_identity():
    """1F1(1; 2; z) = (e^z - 1) / z."""
    z = 1.7
    assert abs(kummer_1f1(1, 2, z) - (math.exp(z) - 1) / z) < 1e-13


def test_series_oracle():
    """Matches a 200-term partial sum at moderate argument."""
    ref = _partial_sums(0.3, 1.1, 2.0)
    assert abs(kummer_1f1(0.3, 1.1, 2.0) / ref - 1) < 1e-13


def test_kummer_transform_negative_axis():
    """Negative arguments go through e^z M(b-a, b, -z)."""
    val = kummer_1f1(0.4, 1.3, -12.0)
    assert abs(val / sp.hyp1f1(0.4, 1.3, -12.0) - 1) < 1e-11


def test_large_argument_asymptotic():
    """The asymptotic branch agrees with scipy for real |z| up to 100."""
    for z in (35.0, 60.0, 100.0):
        val = kummer_1f1(0.25, 1.6, z)
        assert abs(val / sp.hyp1f1(0.25, 1.6, z) - 1) < 1e-11


def test_branches_agree_past_radius():
    """Taylor and asymptotic forms agree just beyond |z| = 30 for complex parameters."""
    a, b = 0.5 + 0.3j, 1.4 - 0.2j
    z = 31.0
    series = _taylor(a, b, z, 500, 1e-15)
    asym = _asymptotic(a, b, z, 500)
    assert abs(asym / series - 1) < 1e-10


def test_nonpositive_b_raises():
    """b a non-positive integer is a domain error."""
    with pytest.raises(SpecialFunctionError) as exc:
        kummer_1f1(0.5, -2, 1.0)
    assert exc.value.kind == "domain"


def test_no_convergence_carries_partial_sum():
    """A tiny term budget reports the partial sum."""
    with pytest.raises(SpecialFunctionError) as exc:
        kummer_1f1(0.5, 1.5, 20.0, max_terms=5)
    assert exc.value.kind == "no_convergence"
    assert "partial_sum" in exc.value.details
