"""Tests for special/bernoulli.py -- Bernoulli polynomials."""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from special.bernoulli import bernoulli_coefficients, bernoulli_number, bernoulli_poly
from special.gamma import SpecialFunctionError


def test_b1_linear():
    """B_1(x) = x - 1/2."""
    assert abs(bernoulli_poly(1, 0.8) - 0.3) < 1e-15


def test_b2_quarter():
    """B_2(1/4) = 1/16 - 1/4 + 1/6."""
    assert abs(bernoulli_poly(2, 0.25) - (0.0625 - 0.25 + 1 / 6)) < 1e-15


def test_b6_at_zero():
    """B_6(0) = 1/42."""
    assert bernoulli_number(6) == Fraction(1, 42)
    assert abs(bernoulli_poly(6, 0.0) - 1 / 42) < 1e-15


def test_exact_coefficients():
    """B_3(x) = x^3 - 3x^2/2 + x/2."""
    assert bernoulli_coefficients(3) == [Fraction(0), Fraction(1, 2), Fraction(-3, 2), Fraction(1)]


def test_symmetry():
    """B_m(1 - x) = (-1)^m B_m(x)."""
    for m in range(1, 12):
        assert abs(bernoulli_poly(m, 0.7) - (-1) ** m * bernoulli_poly(m, 0.3)) < 1e-12


def test_complex_argument():
    """Complex x is accepted."""
    assert abs(bernoulli_poly(2, 1j) - (-1 - 1j + 1 / 6)) < 1e-15


def test_order_budget():
    """Orders above 64 are a domain error."""
    with pytest.raises(SpecialFunctionError) as exc:
        bernoulli_poly(65, 0.1)
    assert exc.value.kind == "domain"
