"""Tests for special/fintegrals.py -- the f1, f2, f3 integrals."""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest
from scipy import integrate
from scipy import special as sp

from special.fintegrals import f1, f2, f3
from special.gamma import SpecialFunctionError


def _f2_oracle(h, g):
    """Independent f2 for g < 1/2 built on scipy's complex Gamma."""
    def s1(x):
        a = sp.gamma(1 - 2 * g + 2j * x) * sp.gamma(1 - 2 * g - 2j * x)
        b = (sp.gamma(g + 2j * x) * sp.gamma(g - 2j * x)) ** 2
        return (np.sinh(2 * np.pi * x) * a * b).real

    value, _ = integrate.quad(lambda x: s1(x) * x / (x * x + h * h), 0, 10,
                              points=[h], limit=800, epsabs=1e-14, epsrel=1e-13)
    prefactor = (2 ** (1 - 4 * g) * math.gamma(1 - g) ** 2 / math.gamma(0.5 + g) ** 2
                 * math.gamma(2 * g + 2 * h) / math.gamma(1 - 2 * g + 2 * h))
    return prefactor * value / math.pi


def test_f1_closed_form():
    """f1(0, 1/4) = pi sqrt(2 pi) Gamma(1/4) / Gamma(3/4)."""
    expected = math.pi * math.sqrt(2 * math.pi) * math.gamma(0.25) / math.gamma(0.75)
    assert abs(f1(0.0, 0.25) - expected) < 1e-11 * expected
    assert abs(expected - 23.30) < 0.01


def test_f1_finite_for_sum_rule_arguments():
    """f1(k/2, 1/5 + 1/(n+5)) is finite at n = 5, k = 0.05."""
    assert np.isfinite(f1(0.025, 0.2 + 0.1))


def test_f1_pole_raises():
    """g + 2h at a Gamma pole is a domain error."""
    with pytest.raises(SpecialFunctionError) as exc:
        f1(-0.125, 0.25)
    assert exc.value.kind == "domain"
    with pytest.raises(SpecialFunctionError):
        f1(0.1, 0.5)


def test_f2_matches_oracle():
    """f2(0.2, 0.3) agrees with an independent quadrature."""
    ours = f2(0.2, 0.3)
    ref = _f2_oracle(0.2, 0.3)
    assert abs(ours - ref) < 1e-9 * max(1.0, abs(ref))


def test_f2_real():
    """f2 returns a real float."""
    assert isinstance(f2(0.1, 0.3), float)
    assert isinstance(f2(0.1, 0.7), float)


def test_f2_continuous_across_half():
    """The two branches of f2 meet at g = 1/2."""
    eps = 1e-6
    left = f2(0.1, 0.5 - eps)
    right = f2(0.1, 0.5 + eps)
    assert abs(left - right) < 1e-4 * max(abs(left), abs(right))


def test_f2_branch_boundary_raises():
    """g = 1/2 is rejected."""
    with pytest.raises(SpecialFunctionError) as exc:
        f2(0.1, 0.5)
    assert exc.value.kind == "domain"


def test_f3_continuous_across_half():
    """f3 is continuous through g = 1/2."""
    eps = 1e-5
    left = f3(0.1, 0.5 - eps)
    right = f3(0.1, 0.5 + eps)
    assert abs(left - right) < 1e-4 * max(abs(left), abs(right))


def test_f3_continuous_across_two_thirds():
    """Linear extrapolations of both branches meet at g = 2/3."""
    g0, eps = 2 / 3, 1e-4
    left = 2 * f3(0.1, g0 - eps) - f3(0.1, g0 - 2 * eps)
    right = 2 * f3(0.1, g0 + eps) - f3(0.1, g0 + 2 * eps)
    assert abs(left - right) < 1e-4 * max(abs(left), abs(right))


def test_f3_pinch_is_resolved():
    """Near g = 2/3 the result is stable under panel refinement."""
    coarse = f3(0.1, 2 / 3 + 1e-4, panels=60)
    fine = f3(0.1, 2 / 3 + 1e-4, panels=120, order=24)
    assert abs(coarse - fine) < 1e-6 * abs(fine)


def test_f3_refinement():
    """Doubling the panel count changes f3 by less than 1e-7."""
    coarse = f3(0.15, 0.4, panels=60)
    fine = f3(0.15, 0.4, panels=120)
    assert abs(coarse - fine) < 1e-7


def test_f3_boundaries_raise():
    """g at 1/3, 1/2, 2/3 or h <= 0 are domain errors."""
    for g in (1 / 3, 0.5, 2 / 3):
        with pytest.raises(SpecialFunctionError):
            f3(0.1, g)
    with pytest.raises(SpecialFunctionError):
        f3(0.0, 0.4)
