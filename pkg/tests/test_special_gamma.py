"""Tests for special/gamma.py -- complex log-Gamma."""

import cmath
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest
from scipy import special as sp

from special.gamma import SpecialFunctionError, gamma, gamma_ratio, log_gamma, poch, rgamma


def test_log_gamma_one():
    """log Gamma(1) = 0."""
    assert abs(log_gamma(1.0)) < 1e-15


def test_log_gamma_half():
    """log Gamma(1/2) = log sqrt(pi)."""
    assert abs(log_gamma(0.5) - 0.5723649429247001) < 1e-13


def test_reflection_identity():
    """Gamma(z) Gamma(1-z) = pi / sin(pi z)."""
    z = 0.3 + 0.2j
    lhs = gamma(z) * gamma(1 - z)
    rhs = math.pi / cmath.sin(math.pi * z)
    assert abs(lhs / rhs - 1) < 1e-12


def test_random_grid_reflection_and_duplication():
    """Reflection and duplication hold on a random grid with |z| <= 20."""
    rng = np.random.default_rng(7)
    zs = rng.uniform(-14, 14, 40) + 1j * rng.uniform(-14, 14, 40)
    for z in zs:
        refl = gamma(z) * gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
        assert abs(refl - 1) < 1e-12
        dup = log_gamma(z) + log_gamma(z + 0.5) - log_gamma(2 * z)
        expected = 0.5 * math.log(4 * math.pi) - 2 * z * math.log(2)
        assert abs(cmath.exp(dup - expected) - 1) < 1e-12


def test_matches_scipy_loggamma():
    """Right half-plane values agree with scipy's loggamma."""
    zs = np.array([0.7, 3.2 + 1.1j, 12.5 - 4j, 40 + 30j])
    ours = log_gamma(zs)
    ref = sp.loggamma(zs)
    assert np.all(np.abs(ours - ref) <= 1e-13 * np.maximum(1, np.abs(ref)))


def test_vectorised_shape():
    """Array input keeps its shape."""
    out = log_gamma(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert out.shape == (2, 2)
    assert abs(out[1, 1] - math.log(6)) < 1e-13


def test_pole_raises_domain():
    """Non-positive integers raise a domain error naming z."""
    with pytest.raises(SpecialFunctionError) as exc:
        log_gamma(-3)
    assert exc.value.kind == "domain"
    assert exc.value.details["z"] == -3


def test_rgamma_zero_at_poles():
    """1/Gamma vanishes at the poles instead of raising."""
    assert rgamma(0) == 0
    assert rgamma(-2.0) == 0
    assert abs(rgamma(3.0) - 0.5) < 1e-14


def test_poch_and_ratio():
    """Pochhammer by product and Gamma ratios in log space."""
    assert abs(poch(0.5, 3) - 0.5 * 1.5 * 2.5) < 1e-14
    assert abs(gamma_ratio([5.0], [3.0]) - 12.0) < 1e-12
    assert gamma_ratio([1.5], [-1.0]) == 0j
    with pytest.raises(ValueError):
        poch(1.0, -1)
