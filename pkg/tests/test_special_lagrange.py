"""Tests for special/lagrange.py -- Lagrange series and formal powers."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest

from special.lagrange import (
    compositions_product,
    graded_lagrange,
    inverse_power_coefficient,
    lagrange_residual,
    lagrange_root,
    lagrange_series,
    partitions,
    power_series,
    q_expansion,
)


def _tracked_root(G, r, Y):
    """Root of X^r + sum G_m X^(r-m) = Y^r closest to Y."""
    coeffs = np.zeros(r + 1, dtype=complex)
    coeffs[0] = 1
    for m, v in G.items():
        coeffs[m] += v
    coeffs[r] -= Y ** r
    roots = np.roots(coeffs)
    return roots[np.argmin(np.abs(roots - Y))]


def test_partitions_count():
    """p(6) = 11 and every partition sums correctly."""
    parts = list(partitions(6, 6))
    assert len(parts) == 11
    assert all(sum(m * c for m, c in p.items()) == 6 for p in parts)


def test_zero_polynomial():
    """All G = 0 gives all R_k = 0."""
    R = lagrange_series({}, 4, 10)
    assert all(v == 0 for v in R.values())
    assert 4 not in R and 8 not in R


def test_quadratic_binomial():
    """X^2 + g = Y^2 gives R_1 = -g/2."""
    g = 0.37
    R = lagrange_series({2: g}, 2, 5)
    assert abs(R[1] + g / 2) < 1e-15
    assert abs(R[3] + g * g / 8) < 1e-15


def test_residual_at_large_y():
    """Resummed X(Y) solves the polynomial to 1e-9 at Y = 100."""
    for G, r in (({2: 0.3, 4: -0.1}, 5), ({1: 0.2, 2: -0.4}, 3), ({2: 1.1 + 0.3j}, 7)):
        R = lagrange_series(G, r, 40)
        assert lagrange_residual(G, r, R, 100.0) < 1e-9


def test_matches_tracked_root_fit():
    """R_1, R_3 agree with a fit to numerically tracked roots."""
    G, r = {2: 0.3, 4: -0.1}, 5
    R = lagrange_series(G, r, 9)
    Ys = np.array([10.0, 20.0, 40.0])
    shifts = np.array([_tracked_root(G, r, Y) - Y for Y in Ys])
    design = np.stack([Ys ** -1, Ys ** -3, Ys ** -7], axis=1)
    fit, *_ = np.linalg.lstsq(design, shifts, rcond=None)
    assert abs(fit[0] - R[1]) < 1e-7
    assert abs(fit[1] - R[3]) < 1e-4
    assert abs(R[1] + 0.06) < 1e-15


def test_q_expansion_trivial_powers():
    """z = 0 gives zero coefficients; z = 1 reproduces R."""
    R = lagrange_series({2: 0.3, 4: -0.1}, 5, 9)
    q0 = q_expansion(R, 0, 9)
    assert all(abs(v) == 0 for v in q0.values())
    q1 = q_expansion(R, 1, 9)
    for k in range(1, 10):
        assert abs(q1[k] - R.get(k, 0)) < 1e-15


def test_q_expansion_direct_evaluation():
    """Q at z = -3 nu matches the explicit power at Y = 50."""
    r, n = 5, 7.0
    nu = 2 * n / (n + r)
    G = {2: 0.3, 4: -0.1}
    R = lagrange_series(G, r, 21)
    z = -3 * nu
    Q = q_expansion(R, z, 21)
    Y = 50.0
    exact = (lagrange_root(G, r, R, Y) / Y) ** z
    series = 1 + sum(v * Y ** (-(i + 1)) for i, v in Q.items())
    assert abs(exact - series) < 1e-8


def test_q_composition_law():
    """Coefficients at z1 + z2 are the Cauchy product of those at z1 and z2."""
    a = {1: 0.2, 2: -0.3 + 0.1j, 3: 0.05}
    k_max = 8
    g1 = power_series(a, 0.7, k_max)
    g2 = power_series(a, -1.9, k_max)
    g12 = power_series(a, 0.7 - 1.9, k_max)
    for k in range(k_max + 1):
        conv = sum(g1[j] * g2[k - j] for j in range(k + 1))
        assert abs(conv - g12[k]) < 1e-13


def test_compositions_product():
    """Restricted composition sums."""
    x = {0: 1.0, 1: 2.0, 2: 3.0}
    assert compositions_product(x, 2, 2, lo=0, hi=1) == 4
    assert compositions_product(x, 2, 2, lo=0, hi=2) == 10
    assert compositions_product(x, 0, 0) == 1
    assert compositions_product(x, 5, 2, lo=0, hi=2) == 0


def test_bad_degree():
    """r < 2 is rejected."""
    with pytest.raises(ValueError):
        lagrange_series({1: 1.0}, 1, 3)


def test_linear_coefficient_gives_constant_shift():
    """X^2 + G_1 X = Y^2 carries R_0 = -G_1/2 and R_1 = G_1^2/8."""
    R = lagrange_series({1: 0.4}, 2, 3)
    assert abs(R[0] + 0.2) < 1e-15
    assert abs(R[1] - 0.02) < 1e-15


def test_graded_series_matches_plain_series():
    """With step 2 the graded coefficients are R_1, R_3, R_5 of the plain series."""
    G, r = {2: 0.3, 4: -0.1}, 5
    R = lagrange_series(G, r, 9)
    graded = graded_lagrange({1: 0.3, 2: -0.1}, r, 2, 5)
    for k in range(1, 6):
        assert abs(graded[k] - R.get(2 * k - 1, 0)) < 1e-14


def test_graded_series_with_wide_step():
    """X^5 + g X = Y^5 read in w = Y^-4 gives the plain R_3 and R_7."""
    graded = graded_lagrange({1: 0.25}, 5, 4, 2)
    R = lagrange_series({4: 0.25}, 5, 7)
    assert abs(graded[1] - R[3]) < 1e-15
    assert abs(graded[2] - R[7]) < 1e-14


def test_inverse_power_first_terms():
    """[w^1] = -z R_1 and [w^2] = -z R_2 + z(z+1)/2 R_1^2."""
    R = {1: 0.3, 2: -0.2}
    z = 1.7
    assert inverse_power_coefficient(R, z, 1) == pytest.approx(-z * 0.3)
    assert inverse_power_coefficient(R, z, 2) == pytest.approx(-z * -0.2 + z * (z + 1) / 2 * 0.09)
    with pytest.raises(ValueError):
        inverse_power_coefficient(R, z, 0)
