"""Tests for ode/wkb.py -- asymptotic data, WKB expansion, Bohr-Sommerfeld."""

import cmath
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from lattice.bethe import ray_phase
from ode.models import OdeError, OdeSpec
from ode.wkb import (
    asymptotic_data,
    bohr_sommerfeld_zeros,
    c_p,
    d_coefficients,
    g_coefficients,
    quantum_number,
    ray_polynomial,
    wkb_log_asymptotic,
)


def _make_spec(**overrides):
    base = dict(p=0.3, n=5.0, r=3, A=1, coeffs={(1, 0): 0.7})
    base.update(overrides)
    return OdeSpec(**base)


def test_c_p_at_zero_twist():
    """C_0 = sqrt(r/(n+r))."""
    assert c_p(0.0, 5.0, 3) == pytest.approx(math.sqrt(3 / 8))


def test_z_r_expansion_has_three_terms():
    """Without coefficients only N0, the twist term and log C_p survive."""
    spec = _make_spec(coeffs={})
    theta = 2.5 + 0.3j
    expected = (spec.N0 * cmath.exp(theta) / math.cos(math.pi * 3 / 10)
                - 2 * 5.0 * 0.3 * theta / (3 * 8) + cmath.log(c_p(0.3, 5.0, 3)))
    assert wkb_log_asymptotic(spec, theta, 1) == pytest.approx(expected)


def test_theta_outside_strip_is_rejected():
    """|Im theta| must stay below pi alpha/(2n)."""
    with pytest.raises(OdeError) as excinfo:
        wkb_log_asymptotic(_make_spec(), 1.0 + 3j, 1)
    assert excinfo.value.kind == "domain"


def test_single_and_half_filling_forms_agree():
    """For r=3 the g-coefficients and the D-coefficients describe the same polynomial."""
    spec = _make_spec()
    g = g_coefficients(3, 5.0, 1, 1)
    D = d_coefficients(spec)
    assert set(g) == {1}
    assert g[1] * 0.7 == pytest.approx((D[1] / spec.N0).real, rel=1e-12)


def test_single_coefficient_correction_matches_d_form():
    """The single-coefficient correction equals D_1/sin(pi eps) e^{i phi} e^{theta/3}."""
    spec = _make_spec()
    theta = 3.0 + 0.2j
    base = wkb_log_asymptotic(_make_spec(coeffs={}), theta, 1)
    D1 = d_coefficients(spec)[1]
    eps = (5.0 - 3) / (2 * 5.0 * 3)
    phase = cmath.exp(1j * (ray_phase(3, 1, 1) + math.pi / 3))
    expected = base - D1 / math.sin(math.pi * eps) * phase * cmath.exp(theta / 3)
    assert wkb_log_asymptotic(spec, theta, 1) == pytest.approx(expected, rel=1e-12)


def test_asymptotic_data_fields():
    """M and L come from the single (mu, j); G holds g_2 c."""
    data = asymptotic_data(_make_spec())
    assert (data.M, data.L) == (1, 1)
    assert set(data.g) == {2}
    assert set(data.G) == {2}
    assert data.C_p == pytest.approx(c_p(0.3, 5.0, 3))
    assert set(data.xi) == {1}
    assert "C_p" in data.to_dict()


def test_z_r_zeros_are_leading_order():
    """For Z_r specs E_m = e^{i phi_a} Lambda_m^{2n/(r alpha)}."""
    spec = _make_spec(coeffs={})
    zeros = bohr_sommerfeld_zeros(spec, 2, [1, 5])
    for m, E in zip([1, 5], zeros):
        lam = quantum_number(spec, m).real
        expected = cmath.exp(1j * ray_phase(3, 1, 2)) * lam ** (10 / 24)
        assert E == pytest.approx(expected)


def test_polynomial_root_is_polished():
    """The returned zero solves the ray polynomial exactly."""
    spec = _make_spec()
    a, m = 1, 4
    E = bohr_sommerfeld_zeros(spec, a, [m])[0]
    G = ray_polynomial(spec, a)
    u = cmath.exp(1j * ray_phase(3, 1, a))
    t = (E / u) ** (8 / 10)
    lhs = t ** 3 + sum(g * t ** (3 - k) for k, g in G.items())
    assert abs(lhs - quantum_number(spec, m)) < 1e-9 * abs(quantum_number(spec, m))


def test_zeros_approach_the_ray():
    """Deviation from the ray phase shrinks with m."""
    spec = _make_spec()
    phi = ray_phase(3, 1, 1)
    far, near = bohr_sommerfeld_zeros(spec, 1, [2, 40])
    assert abs(cmath.phase(near) - phi) < abs(cmath.phase(far) - phi)


def test_exceptional_n_is_rejected():
    """Bohr-Sommerfeld refuses exceptional n."""
    spec = OdeSpec.free_fermion(3, 0.05, {1: 0.4})
    with pytest.raises(OdeError) as excinfo:
        bohr_sommerfeld_zeros(spec, 1, [1])
    assert excinfo.value.kind == "exceptional_n"


def test_zero_l_pairs_have_no_series():
    """A pair with L = 0 carries no asymptotic series."""
    spec = OdeSpec(p=0.3, n=5.0, r=4, A=0, coeffs={(2, 0): 0.5})
    with pytest.raises(OdeError) as excinfo:
        asymptotic_data(spec)
    assert excinfo.value.kind == "domain"
