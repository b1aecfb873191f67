"""Tests for dictionary/single.py -- single-coefficient invariant maps."""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from dictionary.descriptor import DictionaryError, Family, scheme_descriptor
from dictionary.regimes import regime_forward
from dictionary.single import a_to_c_single, c_to_a_single, g_2k, z_coefficients


def test_second_coefficient_linear_term():
    """r=5, (2,0): a_2 = -(nu/5) g_2 c."""
    n, c = 3.0, 0.2
    x = 5 / (2 * n)
    nu = 2 * n / (n + 5)
    g2 = math.gamma(1.5 + x) * math.gamma(0.9) / (math.gamma(x) * math.gamma(1.4))
    a = c_to_a_single(scheme_descriptor(5, 1, 2, 0), n, c).outputs
    assert set(a) == {1, 2, 4}
    assert a[2] == pytest.approx(-(nu / 5) * g2 * c, rel=1e-12)


def test_powers_of_c():
    """a_s scales like c^{i_s}."""
    desc = scheme_descriptor(5, 1, 2, 0)
    a1 = c_to_a_single(desc, 4.0, 0.1).outputs
    a2 = c_to_a_single(desc, 4.0, 0.2).outputs
    for s, i in desc.aux["i_s"].items():
        assert a2[s] == pytest.approx(a1[s] * 2 ** i, rel=1e-10)


def test_seven_sites_closed_form():
    """r=7, (1,0) at n=20 against the Gamma-function expression."""
    n, c = 20.0, 0.3
    expected = (c * math.gamma(0.5 + 7 / (2 * n)) * math.gamma(1 / 7 - 3 / (2 * n))
                / (7 * math.gamma(7 / (2 * n)) * math.gamma(9 / 14 - 3 / (2 * n))))
    a = c_to_a_single(scheme_descriptor(7, 1, 1, 0), n, c).outputs
    assert a[1] == pytest.approx(expected, rel=1e-10)


def test_matches_a1_regime():
    """r=5, (1,0) agrees with the A=1 regime map carrying only c_1."""
    n, c = 4.0, 0.15
    single = c_to_a_single(scheme_descriptor(5, 1, 1, 0), n, c).outputs
    regime, _ = regime_forward(5, Family.A1, n, {1: c})
    assert single[1] == pytest.approx(regime[1], rel=1e-10)


def test_inverse_round_trip():
    """a_to_c_single undoes the linear invariant."""
    desc = scheme_descriptor(5, 1, 2, 0)
    a = c_to_a_single(desc, 3.0, 0.25).outputs
    c = a_to_c_single(desc, 3.0, a[2]).outputs[2]
    assert c == pytest.approx(0.25, rel=1e-12)


def test_below_n_min_refused():
    """n <= n_min is outside the dictionary."""
    desc = scheme_descriptor(5, 1, 2, 0)
    with pytest.raises(DictionaryError) as exc:
        c_to_a_single(desc, 2.0, 0.1)
    assert exc.value.kind == "domain"


def test_gamma_pole_reported():
    """g_2 with a Gamma pole raises a domain error."""
    with pytest.raises(DictionaryError) as exc:
        g_2k(7, 10.5, 1, 5, 1)
    assert exc.value.kind == "domain"


def test_wrong_family():
    """Regime descriptors are not accepted."""
    with pytest.raises(ValueError):
        z_coefficients(scheme_descriptor(5, 3), 3.0)
