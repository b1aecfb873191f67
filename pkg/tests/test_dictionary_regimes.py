"""Tests for dictionary/regimes.py -- closed-form multi-coefficient dictionaries."""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from dictionary.descriptor import DictionaryError, Family
from dictionary.regimes import (
    coefficient_keys,
    dictionary_regime,
    half_even_coefficient,
    inverse_keys,
    log_modified_zero,
    regime_forward,
)


def _forward(r, A, n, c, family=None):
    return dictionary_regime(r, A, n, c, family=family).outputs


def _round_trip(r, A, n, c, family=None):
    a = _forward(r, A, n, c, family)
    back = dictionary_regime(r, A, n, a, direction="a_to_c", family=family).outputs
    for mu, value in c.items():
        assert back[mu] == pytest.approx(value, abs=1e-8), (r, A, mu)


def test_three_sites_families_agree():
    """r=3, A=1 is covered by three families with the same a_1."""
    n, c = 2.0, {1: 0.4}
    half = _forward(3, 1, n, c)
    a1 = _forward(3, 1, n, c, family="A1")
    rm2 = _forward(3, 1, n, c, family="rm2")
    assert a1[1] == pytest.approx(half[1], rel=1e-10)
    assert rm2[1] == pytest.approx(half[1], rel=1e-10)


def test_a_zero_three_sites():
    """A=0, r=3: a_2 is linear in c_2 with the Gamma-ratio coefficient."""
    n, c2 = 1.5, 0.25
    expected = -(math.gamma(0.5 + 3 / (2 * n)) * math.gamma(1 / (2 * n))
                 / (3 * math.gamma(3 / (2 * n)) * math.gamma(0.5 + 1 / (2 * n)))) * c2
    a = _forward(3, 0, n, {2: c2})
    assert set(a) == {2}
    assert a[2] == pytest.approx(expected, rel=1e-10)
    assert _forward(3, 0, n, {1: 0.7, 2: c2})[2] == pytest.approx(expected, rel=1e-10)


def test_half_even_eight_sites():
    """A = r/2 - 1, r=8: a_1 = Gamma(1/2+x) Gamma(3/8) / (8 Gamma(x) Gamma(7/8)) c_1."""
    n, c1 = 3.0, 0.2
    x = 8 / (2 * n)
    expected = math.gamma(0.5 + x) * math.gamma(0.5 - 1 / 8) / (8 * math.gamma(x) * math.gamma(1 - 1 / 8)) * c1
    a = _forward(8, 3, n, {1: c1})
    assert a[1] == pytest.approx(expected, rel=1e-12)
    assert half_even_coefficient(8, n, 0) == pytest.approx(expected / c1, rel=1e-12)


def test_a1_even_top_invariant_vanishes():
    """For even r the A=1 map gives a_{r-1} = 0."""
    a = _forward(4, 1, 2.0, {1: 0.3}, family="A1")
    assert 3 in a
    assert abs(a[3]) < 1e-10
    assert abs(a[1]) > 1e-3


def test_log_modified_zero_single_coefficient():
    """A=0, r=4 with only c_2: a_2 = -Gamma(1/2+x) / (2 sqrt(pi) Gamma(1+x)) c_2."""
    n, c2 = 2.0, 0.3
    x = 4 / (2 * n)
    expected = -math.gamma(0.5 + x) / (2 * math.sqrt(math.pi) * math.gamma(1 + x)) * c2
    assert log_modified_zero(4, n, {2: c2}) == pytest.approx(expected, rel=1e-12)
    assert _forward(4, 0, n, {2: c2})[2] == pytest.approx(expected, rel=1e-12)


def test_round_trips():
    """Forward then inverse recovers the coefficients in every family."""
    _round_trip(5, 3, 2.0, {1: 0.2, 2: -0.1})
    _round_trip(6, 4, 3.0, {1: 0.1, 2: 0.05})
    _round_trip(5, 0, 2.5, {3: 0.1, 4: 0.05})
    _round_trip(5, 1, 4.0, {1: 0.1, 2: 0.08})
    _round_trip(8, 3, 3.0, {1: 0.2, 3: -0.1})
    _round_trip(8, 4, 3.0, {1: 0.1, 3: 0.05})


def test_inverse_not_in_image():
    """An overdetermined family refuses invariants outside its image."""
    a = _forward(6, 4, 3.0, {1: 0.1, 2: 0.05})
    a[3] = a[3] + 0.5
    with pytest.raises(DictionaryError) as exc:
        dictionary_regime(6, 4, 3.0, a, direction="a_to_c")
    assert exc.value.kind == "inversion"


def test_a1_domain():
    """The A=1 dictionary needs n > r(r-4)/2."""
    with pytest.raises(DictionaryError) as exc:
        _forward(8, 1, 10.0, {1: 0.1})
    assert exc.value.kind == "domain"


def test_key_lists():
    """Coefficient and inverse keys per family."""
    assert coefficient_keys(7, Family.A1) == [1, 2, 3]
    assert coefficient_keys(8, Family.HALF) == [1, 3]
    assert inverse_keys(6, Family.ZERO) == [3, 4, 5]
    assert inverse_keys(7, Family.ZERO) == [4, 5, 6]
    assert coefficient_keys(6, Family.ZERO) == [1, 2, 3, 4, 5]


def test_a_zero_even_r_inverts_log_modified_coefficient():
    """A=0, r=4: c_2 behind the log-modified a_2 comes back from the inverse."""
    _round_trip(4, 0, 3.0, {2: 0.1, 3: 0.05})


def test_forward_rejects_foreign_keys():
    """Coefficients outside the family are refused."""
    with pytest.raises(ValueError):
        _forward(8, 3, 3.0, {2: 0.1})
    with pytest.raises(ValueError):
        dictionary_regime(5, 3, 2.0, {4: 0.1}, direction="a_to_c")


def test_regime_forward_exposes_polynomial():
    """The intermediate G coefficients are returned."""
    a, extra = regime_forward(5, Family.RM2, 2.0, {1: 0.2})
    assert "G" in extra
    assert 1 in extra["G"]
