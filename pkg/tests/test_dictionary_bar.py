"""Tests for dictionary/bar.py -- barred invariants."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from dictionary.bar import bar_invariants


def test_four_sites():
    """r=4 with a_3 = t: bar_1 = t, bar_2 = a_2 + 2 t^2."""
    t, a2, a1 = 0.3, -0.1, 0.05
    bar = bar_invariants({3: t, 2: a2, 1: a1}, 4)
    assert bar[1] == pytest.approx(t)
    assert bar[2] == pytest.approx(a2 + 2 * t ** 2)
    assert bar[3] == pytest.approx(a1 + 4 * a2 * t + 16 / 3 * t ** 3)


def test_odd_r_sign():
    """For odd r the linear parts change sign."""
    bar = bar_invariants({4: 0.2}, 5)
    assert bar[1] == pytest.approx(-0.2)
    assert bar[2] == pytest.approx(2.5 * 0.04)
    assert bar[3] == pytest.approx(-25 / 3 * 0.008)


def test_three_sites_has_two():
    """r=3 defines only the first two barred invariants."""
    assert set(bar_invariants({2: 0.1, 1: 0.2}, 3)) == {1, 2}


def test_rejects_small_r():
    """r < 2 is rejected."""
    with pytest.raises(ValueError):
        bar_invariants({}, 1)
