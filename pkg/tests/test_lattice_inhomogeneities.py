"""Tests for lattice/inhomogeneities.py -- eta sets from RG invariants."""

import cmath
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest

from lattice.inhomogeneities import (
    build_inhomogeneities,
    canonical_order,
    elementary_from_power_sums,
    reduced_inhomogeneities,
    reduced_parameters,
    target_power_sums,
    z_r_inhomogeneities,
)
from lattice.models import ChainSpec, RgEntry, RgScheme, SchemeKind, SolverError


def test_z_r_point_values():
    """r=3 gives -exp(i pi/3), 1, -exp(5 i pi/3)."""
    eta = z_r_inhomogeneities(3).eta
    assert abs(eta[0] + cmath.exp(1j * math.pi / 3)) < 1e-15
    assert abs(eta[1] - 1) < 1e-15
    assert abs(eta[2] + cmath.exp(5j * math.pi / 3)) < 1e-15


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 7])
def test_z_r_product_is_one(r):
    """The Z_r inhomogeneities multiply to one."""
    assert abs(z_r_inhomogeneities(r).product() - 1) < 1e-13


def test_elementary_from_power_sums():
    """Newton's identities for roots 1, 2, 3."""
    roots = np.array([1.0, 2.0, 3.0])
    p = [complex(np.sum(roots ** s)) for s in (1, 2, 3)]
    e = elementary_from_power_sums(p)
    assert e == pytest.approx([6, 11, 6])


def test_trivial_scheme_gives_z_r_point():
    """Vanishing invariants reproduce the Z_r inhomogeneities."""
    chain = ChainSpec(N=120, r=3, A=1, n=5.0)
    eta = build_inhomogeneities(chain, RgScheme.half_filling(3, {1: 0.0}))
    assert np.allclose(eta.eta, z_r_inhomogeneities(3).eta, atol=1e-15)


def test_standard_power_sums_match_targets():
    """Sum of eta^-s reproduces the prescribed power sums."""
    chain = ChainSpec(N=120, r=3, A=1, n=5.0)
    scheme = RgScheme.half_filling(3, {1: 0.4})
    eta = build_inhomogeneities(chain, scheme)
    targets = target_power_sums(chain, scheme)
    assert abs(targets[0] - 3 * 0.4 * chain.scale ** (-2 / 3)) < 1e-14
    for s in (1, 2, 3):
        assert abs(eta.power_sum(-s) - targets[s - 1]) < 1e-12
    assert abs(eta.power_sum(-3) - 3) < 1e-12


def test_barred_power_sums_use_positive_powers():
    """The barred kind prescribes sum eta^s."""
    chain = ChainSpec(N=60, r=5, A=2, n=4.0)
    scheme = RgScheme(kind=SchemeKind.BARRED.value,
                      entries=[RgEntry(1, 0.8, 0.2 + 0.1j), RgEntry(2, 0.6, -0.3)])
    eta = build_inhomogeneities(chain, scheme)
    targets = target_power_sums(chain, scheme)
    for s in range(1, 6):
        assert abs(eta.power_sum(s) - targets[s - 1]) < 1e-11


def test_log_modified_power_sum():
    """For s = r/2 the power sum carries log(scale)/scale."""
    chain = ChainSpec(N=64, r=4, A=1, n=3.0)
    scheme = RgScheme(entries=[RgEntry(2, 1.0, 0.3, log_modified=True)])
    eta = build_inhomogeneities(chain, scheme)
    x = chain.scale
    assert abs(eta.power_sum(-2) - 0.3 * 8 * math.log(x) / x) < 1e-12


def test_build_keeps_canonical_order():
    """Small invariants leave each eta next to its Z_r partner."""
    chain = ChainSpec(N=600, r=3, A=1, n=5.0)
    eta = build_inhomogeneities(chain, RgScheme.half_filling(3, {1: 0.05}))
    base = z_r_inhomogeneities(3).eta
    assert np.all(np.argmin(np.abs(eta.eta[:, None] - base[None, :]), axis=1) == [0, 1, 2])


def test_canonical_order_permutes():
    """canonical_order undoes a permutation."""
    ref = np.array([1.0, 1j, -1.0])
    shuffled = np.array([-1.01, 1.02, 0.99j])
    assert np.allclose(canonical_order(shuffled, ref), [1.02, 0.99j, -1.01])


def test_cpt_inhomogeneities_pair_up():
    """CP/T phases give |eta| = 1 and eta_l eta_{r+1-l} = 1."""
    chain = ChainSpec(N=120, r=3, A=1, n=5.0)
    scheme = RgScheme(kind=SchemeKind.CPT.value, entries=[RgEntry(1, 0.0, 0.4)])
    eta = build_inhomogeneities(chain, scheme).eta
    assert np.allclose(np.abs(eta), 1.0, atol=1e-14)
    assert abs(eta[0] * eta[2] - 1) < 1e-14
    assert abs(eta[1] - 1) < 1e-14


def test_cpt_needs_half_filling_anisotropy():
    """CP/T phases are only defined for A = (r-1)/2."""
    chain = ChainSpec(N=120, r=3, A=0, n=5.0)
    scheme = RgScheme(kind=SchemeKind.CPT.value, entries=[RgEntry(1, 0.0, 0.4)])
    with pytest.raises(SolverError) as exc:
        build_inhomogeneities(chain, scheme)
    assert exc.value.kind == "construction"


def test_zero_root_is_a_construction_error():
    """Invariants that force an eta to infinity are rejected."""
    chain = ChainSpec(N=8, r=2, A=0, n=3.0)
    scheme = RgScheme(entries=[RgEntry(1, 0.0, 1j / math.sqrt(2))])
    with pytest.raises(SolverError) as exc:
        build_inhomogeneities(chain, scheme)
    assert exc.value.kind == "construction"


def test_reduced_inhomogeneities_of_z_r_point():
    """Reducing the Z_4 point by sigma=2 gives the Z_2 point."""
    reduced = reduced_inhomogeneities(z_r_inhomogeneities(4), 2).eta
    expected = z_r_inhomogeneities(2).eta
    assert np.max(np.min(np.abs(reduced[:, None] - expected[None, :]), axis=1)) < 1e-14


def test_reduced_inhomogeneities_even_scheme():
    """Only even invariants keep the sigma=2 symmetry."""
    chain = ChainSpec(N=32, r=4, A=2, n=4.0)
    eta = build_inhomogeneities(chain, RgScheme(entries=[RgEntry(2, 0.5, 0.3)]))
    reduced = reduced_inhomogeneities(eta, 2)
    assert reduced.r == 2
    assert np.allclose(reduced.eta, -eta.eta[:2] ** 2, atol=1e-12)


def test_reduced_inhomogeneities_requires_symmetry():
    """An odd invariant breaks the sigma=2 symmetry."""
    chain = ChainSpec(N=32, r=4, A=2, n=4.0)
    eta = build_inhomogeneities(chain, RgScheme(entries=[RgEntry(1, 0.75, 0.3)]))
    with pytest.raises(ValueError):
        reduced_inhomogeneities(eta, 2)


def test_reduced_parameters():
    """N and r shrink by sigma and q~ = (-1)^I q^sigma."""
    chain = ChainSpec(N=32, r=4, A=2, n=4.0)
    N_red, r_red, q_red = reduced_parameters(chain, 2)
    assert (N_red, r_red) == (16, 2)
    assert abs(q_red + chain.q ** 2) < 1e-15
    with pytest.raises(ValueError):
        reduced_parameters(ChainSpec(N=32, r=4, A=1, n=4.0), 2)
