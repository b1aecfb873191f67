"""Tests for lattice/models.py -- chain parameters, schemes and root sets."""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest

from lattice.models import (
    BetheRootSet,
    ChainSpec,
    Inhomogeneities,
    RgEntry,
    RgScheme,
    SchemeKind,
    SolverError,
    SumRuleSeries,
)


def _make_chain(N=120, r=3, A=1, n=5.0, k=0.05):
    return ChainSpec(N=N, r=r, A=A, n=n, k=k)


def test_derived_parameters():
    """gamma, q and the scaling exponents follow from (r, A, n)."""
    chain = _make_chain(n=3.0)
    assert chain.gamma == pytest.approx(math.pi / 2)
    assert abs(chain.q - 1j) < 1e-15
    assert chain.root_exponent == pytest.approx(1 / 3)
    assert chain.nu == pytest.approx(1.0)
    assert chain.M == 60


def test_n0_at_free_fermion_point():
    """N_0 = pi / (2r) when n = r."""
    chain = _make_chain(n=3.0)
    assert chain.N0 == pytest.approx(math.pi / 6, rel=1e-13)
    assert chain.scale == pytest.approx(2 * 120 / math.pi, rel=1e-13)


def test_chain_rejects_bad_sizes():
    """N must be a multiple of 2r and A must lie in 0..r-1."""
    with pytest.raises(ValueError):
        ChainSpec(N=100, r=3, A=1, n=5.0)
    with pytest.raises(ValueError):
        ChainSpec(N=120, r=3, A=3, n=5.0)
    with pytest.raises(ValueError):
        ChainSpec(N=120, r=3, A=1, n=0.0)


def test_with_returns_modified_copy():
    """with_ changes one field and leaves the original alone."""
    chain = _make_chain()
    bigger = chain.with_(N=240)
    assert bigger.N == 240
    assert chain.N == 120
    assert bigger.n == chain.n


def test_chain_from_dict_ignores_unknown_keys():
    """from_dict drops keys that are not dataclass fields."""
    data = _make_chain().to_dict()
    data["comment"] = "ignored"
    assert ChainSpec.from_dict(data) == _make_chain()


def test_scheme_rejects_duplicate_index():
    """Each invariant index may appear only once."""
    with pytest.raises(ValueError):
        RgScheme(entries=[RgEntry(1, 2 / 3, 0.4), RgEntry(1, 2 / 3, 0.1)])


def test_scheme_validate_against_period():
    """Indices outside 1..r-1 and misplaced log-modified entries are rejected."""
    RgScheme(entries=[RgEntry(2, 0.5, 0.3, log_modified=True)]).validate(4)
    with pytest.raises(ValueError):
        RgScheme(entries=[RgEntry(3, 0.0, 0.3)]).validate(3)
    with pytest.raises(ValueError):
        RgScheme(entries=[RgEntry(1, 0.5, 0.3, log_modified=True)]).validate(4)


def test_cpt_scheme_takes_real_odd_entries():
    """CP/T invariants must be real and carry odd indices."""
    with pytest.raises(ValueError):
        RgScheme(kind=SchemeKind.CPT.value, entries=[RgEntry(1, 0.0, 0.4j)]).validate(3)
    with pytest.raises(ValueError):
        RgScheme(kind=SchemeKind.CPT.value, entries=[RgEntry(2, 0.0, 0.4)]).validate(5)


def test_half_filling_scheme_exponents():
    """half_filling sets d = 1 - s/r for odd s."""
    scheme = RgScheme.half_filling(5, {1: 0.1, 3: 0.2j})
    assert scheme.entry(1).d == pytest.approx(0.8)
    assert scheme.entry(3).d == pytest.approx(0.4)
    assert scheme.value(2) == 0
    with pytest.raises(ValueError):
        RgScheme.half_filling(5, {2: 0.1})


def test_scheme_scaled_and_trivial():
    """scaled(0) gives a trivial scheme with the same exponents."""
    scheme = RgScheme.half_filling(3, {1: 0.4})
    assert not scheme.is_trivial
    zero = scheme.scaled(0.0)
    assert zero.is_trivial
    assert zero.entry(1).d == scheme.entry(1).d


def test_scheme_dict_keeps_complex_values():
    """Complex invariants survive to_dict/from_dict."""
    scheme = RgScheme(entries=[RgEntry(1, 0.8, 0.1 + 0.2j), RgEntry(2, 0.5, -0.3, True)])
    back = RgScheme.from_dict(scheme.to_dict())
    assert back.value(1) == 0.1 + 0.2j
    assert back.entry(2).log_modified


def test_inhomogeneities_reject_zero():
    """A vanishing inhomogeneity is invalid."""
    with pytest.raises(ValueError):
        Inhomogeneities(eta=[1.0, 0.0])


def test_inhomogeneities_power_sum():
    """power_sum accepts negative exponents."""
    eta = Inhomogeneities(eta=[2.0, 0.5j])
    assert eta.power_sum(-1) == pytest.approx(0.5 - 2j)
    assert eta.product() == pytest.approx(1j)


def test_root_set_by_ray_orders_by_index():
    """by_ray groups roots and sorts them by ray_index."""
    rs = BetheRootSet(roots=[3.0, 1.0, -1.0, 2.0], ray=[1, 1, 2, 1], ray_index=[3, 1, 1, 2])
    rays = rs.by_ray()
    assert list(rays[1]) == [1.0, 2.0, 3.0]
    assert rs.ray_sizes() == {1: 3, 2: 1}
    assert rs.root(1, 2) == 2.0


def test_root_set_by_ray_needs_labels():
    """Unlabelled root sets cannot be split into rays."""
    with pytest.raises(ValueError):
        BetheRootSet(roots=[1.0, 2.0]).by_ray()


def test_sum_rule_series_requires_increasing_sizes():
    """Ns must be strictly increasing."""
    with pytest.raises(ValueError):
        SumRuleSeries(s=1, Ns=[120, 60], h=[0, 0], h_reg=[0, 0])


def test_solver_error_str():
    """The error message starts with its kind."""
    err = SolverError(kind="branch", message="phase jump")
    assert str(err) == "branch: phase jump"
