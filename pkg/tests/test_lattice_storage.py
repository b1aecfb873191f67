"""Tests for lattice/storage.py -- CSV root-set storage."""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest

from lattice.inhomogeneities import build_inhomogeneities
from lattice.models import BetheRootSet, ChainSpec, RgScheme
from lattice.storage import RootStore, read_header


def _make_root_set():
    return BetheRootSet(
        roots=np.array([0.1 + 0.2j, 1 / 3 - 2j, -0.5 + 1e-17j]),
        ray=[1, 2, 2],
        ray_index=[1, 1, 2],
        flags=["loose"],
        residual=3.5e-13,
    )


def test_save_and_load_round_trip():
    """Roots, labels and metadata survive a save/load cycle."""
    chain = ChainSpec(N=24, r=3, A=1, n=5.0, k=0.05)
    scheme = RgScheme.half_filling(3, {1: 0.4})
    eta = build_inhomogeneities(chain, scheme)
    with tempfile.TemporaryDirectory() as tmp:
        store = RootStore(Path(tmp) / "roots")
        store.save("gs", chain, _make_root_set(), eta=eta, scheme=scheme)
        chain2, rs, eta2, scheme2 = store.load("gs")
    original = _make_root_set()
    assert chain2 == chain
    assert np.array_equal(rs.roots, original.roots)
    assert list(rs.ray) == [1, 2, 2]
    assert list(rs.ray_index) == [1, 1, 2]
    assert rs.flags == ["loose"]
    assert rs.residual == pytest.approx(3.5e-13)
    assert np.array_equal(eta2.eta, eta.eta)
    assert scheme2.value(1) == 0.4


def test_store_reloads_existing_directory():
    """A fresh store sees files written by an earlier one."""
    chain = ChainSpec(N=24, r=3, A=1, n=5.0)
    with tempfile.TemporaryDirectory() as tmp:
        RootStore(tmp).save("a", chain, _make_root_set())
        store = RootStore(tmp)
        assert "a" in store
        assert store.keys() == ["a"]
        _, _, eta, scheme = store.load("a")
    assert eta is None
    assert scheme is None


def test_unlabelled_roots_load_without_rays():
    """Root sets saved without ray labels come back unlabelled."""
    chain = ChainSpec(N=24, r=3, A=1, n=5.0)
    with tempfile.TemporaryDirectory() as tmp:
        store = RootStore(tmp)
        store.save("raw", chain, BetheRootSet(roots=[1.0, 2.0j]))
        _, rs, _, _ = store.load("raw")
    assert rs.ray is None
    assert len(rs) == 2


def test_load_missing_key():
    """Loading an unknown key raises KeyError."""
    with tempfile.TemporaryDirectory() as tmp:
        store = RootStore(Path(tmp) / "missing")
        with pytest.raises(KeyError):
            store.load("nothing")


def test_read_header_splits_metadata():
    """Comment lines become metadata; the rest is the CSV body."""
    meta, body = read_header(["# N = 24\n", "index,re_zeta\n", "0,1.0\n"])
    assert meta == {"N": "24"}
    assert len(body) == 2
