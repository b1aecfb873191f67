"""Tests for lattice/bethe.py -- Bethe equations, seeds, continuation."""

import cmath
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest

from lattice.bethe import (
    BaeSystem,
    bae_residual,
    bae_residual_product,
    classify_rays,
    continue_in_n,
    double_lattice,
    free_fermion_ground_state,
    free_fermion_scaled_roots,
    ground_state,
    ray_phase,
    reduce_roots,
    reduced_system,
    solve_bae,
    xxz_ground_state,
    z_r_seed,
)
from lattice.inhomogeneities import z_r_inhomogeneities
from lattice.models import BetheRootSet, ChainSpec, RgEntry, RgScheme


def _make_chain(N=120, r=3, A=1, n=5.0, k=0.05):
    return ChainSpec(N=N, r=r, A=A, n=n, k=k)


def _max_nearest_distance(a, b):
    """Largest relative distance from a root in `a` to its nearest root in `b`."""
    d = np.abs(a[:, None] - b[None, :]).min(axis=1)
    return float(np.max(d / np.maximum(1.0, np.abs(a))))


# ---------------------------------------------------------------------------
# Homogeneous seed
# ---------------------------------------------------------------------------

def test_xxz_rapidities_are_real_and_ordered():
    """The XXZ ground state has strictly increasing rapidities."""
    lam = xxz_ground_state(8, math.pi / 3, k=0.05)
    assert lam.shape == (4,)
    assert np.all(np.diff(lam) > 0)


def test_xxz_symmetric_without_twist():
    """At k=0 the rapidities come in +/- pairs."""
    lam = xxz_ground_state(12, math.pi / 4)
    assert np.allclose(lam, -lam[::-1], atol=1e-12)


def test_xxz_rejects_bad_input():
    """Odd N and large twists are rejected."""
    with pytest.raises(ValueError):
        xxz_ground_state(7, math.pi / 3)
    with pytest.raises(ValueError):
        xxz_ground_state(8, math.pi / 3, k=0.5)


def test_homogeneous_chain_solves_bethe_equations():
    """For r=1 the XXZ roots satisfy the multiplicative equations."""
    chain = ChainSpec(N=8, r=1, A=0, n=2.0, k=0.05)
    assert chain.gamma == pytest.approx(math.pi / 3)
    roots, eta = ground_state(chain)
    assert np.all(np.abs(roots.roots.imag) < 1e-12)
    assert np.all(roots.roots.real > 0)
    assert bae_residual_product(chain, roots.roots, eta) < 1e-11


# ---------------------------------------------------------------------------
# Z_r point
# ---------------------------------------------------------------------------

def test_z_r_seed_solves_equations():
    """Rotated XXZ roots solve the Z_r invariant equations."""
    chain = _make_chain(N=24)
    seed = z_r_seed(chain)
    eta = z_r_inhomogeneities(3)
    assert len(seed) == 12
    assert seed.ray_sizes() == {1: 4, 2: 4, 3: 4}
    assert bae_residual(chain, seed.roots, eta) < 1e-10
    assert bae_residual_product(chain, seed.roots, eta) < 1e-10


def test_z_r_seed_rays_share_moduli():
    """At the Z_r point every ray carries the same moduli."""
    rays = z_r_seed(_make_chain(N=48)).by_ray()
    assert np.allclose(np.abs(rays[1]), np.abs(rays[2]))
    assert np.allclose(np.abs(rays[1]), np.abs(rays[3]))
    assert np.allclose(np.angle(rays[2]), ray_phase(3, 1, 2))


def test_z_r_seed_needs_zero_magnetisation():
    """Seeds are only available at Sz=0."""
    with pytest.raises(ValueError):
        z_r_seed(ChainSpec(N=24, r=3, A=1, n=5.0, Sz=1))


def test_ray_phase_convention():
    """Ray a sits at phase (pi/r)(2a - 2 - A)."""
    assert ray_phase(3, 1, 1) == pytest.approx(-math.pi / 3)
    assert ray_phase(3, 1, 3) == pytest.approx(math.pi)
    assert ray_phase(4, 2, 2) == pytest.approx(0.0)


# ---------------------------------------------------------------------------
# Generic schemes
# ---------------------------------------------------------------------------

def test_ground_state_with_invariant():
    """Continuation to a_1 = 0.4 keeps equal ray populations."""
    chain = _make_chain()
    trace = []
    roots, eta = ground_state(chain, RgScheme.half_filling(3, {1: 0.4}), trace=trace)
    assert len(trace) >= 8
    assert trace[-1]["t"] == pytest.approx(1.0)
    assert all(step["residual"] < 1e-9 for step in trace)
    assert roots.ray_sizes() == {1: 20, 2: 20, 3: 20}
    assert bae_residual_product(chain, roots.roots, eta) < 1e-10


def test_ground_state_roots_are_distinct():
    """No two roots of a solved set coincide."""
    roots, _ = ground_state(_make_chain(N=48), RgScheme.half_filling(3, {1: 0.4}))
    z = roots.roots
    diff = np.abs(z[:, None] - z[None, :]) + np.eye(len(z))
    assert float(np.min(diff)) > 1e-8


def test_perturbed_roots_fail_residual():
    """The residual notices a moved root."""
    chain = _make_chain(N=24)
    roots, eta = ground_state(chain)
    moved = roots.roots.copy()
    moved[0] *= 1.01
    assert bae_residual_product(chain, moved, eta) > 1e-4


def test_solve_bae_rejects_wrong_seed_length():
    """The seed must carry M roots."""
    chain = _make_chain(N=24)
    system = BaeSystem.from_chain(chain, z_r_inhomogeneities(3))
    with pytest.raises(ValueError):
        solve_bae(system, np.ones(5))


def test_continue_in_n_tracks_ground_state():
    """Moving n keeps the ground state solved."""
    chain = _make_chain(N=48)
    scheme = RgScheme.half_filling(3, {1: 0.2})
    roots, eta = ground_state(chain, scheme)
    moved, eta2, spec = continue_in_n(chain, scheme, roots, eta, n_target=4.0, steps=4)
    assert spec.n == pytest.approx(4.0)
    assert bae_residual_product(spec, moved.roots, eta2) < 1e-10


def test_double_lattice_matches_direct_solve():
    """Interpolated seeds at 2N reach the same state as the Z_r route."""
    chain = _make_chain(N=48)
    roots, _ = ground_state(chain)
    doubled, eta, bigger = double_lattice(chain, RgScheme(), roots)
    assert bigger.N == 96
    direct, _ = ground_state(bigger)
    assert _max_nearest_distance(doubled.roots, direct.roots) < 1e-9
    assert bae_residual_product(bigger, doubled.roots, eta) < 1e-10


# ---------------------------------------------------------------------------
# Ray classification
# ---------------------------------------------------------------------------

def test_classify_rays_orders_by_modulus():
    """Labels follow the nearest ray; indices follow the modulus."""
    chain = _make_chain(N=24)
    phase = ray_phase(3, 1, 2)
    roots = np.array([2.0, 0.5, 1.0]) * cmath.exp(1j * phase)
    out = classify_rays(roots, chain)
    assert list(out.ray) == [2, 2, 2]
    assert list(out.ray_index) == [3, 1, 2]
    assert not out.flags


def test_classify_rays_flags_bisector():
    """A root on the bisector between two rays is flagged."""
    chain = _make_chain(N=24)
    out = classify_rays(np.array([1.0 + 0j, cmath.exp(1j * math.pi)]), chain)
    assert "ambiguous_ray:0" in out.flags
    assert out.ray[1] == 3


def test_classify_rays_keeps_previous_label():
    """An ambiguous root inherits its label from the previous set."""
    chain = _make_chain(N=24)
    previous = BetheRootSet(roots=[1.0], ray=[1], ray_index=[1])
    out = classify_rays(np.array([1.0 + 0j]), chain, previous)
    assert out.ray[0] == 1


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

def test_full_reduction_gives_homogeneous_chain():
    """sigma = r maps the Z_r ground state onto an r=1 chain."""
    chain = _make_chain(N=24)
    roots, eta = ground_state(chain)
    system = reduced_system(chain, eta, 3)
    assert system.r == 1
    reduced = reduce_roots(roots, chain, 3)
    assert len(reduced) == 4
    assert bae_residual_product(system, reduced) < 1e-10


def test_sigma_reduction_with_even_invariant():
    """A sigma=2 symmetric state solves the r/2 periodic equations."""
    chain = ChainSpec(N=32, r=4, A=2, n=4.0)
    roots, eta = ground_state(chain, RgScheme(entries=[RgEntry(2, 0.5, 0.3)]))
    assert roots.ray_sizes() == {1: 4, 2: 4, 3: 4, 4: 4}
    system = reduced_system(chain, eta, 2)
    reduced = reduce_roots(roots, chain, 2)
    assert system.N == 16
    assert len(reduced) == 8
    assert bae_residual_product(system, reduced) < 1e-10


# ---------------------------------------------------------------------------
# Free fermion point
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a1", [0.0, 0.4])
def test_free_fermion_agrees_with_generic_solver(a1):
    """At q = i the root-by-root solution matches the Newton solver."""
    chain = _make_chain(n=3.0)
    scheme = RgScheme.half_filling(3, {1: a1})
    ff, eta_ff = free_fermion_ground_state(chain, scheme)
    generic, eta = ground_state(chain, scheme)
    assert np.allclose(eta_ff.eta, eta.eta, atol=1e-13)
    assert ff.residual < 1e-10
    assert _max_nearest_distance(ff.roots, generic.roots) < 1e-10


def test_free_fermion_z_r_closed_form():
    """At the Z_r point zeta^r = (-1)^A tan(pi r (2m-1+2k) / (2N))."""
    chain = _make_chain(n=3.0)
    ff, _ = free_fermion_ground_state(chain)
    z = ff.root(2, 1)
    expected = -math.tan(math.pi * 3 * (1 + 0.1) / 240)
    assert abs(z ** 3 - expected) < 1e-13


def test_free_fermion_needs_half_filling_point():
    """Only odd r with A=(r-1)/2 and n=r is free fermionic."""
    with pytest.raises(ValueError):
        free_fermion_ground_state(_make_chain(n=5.0))
    with pytest.raises(ValueError):
        free_fermion_ground_state(ChainSpec(N=120, r=3, A=0, n=3.0))


def test_free_fermion_scaled_roots_at_z_r_point():
    """|E_1| = (r(1+2k))^(1/r) on every ray."""
    out = free_fermion_scaled_roots(3, 1, 0.0, {}, m_max=2)
    for a in (1, 2, 3):
        assert abs(out[(a, 1)]) == pytest.approx(3 ** (1 / 3), rel=1e-13)
        assert cmath.phase(out[(a, 1)] * cmath.exp(-1j * ray_phase(3, 1, a))) == pytest.approx(0.0, abs=1e-12)
    assert abs(out[(1, 2)]) == pytest.approx(9 ** (1 / 3), rel=1e-13)


def test_free_fermion_scaled_roots_solve_polynomial():
    """For r=5 every E solves its defining polynomial."""
    a_map = {1: 0.1 + 0.2j, 3: -0.3}
    k = 0.05
    out = free_fermion_scaled_roots(5, 2, k, a_map, m_max=3)
    assert len(out) == 15
    for (a, m), E in out.items():
        value = E ** 5 / 5 + a_map[1] * E - a_map[3] * E ** 3 - (2 * m - 1 + 2 * k)
        assert abs(value) < 1e-10 * max(1.0, abs(E) ** 5)
