"""
Ground-state Bethe roots of the r-periodic chain.

The equations are solved in logarithmic form

    (N/r) sum_l [log(eta_l + q z_j) - log(eta_l + z_j/q)]
        - sum_i [log(z_i - q^2 z_j) - log(z_i - q^-2 z_j)]
        = i (pi + 2 pi k + 2 gamma Sz) + 2 pi i I_j

by damped Newton in beta = log z. Every logarithm is kept continuous
against the previous accepted point, so the branch integers I_j fixed at
the seed stay valid along a continuation path.

Seeds come from the Z_r point, where the roots reduce to those of an XXZ
chain of N/r sites with real rapidities.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from lattice.inhomogeneities import (
    build_inhomogeneities,
    canonical_order,
    reduced_inhomogeneities,
    reduced_parameters,
    z_r_inhomogeneities,
)
from lattice.models import (
    BetheRootSet,
    BranchState,
    ChainSpec,
    Inhomogeneities,
    RgScheme,
    SolverError,
)

logger = logging.getLogger("sixvertex.lattice.bethe")

BAE_TOL = 1e-12
LOOSE_TOL = 1e-9
MAX_PHASE_JUMP = math.pi / 2
_TWO_PI_I = 2j * math.pi


@dataclass
class BaeSystem:
    """Bethe equations with an arbitrary q and one period of inhomogeneities."""
    N: int
    q: complex
    k: float
    eta: np.ndarray
    Sz: int = 0

    def __post_init__(self):
        self.eta = np.asarray(self.eta, dtype=complex)
        if self.N % len(self.eta) != 0:
            raise ValueError(f"N={self.N} is not a multiple of r={len(self.eta)}")

    @classmethod
    def from_chain(cls, chain: ChainSpec, eta: Union[Inhomogeneities, np.ndarray]) -> "BaeSystem":
        values = eta.eta if isinstance(eta, Inhomogeneities) else eta
        if len(values) != chain.r:
            raise ValueError(f"expected {chain.r} inhomogeneities, got {len(values)}")
        return cls(N=chain.N, q=chain.q, k=chain.k, eta=values, Sz=chain.Sz)

    @property
    def r(self) -> int:
        return len(self.eta)

    @property
    def M(self) -> int:
        return self.N // 2 - self.Sz

    @property
    def constant(self) -> complex:
        gamma = cmath.phase(self.q)
        return 1j * (math.pi + 2 * math.pi * self.k + 2 * gamma * self.Sz)


def _system(chain, eta) -> BaeSystem:
    if isinstance(chain, BaeSystem):
        return chain
    if eta is None:
        raise ValueError("inhomogeneities are required with a ChainSpec")
    return BaeSystem.from_chain(chain, eta)


# ---------------------------------------------------------------------------
# Residual and Jacobian
# ---------------------------------------------------------------------------

def _principal_logs(system: BaeSystem, zeta: np.ndarray):
    q, eta = system.q, system.eta
    plus = np.log(eta[None, :] + q * zeta[:, None])
    minus = np.log(eta[None, :] + zeta[:, None] / q)
    pair_plus = np.log(zeta[:, None] - q * q * zeta[None, :])
    pair_minus = np.log(zeta[:, None] - zeta[None, :] / (q * q))
    return plus, minus, pair_plus, pair_minus


def _unwrap(new: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return new + _TWO_PI_I * np.round((ref.imag - new.imag) / (2 * math.pi))


def _unwrap_all(logs, ref) -> Tuple[tuple, float]:
    out = tuple(_unwrap(n, r) for n, r in zip(logs, ref))
    jump = max(float(np.max(np.abs(o.imag - r.imag))) for o, r in zip(out, ref))
    return out, jump


def _raw_residual(system: BaeSystem, logs) -> np.ndarray:
    plus, minus, pair_plus, pair_minus = logs
    lhs = system.N / system.r * (plus - minus).sum(axis=1)
    pair = (pair_plus - pair_minus).sum(axis=0)
    return lhs - pair - system.constant


def _jacobian(system: BaeSystem, zeta: np.ndarray) -> np.ndarray:
    q, eta = system.q, system.eta
    qz = q * zeta[:, None]
    zq = zeta[:, None] / q
    single = system.N / system.r * (qz / (eta[None, :] + qz) - zq / (eta[None, :] + zq)).sum(axis=1)
    zi = zeta[:, None]
    D = zi / (zi - q * q * zeta[None, :]) - zi / (zi - zeta[None, :] / (q * q))
    return -D.T + np.diag(D.sum(axis=0) + single)


def _check_distinct(zeta: np.ndarray) -> None:
    diff = np.abs(zeta[:, None] - zeta[None, :])
    scale = np.maximum(np.abs(zeta)[:, None], np.abs(zeta)[None, :])
    np.fill_diagonal(diff, np.inf)
    bad = np.argwhere(diff < 1e-10 * scale)
    if len(bad):
        i, j = (int(x) for x in bad[0])
        raise SolverError(
            kind="degeneracy",
            message=f"roots {i} and {j} collide",
            details={"i": i, "j": j, "zeta": complex(zeta[i])},
        )


def solve_bae(system: BaeSystem, seed: np.ndarray, branch: Optional[BranchState] = None,
              tol: float = BAE_TOL, max_iter: int = 80, max_step: float = 0.25):
    """
    Damped Newton for the logarithmic equations.

    Without `branch` the integers I_j are read off the seed, which must then
    solve the equations to well within half a period.

    Returns:
        (roots, branch state, residual inf-norm, flags, residual history)

    Raises:
        SolverError(kind="branch") when the seed's logarithms cannot be
        matched to `branch`, "stagnation" when Newton stalls above 1e-9,
        "degeneracy" on colliding roots or a singular Jacobian.
    """
    zeta = np.array(seed, dtype=complex)
    if len(zeta) != system.M:
        raise ValueError(f"seed has {len(zeta)} roots, expected {system.M}")
    logs = _principal_logs(system, zeta)
    if branch is not None:
        logs, jump = _unwrap_all(logs, (branch.plus, branch.minus, branch.pair_plus, branch.pair_minus))
        if jump > MAX_PHASE_JUMP:
            raise SolverError(
                kind="branch",
                message=f"seed logarithms moved by {jump:.3f} rad from the branch reference",
                details={"jump": jump},
            )
        I = branch.I
    else:
        raw = _raw_residual(system, logs)
        winding = raw.imag / (2 * math.pi)
        I = np.round(winding)
        off = float(np.max(np.abs(winding - I)))
        if off > 0.25 or float(np.max(np.abs(raw.real))) > 0.5:
            raise SolverError(
                kind="branch",
                message=f"seed too far from a solution to fix branch integers (offset {off:.3f})",
                details={"offset": off},
            )

    F = _raw_residual(system, logs) - _TWO_PI_I * I
    res = float(np.max(np.abs(F)))
    history = [res]
    flags: List[str] = []
    for it in range(max_iter):
        if res < tol:
            break
        J = _jacobian(system, zeta)
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            raise SolverError(
                kind="degeneracy",
                message="singular Jacobian",
                details={"residual": res, "iteration": it},
            )
        big = float(np.max(np.abs(delta)))
        if big > max_step:
            delta *= max_step / big
        lam = 1.0
        accepted = False
        while lam > 1e-6:
            trial = zeta * np.exp(lam * delta)
            tlogs, jump = _unwrap_all(_principal_logs(system, trial), logs)
            if jump <= MAX_PHASE_JUMP:
                tF = _raw_residual(system, tlogs) - _TWO_PI_I * I
                tres = float(np.max(np.abs(tF)))
                if tres < (1 - 1e-4 * lam) * res:
                    zeta, logs, F, res = trial, tlogs, tF, tres
                    accepted = True
                    break
            lam *= 0.5
        history.append(res)
        logger.debug("newton it=%d residual=%.3e step=%.3g", it, res, lam)
        if not accepted:
            break

    if res >= tol:
        if res < LOOSE_TOL:
            logger.warning("Bethe solve accepted at loose residual %.2e (N=%d)", res, system.N)
            flags.append("loose")
        else:
            raise SolverError(
                kind="stagnation",
                message=f"Newton stalled at residual {res:.3e}",
                details={"residual": res, "iterations": len(history) - 1},
            )
    _check_distinct(zeta)
    state = BranchState(plus=logs[0], minus=logs[1], pair_plus=logs[2], pair_minus=logs[3], I=I)
    return zeta, state, res, flags, history


def bae_residual(chain, roots: np.ndarray, eta=None) -> float:
    """Inf-norm of the logarithmic equations reduced modulo 2 pi i."""
    system = _system(chain, eta)
    raw = _raw_residual(system, _principal_logs(system, np.asarray(roots, dtype=complex)))
    wrapped = raw - _TWO_PI_I * np.round(raw.imag / (2 * math.pi))
    return float(np.max(np.abs(wrapped)))


def bae_residual_product(chain, roots: np.ndarray, eta=None) -> float:
    """
    max_j |LHS_j / RHS_j - 1| with the products formed factor by factor in
    reverse order, rescaling by powers of two to avoid overflow.
    """
    system = _system(chain, eta)
    z = np.asarray(roots, dtype=complex)
    q = system.q
    val = np.ones(len(z), dtype=complex)
    exp2 = np.zeros(len(z), dtype=int)

    def absorb(factor):
        nonlocal val, exp2
        val = val * factor
        _, e = np.frexp(np.abs(val))
        val = np.ldexp(val.real, -e) + 1j * np.ldexp(val.imag, -e)
        exp2 = exp2 + e

    for i in reversed(range(len(z))):
        absorb((z[i] - z / (q * q)) / (z[i] - q * q * z))
    power = system.N // system.r
    for eta in reversed(system.eta):
        absorb(((eta + q * z) / (eta + z / q)) ** power)
    rhs_const = -np.exp(2j * math.pi * system.k) * q ** (2 * system.Sz)
    absorb(np.full(len(z), 1.0 / rhs_const))
    total = np.ldexp(val.real, exp2) + 1j * np.ldexp(val.imag, exp2)
    return float(np.max(np.abs(total - 1.0)))


# ---------------------------------------------------------------------------
# Ray structure
# ---------------------------------------------------------------------------

def ray_phase(r: int, A: int, a: int) -> float:
    """Phase (pi/r)(2a - 2 - A) of ray a."""
    return math.pi / r * (2 * a - 2 - A)


def classify_rays(roots, chain: ChainSpec, previous: Optional[BetheRootSet] = None) -> BetheRootSet:
    """
    Label each root by its nearest ray and order by modulus within a ray.

    A root within 1e-6 rad of the bisector between two rays is flagged
    `ambiguous_ray:<index>`; it keeps the label from `previous` if given.
    """
    if isinstance(roots, BetheRootSet):
        base = roots
    else:
        base = BetheRootSet(roots=roots)
    zeta = base.roots
    r, A = chain.r, chain.A
    flags = [f for f in base.flags if not f.startswith("ambiguous_ray")]
    if r == 1:
        ray = np.ones(len(zeta), dtype=int)
    else:
        t = (np.angle(zeta) * r / math.pi + A + 2) / 2
        nearest = np.round(t)
        ray = ((nearest.astype(int) - 1) % r) + 1
        margin = (0.5 - np.abs(t - nearest)) * 2 * math.pi / r
        for j in np.flatnonzero(margin < 1e-6):
            flags.append(f"ambiguous_ray:{int(j)}")
            logger.warning("root %d lies on a ray bisector (margin %.2e rad)", j, margin[j])
            if previous is not None and previous.ray is not None and len(previous.ray) == len(zeta):
                ray[j] = previous.ray[j]
    ray_index = np.zeros(len(zeta), dtype=int)
    for a in np.unique(ray):
        idx = np.flatnonzero(ray == a)
        order = idx[np.argsort(np.abs(zeta[idx]))]
        ray_index[order] = np.arange(1, len(order) + 1)
    return BetheRootSet(roots=zeta, ray=ray, ray_index=ray_index, flags=flags,
                        residual=base.residual, branch=base.branch)


# ---------------------------------------------------------------------------
# Seeds
# ---------------------------------------------------------------------------

def xxz_ground_state(N: int, gamma: float, k: float = 0.0, tol: float = 1e-14,
                     max_iter: int = 100) -> np.ndarray:
    """
    Real rapidities of the homogeneous XXZ ground state, zeta = exp(2 lambda).

    Solves N p(l_j) - sum_i Theta(l_j - l_i) = 2 pi (I_j + k) with
    p(l) = 2 atan(tanh l tan(gamma/2)), Theta(u) = 2 arg sinh(u + i gamma) - pi,
    and consecutive I_j symmetric about zero.
    """
    if N % 2 or N <= 0:
        raise ValueError(f"XXZ ground state needs positive even N, got {N}")
    if not 0 < gamma < math.pi:
        raise ValueError(f"gamma must lie in (0, pi), got {gamma}")
    if abs(k) >= 0.5:
        raise ValueError(f"twist must satisfy |k| < 1/2, got {k}")
    M = N // 2
    I = np.arange(M) - (M - 1) / 2
    target = 2 * math.pi * (I + k)
    b = math.pi / (2 * (math.pi - gamma))
    lam = 0.5 * np.arcsinh(np.tan(math.pi * (I + k) / M)) / b
    sg, s2g, c2g = math.sin(gamma), math.sin(2 * gamma), math.cos(2 * gamma)
    tg = math.tan(gamma / 2)

    def residual(x):
        u = x[:, None] - x[None, :]
        theta = 2 * np.arctan2(np.cosh(u) * sg, np.sinh(u) * math.cos(gamma)) - math.pi
        return N * 2 * np.arctan(np.tanh(x) * tg) - theta.sum(axis=1) - target

    F = residual(lam)
    res = float(np.max(np.abs(F)))
    for it in range(max_iter):
        if res < tol * max(1.0, N):
            return lam
        u = lam[:, None] - lam[None, :]
        dtheta = -2 * s2g / (np.cosh(2 * u) - c2g)
        np.fill_diagonal(dtheta, 0.0)
        J = dtheta.copy()
        np.fill_diagonal(J, N * 2 * sg / (np.cosh(2 * lam) + math.cos(gamma)) - dtheta.sum(axis=1))
        delta = np.linalg.solve(J, -F)
        step = 1.0
        while step > 1e-8:
            trial = lam + step * delta
            tF = residual(trial)
            tres = float(np.max(np.abs(tF)))
            if tres < res or tres < tol:
                lam, F, res = trial, tF, tres
                break
            step *= 0.5
        else:
            break
    if res < LOOSE_TOL * max(1.0, N):
        logger.warning("XXZ seed accepted at residual %.2e", res)
        return lam
    raise SolverError(
        kind="stagnation",
        message=f"XXZ ground state did not converge (residual {res:.3e})",
        details={"residual": res, "N": N, "gamma": gamma},
    )


def z_r_seed(chain: ChainSpec) -> BetheRootSet:
    """
    Ground-state roots at the Z_r point.

    (-1)^A zeta^r runs over the XXZ roots for N/r sites and
    q~ = (-1)^A q^r; ray a carries the r-th roots with phase (pi/r)(2a-2-A).
    """
    if chain.Sz != 0:
        raise ValueError(f"Z_r seeds are built for Sz=0, got {chain.Sz}")
    n_red, _, q_red = reduced_parameters(chain, chain.r)
    lam = xxz_ground_state(n_red, cmath.phase(q_red), chain.k)
    modulus = np.exp(2 * lam / chain.r)
    roots, ray, ray_index = [], [], []
    for a in range(1, chain.r + 1):
        roots.append(modulus * np.exp(1j * ray_phase(chain.r, chain.A, a)))
        ray.append(np.full(len(modulus), a))
        ray_index.append(np.arange(1, len(modulus) + 1))
    return BetheRootSet(roots=np.concatenate(roots), ray=np.concatenate(ray),
                        ray_index=np.concatenate(ray_index))


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

def _finish(chain: ChainSpec, zeta, state, res, flags, previous: Optional[BetheRootSet]) -> BetheRootSet:
    out = classify_rays(BetheRootSet(roots=zeta, flags=flags, residual=res, branch=state),
                        chain, previous)
    return out


def solve_ground_state(chain: ChainSpec, eta: Inhomogeneities, seed: BetheRootSet,
                       tol: float = BAE_TOL) -> BetheRootSet:
    """Newton solve from `seed`, reusing its branch state when shapes match."""
    system = BaeSystem.from_chain(chain, eta)
    branch = seed.branch
    if branch is not None and branch.plus.shape != (system.M, system.r):
        branch = None
    zeta, state, res, flags, _ = solve_bae(system, seed.roots, branch, tol=tol)
    return _finish(chain, zeta, state, res, flags, seed)


def continue_in_scheme(chain: ChainSpec, scheme: RgScheme, root_set: BetheRootSet,
                       eta_start: Inhomogeneities, steps: int = 8, tol: float = BAE_TOL,
                       trace: Optional[List[Dict]] = None,
                       max_halvings: int = 6) -> Tuple[BetheRootSet, Inhomogeneities]:
    """
    Follow the ground state while the invariants grow from 0 to their values.

    Step t -> t + dt is retried with dt halved on a branch or stagnation
    failure.

    Raises:
        SolverError(kind="continuation") naming the parameter t reached.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    t, dt, halvings = 0.0, 1.0 / steps, 0
    current, eta_prev = root_set, eta_start
    while t < 1.0 - 1e-12:
        t_new = min(1.0, t + dt)
        built = build_inhomogeneities(chain, scheme.scaled(t_new))
        eta = Inhomogeneities(eta=canonical_order(built.eta, eta_prev.eta))
        try:
            current = solve_ground_state(chain, eta, current, tol=tol)
        except SolverError as exc:
            if exc.kind in ("branch", "stagnation") and halvings < max_halvings:
                dt *= 0.5
                halvings += 1
                logger.info("continuation step to t=%.4f failed (%s); halving", t_new, exc.kind)
                continue
            raise SolverError(
                kind="continuation",
                message=f"continuation in the invariants failed at t={t_new:.4f}",
                details={"t": t_new, "cause": str(exc)},
            )
        t, eta_prev = t_new, eta
        if trace is not None:
            trace.append({"t": t, "residual": current.residual})
        logger.debug("continuation t=%.4f residual=%.2e", t, current.residual)
    return current, eta_prev


def continue_in_n(chain: ChainSpec, scheme: RgScheme, root_set: BetheRootSet,
                  eta_start: Inhomogeneities, n_target: float, steps: int = 8,
                  tol: float = BAE_TOL,
                  trace: Optional[List[Dict]] = None) -> Tuple[BetheRootSet, Inhomogeneities, ChainSpec]:
    """Follow the ground state in n at fixed invariants."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    current, eta_prev, spec = root_set, eta_start, chain
    for i in range(1, steps + 1):
        n_i = chain.n + (n_target - chain.n) * i / steps
        spec = chain.with_(n=n_i)
        built = build_inhomogeneities(spec, scheme)
        eta = Inhomogeneities(eta=canonical_order(built.eta, eta_prev.eta))
        try:
            current = solve_ground_state(spec, eta, current, tol=tol)
        except SolverError as exc:
            raise SolverError(
                kind="continuation",
                message=f"continuation in n failed at n={n_i:.6g}",
                details={"n": n_i, "cause": str(exc)},
            )
        eta_prev = eta
        if trace is not None:
            trace.append({"n": n_i, "residual": current.residual})
    return current, eta_prev, spec


def ground_state(chain: ChainSpec, scheme: Optional[RgScheme] = None, steps: int = 8,
                 tol: float = BAE_TOL,
                 trace: Optional[List[Dict]] = None) -> Tuple[BetheRootSet, Inhomogeneities]:
    """Z_r seed, then continuation in the invariants of `scheme`."""
    seed = z_r_seed(chain)
    eta0 = z_r_inhomogeneities(chain.r)
    start = solve_ground_state(chain, eta0, seed, tol=tol)
    if scheme is None or scheme.is_trivial:
        return start, eta0
    return continue_in_scheme(chain, scheme, start, eta0, steps=steps, tol=tol, trace=trace)


def double_lattice(chain: ChainSpec, scheme: RgScheme, root_set: BetheRootSet,
                   tol: float = BAE_TOL) -> Tuple[BetheRootSet, Inhomogeneities, ChainSpec]:
    """
    Seed the 2N chain by interpolating log zeta along each ray.

    Each ray is parametrised by w = asinh(tan(pi (u - 1/2))), u = (m - 1/2)/M_a,
    in which log zeta is close to linear.
    """
    bigger = chain.with_(N=2 * chain.N)
    seed = []
    for a, zs in root_set.by_ray().items():
        if len(zs) < 2:
            raise ValueError(f"ray {a} has fewer than two roots")
        M_a = len(zs)
        u = (np.arange(1, M_a + 1) - 0.5) / M_a
        u_new = (np.arange(1, 2 * M_a + 1) - 0.5) / (2 * M_a)
        w = np.arcsinh(np.tan(math.pi * (u - 0.5)))
        w_new = np.arcsinh(np.tan(math.pi * (u_new - 0.5)))
        beta = np.log(zs)
        re = PchipInterpolator(w, beta.real, extrapolate=True)(w_new)
        im = PchipInterpolator(w, np.unwrap(beta.imag), extrapolate=True)(w_new)
        seed.append(np.exp(re + 1j * im))
    eta = build_inhomogeneities(bigger, scheme)
    system = BaeSystem.from_chain(bigger, eta)
    zeta, state, res, flags, _ = solve_bae(system, np.concatenate(seed), None, tol=tol)
    return _finish(bigger, zeta, state, res, flags, None), eta, bigger


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

def reduced_system(chain: ChainSpec, eta: Inhomogeneities, sigma: int) -> BaeSystem:
    """Equations of the r/sigma periodic chain equivalent to a sigma-symmetric one."""
    n_red, _, q_red = reduced_parameters(chain, sigma)
    return BaeSystem(N=n_red, q=q_red, k=chain.k,
                     eta=reduced_inhomogeneities(eta, sigma).eta, Sz=0)


def reduce_roots(root_set: BetheRootSet, chain: ChainSpec, sigma: int) -> np.ndarray:
    """zeta~ = (-1)^I (zeta^(a))^sigma for rays a = 1..r/sigma."""
    _, r_red, _ = reduced_parameters(chain, sigma)
    I = chain.A * sigma // chain.r
    rays = root_set.by_ray()
    return np.concatenate([(-1) ** I * rays[a] ** sigma for a in range(1, r_red + 1)])


# ---------------------------------------------------------------------------
# Free fermion point
# ---------------------------------------------------------------------------

def _check_free_fermion(chain: ChainSpec) -> None:
    if chain.r % 2 == 0 or 2 * chain.A != chain.r - 1 or abs(chain.n - chain.r) > 1e-12:
        raise ValueError(f"free fermion point needs odd r, A=(r-1)/2 and n=r, got "
                         f"r={chain.r}, A={chain.A}, n={chain.n}")


def _free_fermion_newton(zeta: np.ndarray, eta: np.ndarray, rhs: np.ndarray, coef: float,
                         tol: float = 1e-14, max_iter: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    """Solve coef * sum_l atan(zeta/eta_l) = rhs root by root."""
    for _ in range(max_iter):
        x = zeta[:, None] / eta[None, :]
        g = coef * np.arctan(x).sum(axis=1) - rhs
        if float(np.max(np.abs(g))) < tol * max(1.0, float(np.max(np.abs(rhs)))):
            break
        dg = coef * (1.0 / (eta[None, :] * (1 + x * x))).sum(axis=1)
        step = g / dg
        big = np.abs(step) > 0.25 * np.abs(zeta)
        step[big] *= 0.25 * np.abs(zeta[big]) / np.abs(step[big])
        zeta = zeta - step
    x = zeta[:, None] / eta[None, :]
    g = coef * np.arctan(x).sum(axis=1) - rhs
    return zeta, np.abs(g)


def free_fermion_ground_state(chain: ChainSpec, scheme: Optional[RgScheme] = None,
                              steps: int = 8) -> Tuple[BetheRootSet, Inhomogeneities]:
    """
    Ground state at q = i, root by root.

    On each ray a and for m = 1..N/(2r) the root solves
    (2N/(pi r)) sum_l atan(zeta/eta_l) = 2m - 1 + 2k. At the Z_r point
    zeta^r = (-1)^A tan(pi r (2m-1+2k)/(2N)); the invariants are switched on
    in `steps` stages from there.

    Raises:
        SolverError(kind="branch") naming the (a, m) of a root that fails.
    """
    _check_free_fermion(chain)
    r, N = chain.r, chain.N
    m = np.arange(1, N // (2 * r) + 1)
    odd = 2 * m - 1 + 2 * chain.k
    modulus = np.tan(math.pi * r * odd / (2 * N)) ** (1.0 / r)
    zeta = np.concatenate([modulus * np.exp(1j * ray_phase(r, chain.A, a)) for a in range(1, r + 1)])
    labels = [(a, int(mm)) for a in range(1, r + 1) for mm in m]
    rhs = np.tile(odd, r).astype(complex)
    coef = 2 * N / (math.pi * r)

    eta = z_r_inhomogeneities(r)
    schedule = [] if scheme is None or scheme.is_trivial else [i / steps for i in range(1, steps + 1)]
    for t in schedule:
        built = build_inhomogeneities(chain, scheme.scaled(t))
        eta = Inhomogeneities(eta=canonical_order(built.eta, eta.eta))
        zeta, err = _free_fermion_newton(zeta, eta.eta, rhs, coef)
    zeta, err = _free_fermion_newton(zeta, eta.eta, rhs, coef)
    bad = np.flatnonzero(~np.isfinite(zeta) | (err > 1e-9 * np.maximum(1.0, np.abs(rhs))))
    if len(bad):
        a, mm = labels[int(bad[0])]
        raise SolverError(
            kind="branch",
            message=f"free fermion root (a={a}, m={mm}) did not converge",
            details={"a": a, "m": mm, "residual": float(err[bad[0]])},
        )
    res = bae_residual(chain, zeta, eta)
    out = BetheRootSet(roots=zeta, ray=np.array([a for a, _ in labels]),
                       ray_index=np.array([mm for _, mm in labels]), residual=res)
    return out, eta


def free_fermion_scaled_roots(r: int, A: int, k: float, a_map: Dict[int, complex],
                              m_max: int) -> Dict[Tuple[int, int], complex]:
    """
    Roots E_m^(a) of (-1)^A E^r / r + sum_j (-1)^j a_{2j+1} E^(2j+1) = 2m - 1 + 2k.

    For each m the r roots are assigned to rays by nearest phase
    (pi/r)(2a - 2 - A).
    """
    if r % 2 == 0 or 2 * A != r - 1:
        raise ValueError(f"free fermion limit needs odd r and A=(r-1)/2, got r={r}, A={A}")
    out = {}
    for m in range(1, m_max + 1):
        coeffs = np.zeros(r + 1, dtype=complex)
        coeffs[0] = (-1) ** A / r
        for j in range(A):
            coeffs[r - (2 * j + 1)] += (-1) ** j * complex(a_map.get(2 * j + 1, 0))
        coeffs[r] = -(2 * m - 1 + 2 * k)
        roots = np.roots(coeffs)
        size = ((2 * m - 1 + 2 * k) * r) ** (1.0 / r)
        targets = np.array([size * cmath.exp(1j * ray_phase(r, A, a)) for a in range(1, r + 1)])
        order = canonical_order(roots, targets)
        for a in range(1, r + 1):
            out[(a, m)] = complex(order[a - 1])
    return out
