"""
sixvertex harness CLI.

Usage:
    python -m harness.cli gen-inhom --r 5 --A 1 --n 4 --N 200 --mu 2 --j 0 --invariants "2: 0.3"
    python -m harness.cli solve --r 3 --A 1 --n 5 --N 120 --k 0.05 --invariants "1: 0.4"
    python -m harness.cli sweep --config study.ini [--lattice-only]
    python -m harness.cli --config study.ini sweep
    python -m harness.cli sumrule --key r3_N120 --s 1
    python -m harness.cli ode-det --r 3 --A 1 --n 5 --k 0.05 --coeffs "1: 0.7" --E 1.5
    python -m harness.cli ode-zeros --r 3 --A 1 --n 5 --k 0.05 --coeffs "1: 0.7" --m-max 4
    python -m harness.cli dict --r 5 --A 1 --n 4 --mu 2 --j 0 --values "2: 0.3"
    python -m harness.cli verify-wronskian --r 3 --A 1 --n 5 --coeffs "1: 0.7"
    python -m harness.cli reproduce h6-routes        (aliases: tab0, Btab, fig4-exponents, appF)
    python -m harness.cli cft-levels --r 3 --k 0.1 --holes "1: 1" --N 120
    python -m harness.cli quasi-shift --r 4 --A 2 --n 3 --a-half 0.1 --N-tilde 1000
    python -m harness.cli appendix-e --r 4 --A 2 --n 3 --a-half 0.1 --N-tilde 1000

Global flags (--config, --out, --tol, --nmax, --threads, --log-level) go
before the command. A [settings] section in the --config file sits between
the environment and the flags. The exit code is 0 only when every
criterion a command checks passes.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from dictionary.a0 import a0_quasi_shift_dictionary
from dictionary.degenerate import degenerate_family
from dictionary.descriptor import DictionaryError, Family, scheme_descriptor
from dictionary.regimes import dictionary_regime
from dictionary.single import a_to_c_single, c_to_a_single
from harness.cft_levels import CftLevelSpec, free_fermion_cft_levels
from harness.config import ConfigError, Settings, StudyConfig, parse_index_map
from harness.quasi_shift_scheme import b_infinity, quasi_shift_scheme
from harness.reproduce import TABLE_ALIASES, TABLES, reproduce_table, write_reproduction
from harness.study import ode_keys, run_scaling_study
from lattice.bethe import ground_state
from lattice.extrapolate import FitError
from lattice.inhomogeneities import build_inhomogeneities
from lattice.models import ChainSpec, SolverError
from lattice.observables import quasi_shift_limits, scaled_sum_rule, sum_rule, sum_rule_reg
from lattice.storage import RootStore
from ode.determinant import quantum_wronskian_residual, shift_covariance_residual, spectral_determinant
from ode.models import OdeError, OdeSpec
from ode.zeros import ZeroStore, find_all_zeros
from special.gamma import SpecialFunctionError

logger = logging.getLogger("sixvertex.harness.cli")

WRONSKIAN_TOL = 1e-7
_FAILURES = (ConfigError, DictionaryError, SolverError, OdeError, FitError, SpecialFunctionError,
             ValueError, KeyError)


def _fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _complex_list(text: str):
    return [complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()]


def _chain(args) -> ChainSpec:
    return ChainSpec(N=args.N, r=args.r, A=args.A, n=args.n, k=args.k, Sz=args.Sz)


def _scheme(args):
    desc = scheme_descriptor(args.r, args.A, args.mu, args.j, family=args.family)
    return desc, desc.rg_scheme(parse_index_map(args.invariants), n=args.n)


def _ode_spec(args) -> OdeSpec:
    coeffs = ode_keys(args.r, args.A, parse_index_map(args.coeffs))
    return OdeSpec(p=0.5 * (args.n + args.r) * args.k, n=args.n, r=args.r, A=args.A, coeffs=coeffs)


def cmd_gen_inhom(args, settings):
    """Print the inhomogeneities realising the invariants at size N."""
    _, scheme = _scheme(args)
    eta = build_inhomogeneities(_chain(args), scheme)
    for ell, value in enumerate(eta.eta, 1):
        print(f"  eta_{ell} = {_fmt(value)}")
    return True


def cmd_solve(args, settings):
    """Solve for the ground state and store the root set."""
    chain = _chain(args)
    _, scheme = _scheme(args)
    roots, eta = ground_state(chain, scheme, steps=args.steps, tol=settings.tol)
    store = RootStore(settings.out_dir / "roots")
    key = args.key or f"r{chain.r}_A{chain.A}_N{chain.N}"
    path = store.save(key, chain, roots, eta, scheme)
    print(f"\n{len(roots)} roots, residual {roots.residual:.2e} -> {path}")
    if roots.flags:
        print(f"  flags: {', '.join(roots.flags)}")
    for s in range(1, args.s_max + 1):
        h_reg = sum_rule_reg(roots, eta, chain, scheme, s)
        print(f"  h_{s} = {_fmt(sum_rule(roots, s))}  scaled h_{s}^reg = {_fmt(scaled_sum_rule(h_reg, chain, s))}")
    return True


def cmd_sweep(args, settings):
    """Run a scaling study from a config file."""
    config = StudyConfig.load(args.config or args.global_config)
    if args.lattice_only:
        config.ode_enabled = False
    out_dir = Path(config.out_dir or settings.out_dir / config.name)
    report = run_scaling_study(config, settings, out_dir=out_dir)
    print(f"\nstudy {config.name}: stage {report.stage}, complete={report.complete}")
    if report.error:
        print(f"  error: {report.error}")
    for c in report.criteria:
        mark = "ok  " if c.passed else "FAIL"
        print(f"  [{mark}] {c.name}: deviation {c.deviation:.2e} (tol {c.tolerance:.1e})")
    print(f"  results in {out_dir}")
    if not config.ode_enabled:
        return report.complete
    return report.passed


def cmd_sumrule(args, settings):
    """Sum rules and quasi-shift limits of a stored root set."""
    store = RootStore(settings.out_dir / "roots")
    chain, roots, eta, scheme = store.load(args.key)
    for s in range(1, args.s + 1):
        h_reg = sum_rule_reg(roots, eta, chain, scheme, s)
        print(f"  s={s}: h={_fmt(sum_rule(roots, s))}  h_reg={_fmt(h_reg)}  "
              f"scaled={_fmt(scaled_sum_rule(h_reg, chain, s))}")
    if eta is not None:
        for mu, b in quasi_shift_limits(roots, eta, chain).items():
            print(f"  b_{mu} = {_fmt(b)}")
    return True


def cmd_ode_det(args, settings):
    """Evaluate D_+ (and D_-) at the given energies."""
    spec = _ode_spec(args)
    for E in _complex_list(args.E):
        plus = spectral_determinant(spec, E, 1)
        minus = spectral_determinant(spec, E, -1)
        print(f"  E={_fmt(E)}: D+={_fmt(plus)}  D-={_fmt(minus)}")
    return True


def cmd_ode_zeros(args, settings):
    """Refine the first zeros on every ray and store them."""
    spec = _ode_spec(args)
    table = find_all_zeros(spec, args.m_max, threads=settings.threads)
    key = args.key or f"r{spec.r}_A{spec.A}_n{spec.n:g}"
    path = ZeroStore(settings.out_dir / "zeros").save(key, spec, table)
    for row in sorted(table.rows, key=lambda r: (r.ray, r.m)):
        print(f"  a={row.ray} m={row.m}: E={_fmt(row.E)}  |D|={row.residual:.1e}")
    print(f"  -> {path}")
    return True


def cmd_dict(args, settings):
    """Map ODE coefficients to RG invariants or back."""
    values = parse_index_map(args.values)
    if args.quasi_shift:
        result = a0_quasi_shift_dictionary(args.r, args.n, values)
    else:
        desc = scheme_descriptor(args.r, args.A, args.mu, args.j, family=args.family,
                                 allow_unverified=args.allow_unverified)
        if desc.family == Family.SINGLE.value:
            if args.direction == "c_to_a":
                result = c_to_a_single(desc, args.n, values.get(desc.mu, 0))
            else:
                result = a_to_c_single(desc, args.n, values.get(desc.mu, 0))
        elif desc.family == Family.DEGENERATE.value:
            if args.direction != "c_to_a":
                raise ValueError("the degenerate family is available in the c_to_a direction only")
            result = degenerate_family(args.r, args.A, desc.mu, args.n, values.get(desc.mu, 0),
                                       allow_unverified=args.allow_unverified)
        else:
            result = dictionary_regime(args.r, args.A, args.n, values, direction=args.direction,
                                       family=args.family)
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    return True


def cmd_verify_wronskian(args, settings):
    """Quantum Wronskian and shift-covariance residuals at a few energies."""
    spec = _ode_spec(args)
    ok = True
    for E in _complex_list(args.E):
        wr = quantum_wronskian_residual(spec, E)
        cov = shift_covariance_residual(spec, E)
        passed = wr < WRONSKIAN_TOL and cov < WRONSKIAN_TOL
        ok = ok and passed
        mark = "ok  " if passed else "FAIL"
        print(f"  [{mark}] E={_fmt(E)}: wronskian {wr:.2e}  shift covariance {cov:.2e}")
    return ok


def cmd_reproduce(args, settings):
    """Reproduce a reference table."""
    result = reproduce_table(args.table, settings)
    path = write_reproduction(result, settings.out_dir)
    for c in result.criteria:
        mark = "ok  " if c.passed else "FAIL"
        print(f"  [{mark}] {c.name}: deviation {c.deviation:.2e}")
    print(f"\n{args.table}: {'passed' if result.passed else 'FAILED'} -> {path}")
    return result.passed


def cmd_cft_levels(args, settings):
    """Free fermion conformal levels of a hole/particle configuration."""
    spec = CftLevelSpec.from_text(args.holes, args.particles, Sz=args.Sz, s=args.s,
                                  Lbar=args.Lbar, N=args.N)
    levels = free_fermion_cft_levels(spec, args.r, args.k)
    print(json.dumps(levels.to_dict(), indent=2, sort_keys=True))
    agree = (abs(levels.I1_from_coefficient - levels.I1_closed) < 1e-10
             and abs(levels.I1_conjecture - levels.I1_closed) < 1e-10 * max(1.0, abs(levels.I1_closed)))
    return agree


def cmd_quasi_shift(args, settings):
    """Solve the quantization condition for s at fixed a_{r/2}."""
    result = quasi_shift_scheme(args.r, args.A, args.n, args.a_half, args.N_tilde, k=args.k)
    data = result.to_dict()
    if args.b_infinity:
        data["b_infinity"] = b_infinity(result.n_tilde, result.alpha)
    print(json.dumps(data, indent=2, sort_keys=True))
    return True


def _chain_args(p, with_N=True):
    p.add_argument('--r', type=int, required=True, help='Period of the inhomogeneities')
    p.add_argument('--A', type=int, required=True, help='Integer part of the anisotropy')
    p.add_argument('--n', type=float, required=True, help='Continuous anisotropy parameter')
    p.add_argument('--k', type=float, default=0.0, help='Twist (default: 0)')
    if with_N:
        p.add_argument('--N', type=int, required=True, help='Lattice size (multiple of 2r)')
        p.add_argument('--Sz', type=int, default=0, help='Spin sector (default: 0)')


def _scheme_args(p):
    p.add_argument('--family', default=None, help='Regime family override')
    p.add_argument('--mu', type=int, default=None, help='Single coefficient power mu')
    p.add_argument('--j', type=int, default=None, help='Single coefficient index j')
    p.add_argument('--invariants', default='', help='RG invariants, e.g. "1: 0.4, 3: 0.1"')


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="sixvertex -- scaling limits of the inhomogeneous six-vertex chain",
        prog="python -m harness.cli",
    )
    parser.add_argument('--out', default=None, help='Output directory (default: $SIXVERTEX_OUT or ./out)')
    parser.add_argument('--tol', type=float, default=None, help='Solver tolerance')
    parser.add_argument('--nmax', type=int, default=None, help='Largest lattice size for reproductions')
    parser.add_argument('--threads', type=int, default=None, help='Worker threads')
    parser.add_argument('--log-level', default='INFO', help='Logging level (default: INFO)')
    parser.add_argument('--config', dest='global_config', default=None,
                        help='Config file: its [settings] section applies to every command; sweep reads the study from it')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    gen = subparsers.add_parser('gen-inhom', help='Compute inhomogeneities for a scheme')
    _chain_args(gen)
    _scheme_args(gen)

    solve = subparsers.add_parser('solve', help='Solve the ground-state Bethe equations')
    _chain_args(solve)
    _scheme_args(solve)
    solve.add_argument('--steps', type=int, default=8, help='Continuation steps (default: 8)')
    solve.add_argument('--s-max', type=int, default=2, help='Sum rules to print (default: 2)')
    solve.add_argument('--key', default=None, help='Storage key for the root set')

    sweep = subparsers.add_parser('sweep', help='Run a scaling study')
    sweep.add_argument('--config', default=None, help='Study config file (default: the global --config)')
    sweep.add_argument('--lattice-only', action='store_true', help='Skip the ODE comparison')

    sumrule = subparsers.add_parser('sumrule', help='Sum rules of a stored root set')
    sumrule.add_argument('--key', required=True, help='Storage key of the root set')
    sumrule.add_argument('--s', type=int, default=2, help='Highest sum rule (default: 2)')

    ode_det = subparsers.add_parser('ode-det', help='Evaluate the spectral determinants')
    _chain_args(ode_det, with_N=False)
    ode_det.add_argument('--coeffs', default='', help='ODE coefficients c_mu, e.g. "1: 0.7"')
    ode_det.add_argument('--E', default='1.0', help='Comma-separated energies')

    ode_zeros = subparsers.add_parser('ode-zeros', help='Find zeros of D_+ on every ray')
    _chain_args(ode_zeros, with_N=False)
    ode_zeros.add_argument('--coeffs', default='', help='ODE coefficients c_mu')
    ode_zeros.add_argument('--m-max', type=int, default=4, help='Zeros per ray (default: 4)')
    ode_zeros.add_argument('--key', default=None, help='Storage key for the zero table')

    dct = subparsers.add_parser('dict', help='RG invariants <-> ODE coefficients')
    dct.add_argument('--r', type=int, required=True)
    dct.add_argument('--A', type=int, default=0)
    dct.add_argument('--n', type=float, required=True)
    dct.add_argument('--mu', type=int, default=None)
    dct.add_argument('--j', type=int, default=None)
    dct.add_argument('--family', default=None)
    dct.add_argument('--direction', default='c_to_a', choices=['c_to_a', 'a_to_c'])
    dct.add_argument('--values', default='', help='Input map, e.g. "1: 0.2, 3: -0.1"')
    dct.add_argument('--quasi-shift', action='store_true', help='A=0: coefficients from b_mu')
    dct.add_argument('--allow-unverified', action='store_true', help='Allow unverified families')

    wr = subparsers.add_parser('verify-wronskian', help='Check the quantum Wronskian relation')
    _chain_args(wr, with_N=False)
    wr.add_argument('--coeffs', default='', help='ODE coefficients c_mu')
    wr.add_argument('--E', default='0.5, 1+1j, -1.5, 2j', help='Comma-separated energies')

    rep = subparsers.add_parser('reproduce', help='Reproduce a reference table')
    rep.add_argument('table', choices=sorted(TABLES) + sorted(TABLE_ALIASES), help='Table name')

    cft = subparsers.add_parser('cft-levels', help='Free fermion conformal levels')
    cft.add_argument('--r', type=int, required=True)
    cft.add_argument('--k', type=float, required=True)
    cft.add_argument('--holes', default='', help='Holes per ray, e.g. "1: 1,2; 3: 1"')
    cft.add_argument('--particles', default='', help='Particles per ray')
    cft.add_argument('--Sz', type=int, default=0)
    cft.add_argument('--s', type=int, default=0)
    cft.add_argument('--Lbar', type=int, default=0)
    cft.add_argument('--N', type=int, default=None)

    qs = subparsers.add_parser('quasi-shift', aliases=['appendix-e'], help='Quasi-shift scheme for even r and A')
    qs.add_argument('--r', type=int, required=True)
    qs.add_argument('--A', type=int, required=True)
    qs.add_argument('--n', type=float, required=True)
    qs.add_argument('--a-half', type=float, required=True, help='Invariant a_{r/2}')
    qs.add_argument('--N-tilde', type=float, required=True, help='Reduced lattice size 2N/r')
    qs.add_argument('--k', type=float, default=0.0)
    qs.add_argument('--b-infinity', action='store_true', help='Also print b_inf at the resulting alpha')

    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.INFO),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if args.command == 'sweep' and not (args.config or args.global_config):
        parser.error('sweep needs --config')
    settings = Settings()
    if args.global_config:
        try:
            settings.apply_file(args.global_config)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    settings.override(tol=args.tol, nmax=args.nmax, threads=args.threads, out_dir=args.out)

    handlers = {
        'gen-inhom': cmd_gen_inhom,
        'solve': cmd_solve,
        'sweep': cmd_sweep,
        'sumrule': cmd_sumrule,
        'ode-det': cmd_ode_det,
        'ode-zeros': cmd_ode_zeros,
        'dict': cmd_dict,
        'verify-wronskian': cmd_verify_wronskian,
        'reproduce': cmd_reproduce,
        'cft-levels': cmd_cft_levels,
        'quasi-shift': cmd_quasi_shift,
        'appendix-e': cmd_quasi_shift,
    }
    handler = handlers.get(args.command)
    if handler is None:
        parser.print_help()
        return 1
    try:
        ok = handler(args, settings)
    except _FAILURES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if ok else 1


if __name__ == '__main__':
    sys.exit(main())
