"""
Scaling studies: solve the chain along an N sweep, extrapolate the scaled
roots and sum rules, and compare them with the ODE zeros and J_s.

A study runs in stages (dictionary, lattice, extrapolate, ode, compare).
A failure stops the run and the report keeps everything computed so far,
tagged with the stage that failed.
"""

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from dictionary.degenerate import degenerate_family, degenerate_spec
from dictionary.descriptor import DictionaryError, Family, SchemeDescriptor
from dictionary.regimes import dictionary_regime
from dictionary.single import a_to_c_single, c_to_a_single
from harness.config import ConfigError, Settings, StudyConfig
from lattice.bethe import ground_state
from lattice.extrapolate import FitError, extrapolate
from lattice.models import ChainSpec, SolverError
from lattice.observables import scaled_roots, scaled_sum_rule, sum_rule_reg
from lattice.storage import RootStore
from ode.models import OdeError, OdeSpec
from ode.sumrules import j_coefficients
from ode.xi import xi_set
from ode.zeros import find_all_zeros
from special.gamma import SpecialFunctionError

logger = logging.getLogger("sixvertex.harness.study")

STAGES = ("dictionary", "lattice", "extrapolate", "ode", "compare")
_FAILURES = (SolverError, FitError, OdeError, DictionaryError, SpecialFunctionError, ConfigError)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {"name": self.name, "passed": self.passed, "deviation": self.deviation,
                "tolerance": self.tolerance, "details": self.details}


@dataclass
class SweepPoint:
    """Solved chain at one N: scaled roots and scaled regularised sum rules."""
    N: int
    residual: float
    zeros: Dict[Tuple[int, int], complex]
    sum_rules: Dict[int, complex]
    flags: List[str] = field(default_factory=list)


@dataclass
class ScalingReport:
    config: Dict[str, Any]
    stage: str = STAGES[0]
    complete: bool = False
    error: Optional[str] = None
    invariants: Dict[int, complex] = field(default_factory=dict)
    coefficients: Dict[int, complex] = field(default_factory=dict)
    points: List[SweepPoint] = field(default_factory=list)
    zero_limits: Dict[Tuple[int, int], complex] = field(default_factory=dict)
    sum_rule_limits: Dict[int, complex] = field(default_factory=dict)
    ode_zeros: Dict[Tuple[int, int], complex] = field(default_factory=dict)
    ode_j: Dict[int, complex] = field(default_factory=dict)
    criteria: List[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.complete and bool(self.criteria) and all(c.passed for c in self.criteria)

    def to_dict(self) -> Dict:
        def pack(z):
            return [complex(z).real, complex(z).imag]

        return {
            "config": self.config,
            "stage": self.stage,
            "complete": self.complete,
            "passed": self.passed,
            "error": self.error,
            "invariants": {str(s): pack(v) for s, v in sorted(self.invariants.items())},
            "coefficients": {str(s): pack(v) for s, v in sorted(self.coefficients.items())},
            "residuals": {str(p.N): p.residual for p in self.points},
            "zero_limits": {f"{a},{m}": pack(v) for (a, m), v in sorted(self.zero_limits.items())},
            "sum_rule_limits": {str(s): pack(v) for s, v in sorted(self.sum_rule_limits.items())},
            "ode_zeros": {f"{a},{m}": pack(v) for (a, m), v in sorted(self.ode_zeros.items())},
            "ode_j": {str(s): pack(v) for s, v in sorted(self.ode_j.items())},
            "criteria": [c.to_dict() for c in self.criteria],
        }


# -- dictionary -----------------------------------------------------------------

def _single_gain(desc: SchemeDescriptor, config: StudyConfig) -> complex:
    """a_mu per unit c for the degenerate family (linear in c at s = mu)."""
    unit = degenerate_family(config.r, config.A, desc.mu, config.n, 1.0).outputs
    if desc.mu not in unit or unit[desc.mu] == 0:
        raise DictionaryError("inversion", f"a_{desc.mu} does not depend on c", {"mu": desc.mu})
    return complex(unit[desc.mu])


def resolve_scheme(config: StudyConfig, desc: SchemeDescriptor) -> Tuple[Dict[int, complex], Dict[int, complex]]:
    """Complete (invariants, coefficients) from whichever side the config gives."""
    r, A, n = config.r, config.A, config.n
    family = Family(desc.family)
    if family == Family.SINGLE:
        if config.coefficients:
            c = complex(config.coefficients.get(desc.mu, 0))
        else:
            c = a_to_c_single(desc, n, config.invariants.get(desc.mu, 0)).outputs[desc.mu]
        return dict(c_to_a_single(desc, n, c).outputs), {desc.mu: c}
    if family == Family.DEGENERATE:
        if config.coefficients:
            c = complex(config.coefficients.get(desc.mu, 0))
        else:
            c = complex(config.invariants.get(desc.mu, 0)) / _single_gain(desc, config)
        return dict(degenerate_family(r, A, desc.mu, n, c).outputs), {desc.mu: c}
    fam = desc.family
    if config.coefficients:
        c = dict(config.coefficients)
    else:
        c = dict(dictionary_regime(r, A, n, config.invariants, direction="a_to_c", family=fam).outputs)
    a = dictionary_regime(r, A, n, c, family=fam).outputs
    return {s: complex(a.get(s, 0)) for s in desc.exponents}, c


def ode_keys(r: int, A: int, coefficients: Dict[int, complex]) -> Dict[Tuple[int, int], complex]:
    """Attach the admissible j to each power mu."""
    by_mu = {mu: j for mu, j in xi_set(r, A)}
    out = {}
    for mu, value in coefficients.items():
        if mu not in by_mu:
            raise DictionaryError("domain", f"no admissible (mu, j) with mu={mu} for r={r}, A={A}",
                                  {"mu": mu})
        out[(mu, by_mu[mu])] = complex(value)
    return out


def build_ode_spec(config: StudyConfig, desc: SchemeDescriptor, chain: ChainSpec,
                   coefficients: Dict[int, complex]) -> OdeSpec:
    if desc.family == Family.DEGENERATE.value:
        return degenerate_spec(config.r, config.A, desc.mu, config.n, chain.p,
                               coefficients.get(desc.mu, 0))
    return OdeSpec.from_chain(chain, ode_keys(config.r, config.A, coefficients))


# -- lattice --------------------------------------------------------------------

def solve_point(config: StudyConfig, desc: SchemeDescriptor, invariants: Dict[int, complex], N: int,
                store: Optional[RootStore] = None) -> SweepPoint:
    chain = ChainSpec(N=N, r=config.r, A=config.A, n=config.n, k=config.k, Sz=config.Sz)
    scheme = desc.rg_scheme(invariants, n=config.n)
    root_set, eta = ground_state(chain, scheme, steps=config.steps)
    if store is not None:
        store.save(f"N{N:05d}", chain, root_set, eta, scheme)
    zeros = scaled_roots(root_set, chain, m_max=config.m_max)
    sums = {s: scaled_sum_rule(sum_rule_reg(root_set, eta, chain, scheme, s), chain, s)
            for s in range(1, config.s_max + 1)}
    logger.info("N=%d solved, residual %.2e", N, root_set.residual)
    return SweepPoint(N=N, residual=root_set.residual, zeros=zeros, sum_rules=sums,
                      flags=list(root_set.flags))


def sweep(config: StudyConfig, desc: SchemeDescriptor, invariants: Dict[int, complex],
          settings: Optional[Settings] = None, store: Optional[RootStore] = None) -> List[SweepPoint]:
    """Solve every N of the sweep; results come back in sweep order."""
    settings = settings or Settings()
    Ns = sorted(config.Ns)

    def work(N):
        return solve_point(config, desc, invariants, N, store)

    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            return list(pool.map(work, Ns))
    return [work(N) for N in Ns]


def write_sumrules_csv(points: List[SweepPoint], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    s_values = sorted({s for p in points for s in p.sum_rules})
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["N", "residual"] + [f"{part}_h{s}" for s in s_values for part in ("re", "im")])
        for p in points:
            row = [p.N, f"{p.residual:.6e}"]
            for s in s_values:
                v = p.sum_rules.get(s, complex("nan"))
                row += [f"{v.real:.15g}", f"{v.imag:.15g}"]
            writer.writerow(row)
    return path


def extrapolate_points(points: List[SweepPoint], config: StudyConfig
                       ) -> Tuple[Dict[Tuple[int, int], complex], Dict[int, complex]]:
    """O(N^-fit_exponent) limits of the scaled roots; free-exponent limits of the sum rules."""
    Ns = [p.N for p in points]
    keys = sorted(set.intersection(*(set(p.zeros) for p in points)))
    zeros = {}
    for key in keys:
        fit = extrapolate(Ns, [p.zeros[key] for p in points], exponent=config.fit_exponent,
                          terms=config.fit_terms)
        zeros[key] = fit.limit
    sums = {}
    for s in range(1, config.s_max + 1):
        sums[s] = extrapolate(Ns, [p.sum_rules[s] for p in points]).limit
    return zeros, sums


# -- comparison -----------------------------------------------------------------

def _relative(a: complex, b: complex) -> float:
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


def compare(report: ScalingReport, config: StudyConfig) -> List[CriterionResult]:
    out = []
    for key in sorted(report.ode_zeros):
        if key not in report.zero_limits:
            continue
        dev = _relative(report.zero_limits[key], report.ode_zeros[key])
        out.append(CriterionResult(name=f"zero a={key[0]} m={key[1]}", passed=dev <= config.zero_tol,
                                   deviation=dev, tolerance=config.zero_tol))
    for s in sorted(report.ode_j):
        if s not in report.sum_rule_limits:
            continue
        dev = _relative(report.sum_rule_limits[s], report.ode_j[s])
        out.append(CriterionResult(name=f"sum rule s={s}", passed=dev <= config.sum_rule_tol,
                                   deviation=dev, tolerance=config.sum_rule_tol))
    return out


def run_scaling_study(config: StudyConfig, settings: Optional[Settings] = None,
                      out_dir=None) -> ScalingReport:
    """
    Run the full pipeline for one study.

    With `out_dir` the root sets, sumrules.csv and summary.json are written
    there, also for a partial report.
    """
    settings = settings or Settings()
    report = ScalingReport(config=config.to_dict())
    store = RootStore(Path(out_dir) / "roots") if out_dir is not None else None
    try:
        report.stage = "dictionary"
        desc = config.validate()
        report.invariants, report.coefficients = resolve_scheme(config, desc)

        report.stage = "lattice"
        report.points = sweep(config, desc, report.invariants, settings, store)

        report.stage = "extrapolate"
        report.zero_limits, report.sum_rule_limits = extrapolate_points(report.points, config)

        if config.ode_enabled:
            report.stage = "ode"
            chain = ChainSpec(N=config.Ns[0], r=config.r, A=config.A, n=config.n, k=config.k,
                              Sz=config.Sz)
            spec = build_ode_spec(config, desc, chain, report.coefficients)
            table = find_all_zeros(spec, config.m_max, threads=settings.threads)
            report.ode_zeros = table.as_map()
            report.ode_j = j_coefficients(spec, config.s_max, threads=settings.threads).taylor

            report.stage = "compare"
            report.criteria = compare(report, config)
        report.complete = True
    except _FAILURES as exc:
        report.error = str(exc)
        logger.warning("study %s stopped in stage %s: %s", config.name, report.stage, exc)
    if out_dir is not None:
        write_report(report, out_dir)
    return report


def write_report(report: ScalingReport, out_dir) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if report.points:
        write_sumrules_csv(report.points, out_dir / "sumrules.csv")
    path = out_dir / "summary.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report.to_dict(), f, indent=2, sort_keys=True)
    return path
