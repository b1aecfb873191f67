"""
Reproduce the reference tables shipped with the dictionary layer.

Each reproduction returns rows plus pass/fail criteria; `write_reproduction`
stores them as CSV and summary.json under <out>/reproduce/<name>/.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List

from dictionary.a0 import b1_coefficient, b2_estimate, b_table_coefficients, b_table_range
from dictionary.degenerate import degenerate_family, h6_prediction
from dictionary.descriptor import TABLE_DIR, exponent_table, first_index, scheme_descriptor, single_n_min
from dictionary.regimes import dictionary_regime
from harness.config import Settings
from harness.study import CriterionResult
from lattice.bethe import ground_state
from lattice.extrapolate import extrapolate
from lattice.models import ChainSpec
from lattice.observables import quasi_shift_limits, scaled_sum_rule, sum_rule_reg
from ode.xi import xi_count_bounds, xi_set

logger = logging.getLogger("sixvertex.harness.reproduce")

H6_TOL = 1e-2
H6_FAST_TOL = 0.15
B2_TOL = 2e-2
B2_FAST_TOL = 0.25
B1_TOL = 1e-2
EXPONENT_TOL = 0.25

# short sweeps used without settings.slow
FAST_H6_NS = (72, 90, 108, 126)
FAST_B2_NS = (48, 60, 72, 84)


@dataclass
class Reproduction:
    name: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    criteria: List[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def to_dict(self) -> Dict:
        return {"name": self.name, "passed": self.passed,
                "criteria": [c.to_dict() for c in self.criteria]}


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _criterion(name: str, value: float, reference: float, tol: float, **details) -> CriterionResult:
    dev = _relative(value, reference)
    return CriterionResult(name=name, passed=dev <= tol, deviation=dev, tolerance=tol,
                           details={"value": value, "reference": reference, **details})


def _sweep_sizes(start: int, settings: Settings, fast: tuple) -> List[int]:
    if not settings.slow:
        return list(fast)
    Ns, N = [], start
    while N <= settings.nmax:
        Ns.append(N)
        N *= 2
    return Ns


# -- h6 from two routes ---------------------------------------------------------------

def _lattice_h_limits(n: float, k: float, Ns: List[int], c: float = 1.0) -> Dict[int, complex]:
    """Extrapolated scaled h_3 and h_6 of the r=9, A=3 chain with a_6 set by c."""
    family = degenerate_family(9, 3, 6, n, c)
    scheme = family.intermediates["descriptor"].rg_scheme(family.outputs, n=n)
    series: Dict[int, List[complex]] = {3: [], 6: []}
    for N in Ns:
        chain = ChainSpec(N=N, r=9, A=3, n=n, k=k)
        roots, eta = ground_state(chain, scheme)
        for s, values in series.items():
            values.append(scaled_sum_rule(sum_rule_reg(roots, eta, chain, scheme, s), chain, s))
        logger.debug("h6 routes n=%g k=%g N=%d solved", n, k, N)
    return {s: extrapolate(Ns, values).limit for s, values in series.items()}


def reproduce_h6_routes(settings: Settings) -> Reproduction:
    """
    r=9, A=3, mu=6 at c=1. The lattice route extrapolates the scaled h_6
    sum rule; the ODE route feeds the extrapolated h_3 into the prediction.
    Both are held against each other and against the reference table.

    Without `settings.slow` only the first row is solved, on a short sweep
    and with the loose tolerance.
    """
    out = Reproduction(name="h6-routes")
    with open(TABLE_DIR / "h6_reference.csv", newline="") as f:
        table = list(csv.DictReader(f))
    Ns = _sweep_sizes(72, settings, FAST_H6_NS)
    tol = H6_TOL if settings.slow else H6_FAST_TOL
    for rec in table if settings.slow else table[:1]:
        n, k = float(rec["n"]), float(rec["k"])
        limits = _lattice_h_limits(n, k, Ns)
        lattice = limits[6].real
        ode = h6_prediction(n, k, 1.0, limits[3]).real
        out.rows.append({"n": n, "k": k, "h3_lattice": limits[3].real, "h6_lattice": lattice,
                         "h6_ode": ode, "c_term": h6_prediction(n, k, 1.0, 0.0).real,
                         "h6_lattice_ref": float(rec["h6_lattice"]),
                         "h6_ode_ref": float(rec["h6_ode"])})
        out.criteria.append(_criterion(f"h6 routes n={n:g} k={k:g}", lattice, ode, tol, Ns=Ns))
        out.criteria.append(_criterion(f"h6 lattice reference n={n:g} k={k:g}", lattice,
                                       float(rec["h6_lattice"]), tol))
        out.criteria.append(_criterion(f"h6 ode reference n={n:g} k={k:g}", ode,
                                       float(rec["h6_ode"]), tol))
    return out


# -- B coefficients of the A = 0, r = 3 map -------------------------------------------

def reproduce_b_coefficients(settings: Settings) -> Reproduction:
    out = Reproduction(name="b-coefficients")
    lo, hi = b_table_range()
    n = lo
    while n <= hi + 1e-12:
        values = b_table_coefficients(n)
        out.rows.append({"n": n, "B1_1": b1_coefficient(n), **values})
        n += 0.25
    out.criteria.append(_criterion("B2_2(1.0)", b_table_coefficients(1.0)["B2_2"], 8.000000, B2_TOL))
    out.criteria.append(_criterion("B2_2(5.0)", b_table_coefficients(5.0)["B2_2"], 16.55638, B2_TOL))
    # B_1^{(1)}(1) = sqrt(pi) Gamma(1/2) / Gamma(1) = pi
    out.criteria.append(_criterion("B1_1(1.0)", b1_coefficient(1.0), math.pi, B1_TOL))
    out.criteria.append(_criterion("B1_1(0.5)", b1_coefficient(0.5), 2.0, B1_TOL))
    b2 = [row["B2_2"] for row in out.rows]
    steps = [b - a for a, b in zip(b2, b2[1:])]
    monotone = all(s >= 0 for s in steps) or all(s <= 0 for s in steps)
    out.criteria.append(CriterionResult(name="B2_2 monotone", passed=monotone,
                                        deviation=0.0 if monotone else 1.0, tolerance=0.0))
    tol = B2_TOL if settings.slow else B2_FAST_TOL
    for n in (1.0, 5.0) if settings.slow else (1.0,):
        fitted = _fitted_b2(n, settings)
        out.rows.append({"n": n, "B2_2_fitted": fitted})
        out.criteria.append(_criterion(f"B2_2({n:g}) lattice", fitted,
                                       b_table_coefficients(n)["B2_2"], tol))
    return out


def _fitted_b2(n: float, settings: Settings, a2: float = 0.1, k: float = 0.02) -> float:
    """
    B_2^{(2)} = c_2 / b_2 with b_2 extrapolated from the r=3, A=0 lattice.

    The sweep doubles from N = 48 up to `settings.nmax`; without
    `settings.slow` it is the short sweep FAST_B2_NS.
    """
    scheme = scheme_descriptor(3, 0).rg_scheme({2: a2}, n=n)
    c2 = dictionary_regime(3, 0, n, {2: a2}, direction="a_to_c").outputs[2]
    Ns = _sweep_sizes(48, settings, FAST_B2_NS)
    values = []
    for N in Ns:
        chain = ChainSpec(N=N, r=3, A=0, n=n, k=k)
        roots, eta = ground_state(chain, scheme)
        values.append(quasi_shift_limits(roots, eta, chain)[2])
    b2 = extrapolate(Ns, values).limit
    return b2_estimate(c2, b2).real


# -- correction exponents of r = 7, A = 1, (1, 0) -------------------------------------

def predicted_correction_exponent(n: float) -> float:
    """|d_1 - d~_1(n)| below n = 35, 2 above."""
    desc = scheme_descriptor(7, 1, 1, 0)
    if n > 35:
        return 2.0
    if n < desc.n_min:
        return abs(float(desc.exponents[1]) - desc.low_n_exponent(n))
    return abs(6 / 7 - 4 * n / 49)


def _fitted_exponent(n: float, settings: Settings, a1: float = 0.4, k: float = 0.02) -> float:
    desc = scheme_descriptor(7, 1, 1, 0)
    scheme = desc.rg_scheme({1: a1}, n=n)
    Ns, values = [], []
    N = 112
    while N <= settings.nmax:
        chain = ChainSpec(N=N, r=7, A=1, n=n, k=k)
        roots, eta = ground_state(chain, scheme)
        Ns.append(N)
        values.append(scaled_sum_rule(sum_rule_reg(roots, eta, chain, scheme, 1), chain, 1))
        N *= 2
    return extrapolate(Ns, values).exponent


def reproduce_correction_exponents(settings: Settings) -> Reproduction:
    """
    The predicted exponent curve; with `settings.slow` the lattice sum rule
    h_1 is also fitted at n = 5 and n = 20.
    """
    out = Reproduction(name="correction-exponents")
    desc = scheme_descriptor(7, 1, 1, 0)
    for n in (1.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 20.0, 25.0, 30.0, 40.0):
        out.rows.append({"n": n, "delta_predicted": predicted_correction_exponent(n)})
        if n < desc.n_min:
            # the low-n exponent and the tabulated one must differ by the closed-form gap
            gap = float(desc.exponents[1]) - desc.exponent(1, n=n)
            out.criteria.append(_criterion(f"exponent gap n={n:g}", gap, 6 / 7 - 4 * n / 49, 1e-12))
    if settings.slow:
        for n in (5.0, 20.0):
            fitted = _fitted_exponent(n, settings)
            out.rows.append({"n": n, "delta_fitted": fitted})
            out.criteria.append(CriterionResult(
                name=f"fitted exponent n={n:g}", passed=abs(fitted - predicted_correction_exponent(n)) <= EXPONENT_TOL,
                deviation=abs(fitted - predicted_correction_exponent(n)), tolerance=EXPONENT_TOL))
    return out


# -- exponent table --------------------------------------------------------------------

def reproduce_exponent_table(settings: Settings) -> Reproduction:
    """
    Every tabulated row against the index rule d_s = 2 M i_s / r, the n_min
    rule and the descriptor built from it.
    """
    out = Reproduction(name="exponent-table")
    for (r, A, mu, j), row in sorted(exponent_table().items()):
        M = (j + 1) * r - (A + 1) * mu
        predicted = {s: Fraction(2 * M * (first_index(r, mu, s) or 0), r) for s in row["s"]}
        tabulated = dict(zip(row["s"], row["d"]))
        n_min = single_n_min(r, A, predicted)
        desc = scheme_descriptor(r, A, mu, j)
        ok = (predicted == tabulated and n_min == row["n_min"]
              and desc.exponents == tabulated and desc.n_min == row["n_min"])
        out.rows.append({"r": r, "A": A, "mu": mu, "j": j,
                         "d": ";".join(str(tabulated[s]) for s in row["s"]),
                         "n_min": str(row["n_min"]), "matches": ok})
        out.criteria.append(CriterionResult(name=f"row r={r} A={A} ({mu},{j})", passed=ok,
                                            deviation=0.0 if ok else 1.0, tolerance=0.0))
    for r in sorted({key[0] for key in exponent_table()}):
        if r < 3:
            continue
        lo, hi = xi_count_bounds(r)
        sizes = [len(xi_set(r, A)) for A in range(1, r - 1)]
        ok = all(lo <= size <= hi for size in sizes)
        out.criteria.append(CriterionResult(name=f"Xi bounds r={r}", passed=ok,
                                            deviation=0.0 if ok else 1.0, tolerance=0.0,
                                            details={"sizes": sizes, "bounds": [lo, hi]}))
    return out


TABLES: Dict[str, Callable[[Settings], Reproduction]] = {
    "h6-routes": reproduce_h6_routes,
    "b-coefficients": reproduce_b_coefficients,
    "correction-exponents": reproduce_correction_exponents,
    "exponent-table": reproduce_exponent_table,
}

TABLE_ALIASES: Dict[str, str] = {
    "tab0": "h6-routes",
    "Btab": "b-coefficients",
    "fig4-exponents": "correction-exponents",
    "appF": "exponent-table",
}


def reproduce_table(name: str, settings: Settings) -> Reproduction:
    """Run one reproduction by name or alias; the result carries the canonical name."""
    fn = TABLES.get(TABLE_ALIASES.get(name, name))
    if fn is None:
        raise ValueError(f"Unknown table: {name} (choose from {', '.join([*TABLES, *TABLE_ALIASES])})")
    result = fn(settings)
    logger.info("%s: %d rows, %d/%d criteria passed", name, len(result.rows),
                sum(c.passed for c in result.criteria), len(result.criteria))
    return result


def write_reproduction(result: Reproduction, out_dir) -> Path:
    out_dir = Path(out_dir) / "reproduce" / result.name
    out_dir.mkdir(parents=True, exist_ok=True)
    columns: List[str] = []
    for row in result.rows:
        columns += [key for key in row if key not in columns]
    with open(out_dir / "rows.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns)
        writer.writeheader()
        for row in result.rows:
            writer.writerow({k: (f"{v:.12g}" if isinstance(v, float) else v) for k, v in row.items()})
    path = out_dir / "summary.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(result.to_dict(), f, indent=2, sort_keys=True)
    return path
