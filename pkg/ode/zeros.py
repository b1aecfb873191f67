"""Zeros of D_+ along the rays, and their CSV storage."""

import cmath
import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Tuple

from scipy.optimize import newton

from lattice.bethe import free_fermion_scaled_roots, ray_phase
from lattice.storage import read_header, write_header
from ode.determinant import spectral_determinant
from ode.models import OdeError, OdeSpec, ZeroRow, ZeroTable, check_exceptional
from ode.wkb import bohr_sommerfeld_zeros

logger = logging.getLogger("sixvertex.ode.zeros")

COLUMNS = ["ray", "m", "re_E", "im_E", "residual"]


def theta_of(spec: OdeSpec, E: complex, a: int) -> complex:
    """theta with E = e^{i phi_a} e^{2n theta/(r alpha)}."""
    u = cmath.exp(1j * ray_phase(spec.r, spec.A, a))
    return spec.r * spec.alpha / (2 * spec.n) * cmath.log(complex(E) / u)


def E_of(spec: OdeSpec, theta: complex, a: int) -> complex:
    u = cmath.exp(1j * ray_phase(spec.r, spec.A, a))
    return u * cmath.exp(2 * spec.n * complex(theta) / (spec.r * spec.alpha))


def _is_free_fermion(spec: OdeSpec) -> bool:
    return (spec.r % 2 == 1 and 2 * spec.A == spec.r - 1 and abs(spec.n - spec.r) < 1e-12
            and not spec.extra_terms
            and all(mu == 2 * j + 1 for mu, j in spec.coeffs))


def seeds(spec: OdeSpec, a: int, m_max: int) -> List[complex]:
    """Starting points for the refinement on ray a."""
    if _is_free_fermion(spec):
        a_map = {mu: (-1) ** j * c / spec.r for (mu, j), c in spec.coeffs.items()}
        roots = free_fermion_scaled_roots(spec.r, spec.A, (spec.p / spec.r).real, a_map, m_max)
        return [roots[(a, m)] for m in range(1, m_max + 1)]
    check_exceptional(spec)
    return bohr_sommerfeld_zeros(spec, a, range(1, m_max + 1))


def _refine(spec: OdeSpec, a: int, theta0: complex, tol: float) -> complex:
    def f(theta):
        return spectral_determinant(spec, E_of(spec, theta, a), 1)

    try:
        return complex(newton(f, theta0, x1=theta0 + 1e-3, tol=tol, maxiter=60))
    except RuntimeError as exc:
        raise OdeError("bracketing", f"secant did not converge from theta={theta0}: {exc}",
                       {"ray": a, "theta0": theta0}) from exc


def find_zeros(spec: OdeSpec, a: int, m_max: int, tol: float = 1e-12,
               threads: int = 1) -> ZeroTable:
    """
    Refine the first m_max zeros of D_+ on ray a.

    Raises:
        OdeError(kind="exceptional_n") at an exceptional n.
        OdeError(kind="bracketing") when a refined zero lands nearer
        another seed than its own.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    starts = [theta_of(spec, E, a) for E in seeds(spec, a, m_max)]

    def work(theta0):
        return _refine(spec, a, theta0, tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            refined = list(pool.map(work, starts))
    else:
        refined = [work(t) for t in starts]

    rows = []
    for m, (theta0, theta) in enumerate(zip(starts, refined), start=1):
        nearest = min(range(len(starts)), key=lambda i: abs(starts[i] - theta))
        if nearest != m - 1:
            raise OdeError("bracketing", f"zero m={m} on ray {a} moved to the seed of m={nearest + 1}",
                           {"ray": a, "m": m, "theta0": theta0, "theta": theta})
        E = E_of(spec, theta, a)
        residual = abs(spectral_determinant(spec, E, 1))
        rows.append(ZeroRow(ray=a, m=m, E=E, theta=theta, residual=residual))
    logger.info("ray %d: %d zeros, max residual %.2e", a, len(rows),
                max(row.residual for row in rows))
    return ZeroTable(rows=rows)


def find_all_zeros(spec: OdeSpec, m_max: int, threads: int = 1) -> ZeroTable:
    table = ZeroTable()
    for a in range(1, spec.r + 1):
        table = table.merged(find_zeros(spec, a, m_max, threads=threads))
    return table


class ZeroStore:
    """Directory of zero-table CSV files, one per key; the OdeSpec lives in the header."""

    def __init__(self, db_path):
        self.db_path = Path(db_path)
        self._files: Dict[str, Path] = {}
        self._load()

    def _load(self) -> None:
        if not self.db_path.exists():
            return
        for path in sorted(self.db_path.glob("*.csv")):
            self._files[path.stem] = path

    def _save(self, key: str, meta: Dict[str, str], table: ZeroTable) -> Path:
        self.db_path.mkdir(parents=True, exist_ok=True)
        path = self.db_path / f"{key}.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            write_header(f, meta)
            writer = csv.writer(f)
            writer.writerow(COLUMNS)
            for row in sorted(table.rows, key=lambda r: (r.ray, r.m)):
                writer.writerow([row.ray, row.m, f"{row.E.real:.17g}", f"{row.E.imag:.17g}",
                                 f"{row.residual:.6e}"])
        self._files[key] = path
        return path

    def save(self, key: str, spec: OdeSpec, table: ZeroTable) -> Path:
        meta = {"spec": json.dumps(spec.to_dict()), "count": str(len(table))}
        return self._save(key, meta, table)

    def load(self, key: str) -> Tuple[OdeSpec, ZeroTable]:
        path = self._files.get(key)
        if path is None or not path.exists():
            raise KeyError(f"Zero table not found: {key}")
        with open(path, "r", encoding="utf-8") as f:
            meta, body = read_header(f.readlines())
        spec = OdeSpec.from_dict(json.loads(meta["spec"]))
        rows = []
        for rec in csv.DictReader(body):
            E = complex(float(rec["re_E"]), float(rec["im_E"]))
            a = int(rec["ray"])
            rows.append(ZeroRow(ray=a, m=int(rec["m"]), E=E, theta=theta_of(spec, E, a),
                                residual=float(rec["residual"])))
        return spec, ZeroTable(rows=rows)

    def keys(self) -> List[str]:
        return sorted(self._files)

    def __contains__(self, key: str) -> bool:
        return key in self._files
