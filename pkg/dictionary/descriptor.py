"""
Scheme descriptors: which RG invariants a_s are switched on for a given
(r, A) and coefficient pattern, with their exponents d_s and the lower
bound n_min on n.

Single-coefficient and degenerate descriptors for 3 <= r <= 10 are read
from the CSV fixtures in dictionary/tables/; beyond that range the index
rule is used and the descriptor is flagged table-unverified.
"""

import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from lattice.models import RgEntry, RgScheme, SchemeKind
from ode.xi import xi_degenerate, xi_set

logger = logging.getLogger("sixvertex.dictionary.descriptor")

TABLE_DIR = Path(__file__).resolve().parent / "tables"
TABLE_R_RANGE = (3, 10)

Key = Tuple[int, int]


@dataclass
class DictionaryError(Exception):
    """Structured error raised by the dictionary layer."""
    kind: str  # domain | inversion | unsupported | extrapolation
    message: str
    details: Optional[Dict[str, Any]] = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


class Family(str, Enum):
    SINGLE = "single"
    HALF_FILLING = "half-filling"
    A1 = "A1"
    HALF_EVEN = "half-even"
    HALF = "half"
    RM2 = "rm2"
    ZERO = "zero"
    DEGENERATE = "degenerate"


class Direction(str, Enum):
    FORWARD = "c_to_a"
    INVERSE = "a_to_c"


def _pack(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class SchemeDescriptor:
    r: int
    A: int
    family: str
    mu: Optional[int] = None
    j: Optional[int] = None
    n_min: Fraction = Fraction(0)
    exponents: Dict[int, Fraction] = field(default_factory=dict)
    aux: Dict[str, Any] = field(default_factory=dict)
    verified: bool = True

    @property
    def invariants(self) -> List[int]:
        return list(self.exponents)

    @property
    def log_modified(self) -> List[int]:
        return list(self.aux.get("log_modified", ()))

    def low_n_exponent(self, n: float) -> Optional[float]:
        """
        d_mu for 0 < n < n_min: 4 L n / r^2 + 2 (r - M) / r. None when the
        descriptor has no single coefficient or n is above n_min.
        """
        if self.family != Family.SINGLE.value or not 0 < n < self.n_min:
            return None
        L, M = self.aux["L"], self.aux["M"]
        return 4 * L * n / self.r ** 2 + 2 * (self.r - M) / self.r

    def exponent(self, s: int, n: Optional[float] = None) -> float:
        if s not in self.exponents:
            raise KeyError(f"RG invariant not in scheme: s={s}")
        if n is not None and s == self.mu:
            low = self.low_n_exponent(n)
            if low is not None:
                return low
        return float(self.exponents[s])

    def rg_scheme(self, values: Mapping[int, complex], n: Optional[float] = None) -> RgScheme:
        """Lattice scheme holding `values` fixed; absent invariants are zero."""
        unknown = sorted(s for s in values if s not in self.exponents)
        if unknown:
            raise ValueError(f"values given for invariants outside the scheme: {unknown}")
        entries = [RgEntry(s=s, d=self.exponent(s, n), value=complex(values.get(s, 0)),
                           log_modified=s in self.log_modified)
                   for s in self.exponents]
        scheme = RgScheme(kind=SchemeKind.STANDARD.value, entries=entries)
        scheme.validate(self.r)
        return scheme

    def to_dict(self) -> Dict:
        return {
            "r": self.r, "A": self.A, "family": self.family, "mu": self.mu, "j": self.j,
            "n_min": str(self.n_min),
            "exponents": [[s, str(d)] for s, d in self.exponents.items()],
            "aux": {k: (v if not isinstance(v, dict) else {str(a): b for a, b in v.items()})
                    for k, v in self.aux.items()},
            "verified": self.verified,
        }


@dataclass
class DictionaryResult:
    direction: str
    inputs: Dict[Any, complex]
    outputs: Dict[Any, complex]
    intermediates: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            "direction": self.direction,
            "inputs": {str(k): _pack(v) for k, v in self.inputs.items()},
            "outputs": {str(k): _pack(v) for k, v in self.outputs.items()},
        }


# -- fixtures -----------------------------------------------------------------

def _fractions(text: str) -> List[Fraction]:
    return [Fraction(t) for t in text.split(";") if t]


def _ints(text: str) -> List[int]:
    return [int(t) for t in text.split(";") if t]


@lru_cache(maxsize=1)
def exponent_table() -> Dict[Tuple[int, int, int, int], Dict[str, Any]]:
    """Single-coefficient rows keyed by (r, A, mu, j)."""
    rows = {}
    with open(TABLE_DIR / "single_exponents.csv", newline="") as f:
        for row in csv.DictReader(f):
            key = (int(row["r"]), int(row["A"]), int(row["mu"]), int(row["j"]))
            rows[key] = {
                "s": _ints(row["s_list"]),
                "d": _fractions(row["d_list"]),
                "n_min": Fraction(row["n_min"]),
                "note": row.get("note") or "",
            }
    logger.debug("loaded %d exponent-table rows", len(rows))
    return rows


@lru_cache(maxsize=1)
def degenerate_table() -> Dict[Tuple[int, int, int], Dict[str, Any]]:
    """Degenerate-family rows keyed by (r, A, mu)."""
    rows = {}
    with open(TABLE_DIR / "degenerate_exponents.csv", newline="") as f:
        for row in csv.DictReader(f):
            key = (int(row["r"]), int(row["A"]), int(row["mu"]))
            extra = {}
            for item in row["mu_i"].split(";"):
                if item:
                    i, m = item.split(":")
                    extra[int(i)] = int(m)
            rows[key] = {"s": _ints(row["s_list"]), "d": _fractions(row["d_list"]), "mu_i": extra}
    return rows


# -- index rules --------------------------------------------------------------

def _check(r: int, A: int) -> None:
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if not 0 <= A <= r - 1:
        raise ValueError(f"A must be in 0..{r - 1}, got {A}")


def first_index(r: int, mu: int, s: int) -> Optional[int]:
    """Smallest positive i with s = mu i (mod r), or None."""
    for i in range(1, r + 1):
        if (mu * i - s) % r == 0:
            return i
    return None


def single_n_min(r: int, A: int, exponents: Mapping[int, Fraction]) -> Fraction:
    """
    max(0, (r/L_s)(M_s - r/2)) over the invariants with d_s > 1, using the
    admissible pair (s, j_s) for each such s.
    """
    xi = xi_set(r, A)
    best = Fraction(0)
    for s, d in exponents.items():
        if d <= 1:
            continue
        pairs = [(mu, j) for mu, j in xi if mu == s]
        if not pairs:
            continue
        mu, j = pairs[0]
        L, M = A * mu - r * j, (j + 1) * r - (A + 1) * mu
        best = max(best, Fraction(r, L) * (M - Fraction(r, 2)))
    return best


def _single(r: int, A: int, mu: int, j: int) -> SchemeDescriptor:
    L, M = A * mu - r * j, (j + 1) * r - (A + 1) * mu
    row = exponent_table().get((r, A, mu, j))
    verified = row is not None
    if row is not None:
        exponents = dict(zip(row["s"], row["d"]))
        n_min = row["n_min"]
    else:
        exponents = {}
        i = 1
        while M * i < r:
            s = mu * i % r
            if s and s not in exponents:
                exponents[s] = Fraction(2 * M * i, r)
            i += 1
        n_min = single_n_min(r, A, exponents)
        logger.warning("no exponent-table row for r=%d A=%d (%d,%d); using the index rule",
                       r, A, mu, j)
    i_s = {s: first_index(r, mu, s) for s in exponents}
    aux = {"M": M, "L": L, "i_s": i_s,
           "N_s": {s: (s - mu * i) // r for s, i in i_s.items() if i is not None}}
    if not verified:
        aux["flag"] = "table-unverified"
    return SchemeDescriptor(r=r, A=A, family=Family.SINGLE.value, mu=mu, j=j, n_min=n_min,
                            exponents=exponents, aux=aux, verified=verified)


def _degenerate(r: int, A: int, mu: int, j: int, allow_unverified: bool) -> SchemeDescriptor:
    H = gcd(r, A)
    J = mu * H // r
    aux: Dict[str, Any] = {"H": H, "J": J, "sigma": gcd(r, mu), "mu_i": {}, "i_s": {}}
    desc = SchemeDescriptor(r=r, A=A, family=Family.DEGENERATE.value, mu=mu, j=j, aux=aux)
    if 2 * J < H:
        aux["advisory"] = "trivial: scaled roots coincide with the Z_r case"
        return desc

    top = H // (2 * (H - J))
    for i in range(1, top + 1):
        s = mu * i % r
        desc.exponents[s] = Fraction(2 * (H - J) * i, H)
        aux["i_s"][s] = i
    for i in range(top + 1, (H - 1) // (H - J) + 1):
        aux["mu_i"][i] = i * mu - (i - 1) * r
    if H % (2 * (H - J)) == 0:
        K = H // (2 * (H - J))
        aux["K"] = K
        aux["log_modified"] = [r // 2]
        if K > 1:
            desc.verified = False
            if not allow_unverified:
                raise DictionaryError(
                    "unsupported",
                    f"log-modified invariant for K={K} > 1 has no verified dictionary",
                    {"r": r, "A": A, "mu": mu, "K": K})

    row = degenerate_table().get((r, A, mu))
    if row is not None:
        table = dict(zip(row["s"], row["d"]))
        if table != desc.exponents or row["mu_i"] != aux["mu_i"]:
            raise DictionaryError("domain", f"degenerate table row disagrees with the index rule for "
                                            f"r={r} A={A} mu={mu}",
                                  {"table": table, "rule": dict(desc.exponents)})
    elif not TABLE_R_RANGE[0] <= r <= TABLE_R_RANGE[1]:
        aux["flag"] = "table-unverified"
        desc.verified = False
    return desc


# -- regime families ----------------------------------------------------------

def regime_families(r: int, A: int) -> List[Family]:
    """
    Closed-form families covering (r, A), in the order half-filling, zero,
    rm2, A1, half-even, half. The first one is the default.
    """
    _check(r, A)
    out = []
    if r % 2 == 1 and 2 * A == r - 1 and A > 0:
        out.append(Family.HALF_FILLING)
    if A == 0:
        out.append(Family.ZERO)
    if A == r - 2 and A > 0:
        out.append(Family.RM2)
    if A == 1:
        out.append(Family.A1)
    if r % 2 == 0 and A == r // 2 - 1 and A > 0:
        out.append(Family.HALF_EVEN)
    if r % 2 == 0 and A == r // 2:
        out.append(Family.HALF)
    return out


def regime_family(r: int, A: int) -> Family:
    """
    Raises:
        DictionaryError(kind="domain") when no family covers (r, A).
    """
    families = regime_families(r, A)
    if not families:
        raise DictionaryError("domain", f"no closed-form dictionary for r={r}, A={A}", {"r": r, "A": A})
    return families[0]


def regime_exponents(r: int, family: Family) -> Tuple[Dict[int, Fraction], Dict[str, Any]]:
    """Invariants {s: d_s} and index data (o_s, e_s) of a regime family."""
    family = Family(family)
    out: Dict[int, Fraction] = {}
    aux: Dict[str, Any] = {}
    if family == Family.HALF_FILLING:
        for s in range(1, r - 1, 2):
            out[s] = 1 - Fraction(s, r)
    elif family == Family.A1 and r % 2 == 1:
        o = {}
        for s in range(1, r):
            if 2 * s == r + 1:
                continue
            o[s] = r - 2 * s if 2 * s <= r - 1 else 2 * r - 2 * s
            out[s] = Fraction(2 * o[s], r)
        aux["o_s"] = o
    elif family == Family.A1:
        e = {}
        for s in range(1, r - 1):
            if 2 * s == r:
                continue
            e[s] = r // 2 - s if 2 * s < r else r - s
            out[s] = Fraction(4 * e[s], r)
        aux["e_s"] = e
    elif family == Family.HALF_EVEN:
        for j in range(r // 4):
            out[2 * j + 1] = Fraction(1)
    elif family == Family.HALF and (r // 2) % 2 == 0:
        o = {}
        for s in list(range(1, r // 2, 2)) + list(range(r // 2, r - 1, 2)):
            o[s] = r // 2 - s if s < r // 2 else r - s
            out[s] = Fraction(2 * o[s], r)
        aux["o_s"] = o
    elif family == Family.HALF:
        e = {}
        for s in range(1, r // 2 - 1, 2):
            e[s] = (r - 2 * s) // 4
            out[s] = Fraction(4 * e[s], r)
        for s in range(r // 2 + 1, r - 3, 2):
            e[s] = (r - s) // 2
            out[s] = Fraction(4 * e[s], r)
        aux["e_s"] = e
    elif family == Family.RM2:
        for s in range(1, r // 2 + 1):
            out[s] = Fraction(2 * s, r)
    elif family == Family.ZERO:
        for s in range((r + 1) // 2, r):
            out[s] = Fraction(2 * (r - s), r)
        if r % 2 == 0:
            aux["log_modified"] = [r // 2]
    else:
        raise DictionaryError("domain", f"{family.value} is not a regime family")
    return out, aux


def _regime(r: int, A: int, family: Optional[Family]) -> SchemeDescriptor:
    if family is None:
        family = regime_family(r, A)
    elif Family(family) not in regime_families(r, A):
        raise DictionaryError("domain", f"family {Family(family).value} does not cover r={r}, A={A}",
                              {"r": r, "A": A})
    family = Family(family)
    exponents, aux = regime_exponents(r, family)
    n_min = Fraction(0)
    if family == Family.A1:
        n_min = max(Fraction(0), Fraction(r * (r - 4), 2))
    return SchemeDescriptor(r=r, A=A, family=family.value, n_min=n_min,
                            exponents=exponents, aux=aux)


def scheme_descriptor(r: int, A: int, mu: Optional[int] = None, j: Optional[int] = None,
                      family: Optional[str] = None,
                      allow_unverified: bool = False) -> SchemeDescriptor:
    """
    Minimal set of non-trivial RG invariants.

    With (mu, j) the single-coefficient or degenerate descriptor is
    returned; without it, the regime family of (r, A).

    Raises:
        DictionaryError(kind="domain") for an inadmissible (mu, j).
        DictionaryError(kind="unsupported") for a degenerate family with K > 1
        unless allow_unverified is set.
    """
    _check(r, A)
    if mu is None and j is None:
        return _regime(r, A, Family(family) if family else None)
    if mu is None or j is None:
        raise ValueError("mu and j must be given together")
    key = (mu, j)
    if key in xi_set(r, A):
        return _single(r, A, mu, j)
    if key in xi_degenerate(r, A):
        return _degenerate(r, A, mu, j, allow_unverified)
    raise DictionaryError("domain", f"(mu, j)=({mu}, {j}) is not admissible for r={r}, A={A}",
                          {"r": r, "A": A, "mu": mu, "j": j})
