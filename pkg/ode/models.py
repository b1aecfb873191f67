"""
Data models for the ODE layer.

An OdeSpec describes the Schrodinger-type equation

    [-d^2/dy^2 + p^2 + e^{(n+r)y} - (-1)^A E^r e^{ry}
        - sum c_{mu,j} E^mu e^{kappa_{mu,j} y}] psi = 0,
    kappa_{mu,j} = (A mu - r j)(n+r)/r + mu,

plus optional extra terms b E^mu e^{x y} used by the degenerate families.
"""

import cmath
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from special.gamma import gamma_ratio

logger = logging.getLogger("sixvertex.ode.models")

Key = Tuple[int, int]

# relative distance from an exceptional n treated as a hit
EXCEPTIONAL_TOL = 1e-6


@dataclass
class OdeError(Exception):
    """Structured error raised by the ODE layer."""
    kind: str  # resonance | exceptional_n | integration | accuracy | bracketing | domain | window
    message: str
    details: Optional[Dict[str, Any]] = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def _pack(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unpack(v: Any) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@dataclass
class ExtraTerm:
    """b E^mu e^{exponent y}, subtracted from the potential like the c-terms."""
    coefficient: complex
    mu: int
    exponent: float

    def to_dict(self) -> Dict:
        return {"coefficient": _pack(self.coefficient), "mu": self.mu, "exponent": self.exponent}

    @classmethod
    def from_dict(cls, data: Dict) -> "ExtraTerm":
        return cls(coefficient=_unpack(data["coefficient"]), mu=int(data["mu"]),
                   exponent=float(data["exponent"]))


@dataclass
class OdeSpec:
    p: complex
    n: float
    r: int
    A: int
    coeffs: Dict[Key, complex] = field(default_factory=dict)
    extra_terms: List[ExtraTerm] = field(default_factory=list)
    shift: int = 0

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if not 0 <= self.A <= self.r - 1:
            raise ValueError(f"A must be in 0..{self.r - 1}, got {self.A}")
        if not self.n > 0:
            raise ValueError(f"n must be positive, got {self.n}")
        self.p = complex(self.p)
        self.coeffs = {(int(mu), int(j)): complex(c) for (mu, j), c in self.coeffs.items()}
        from ode.xi import xi_set
        allowed = xi_set(self.r, self.A)
        bad = sorted(key for key in self.coeffs if key not in allowed)
        if bad:
            raise ValueError(f"coefficient keys {bad} are not admissible for r={self.r}, A={self.A}")
        for term in self.extra_terms:
            if not 0 < term.exponent < self.n + self.r:
                raise ValueError(f"extra term exponent must lie in (0, n+r), got {term.exponent}")

    # -- derived parameters -------------------------------------------------

    @property
    def alpha(self) -> float:
        """Exponent of the confining term, n + r."""
        return self.n + self.r

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi * (self.A / self.r + 1.0 / (self.n + self.r)))

    @property
    def delta(self) -> float:
        """Imaginary period of the shift y -> y + i delta."""
        return 2 * math.pi / (self.n + self.r)

    @property
    def N0(self) -> float:
        x = self.r / (2 * self.n)
        return math.sqrt(math.pi) * gamma_ratio([1 + x], [1.5 + x]).real / self.r

    @property
    def is_z_r(self) -> bool:
        return not any(self.coeffs.values()) and not self.extra_terms

    @property
    def single_key(self) -> Optional[Key]:
        """The (mu, j) pair when exactly one coefficient is non-zero."""
        keys = [key for key, c in self.coeffs.items() if c != 0]
        if len(keys) == 1 and not self.extra_terms:
            return keys[0]
        return None

    def kappa(self, mu: int, j: int) -> float:
        return (self.A * mu - self.r * j) * (self.n + self.r) / self.r + mu

    def L(self, mu: int, j: int) -> int:
        return self.A * mu - self.r * j

    def M(self, mu: int, j: int) -> int:
        return (j + 1) * self.r - (self.A + 1) * mu

    # -- potential ----------------------------------------------------------

    def raw_terms(self, E: complex) -> Iterator[Tuple[complex, float]]:
        """Unmerged (v, kappa) pairs of U - p^2, before the shift phase."""
        E = complex(E)
        yield 1.0 + 0j, float(self.alpha)
        yield -((-1) ** self.A) * E ** self.r, float(self.r)
        for (mu, j), c in sorted(self.coeffs.items()):
            if c != 0:
                yield -c * E ** mu, self.kappa(mu, j)
        for term in self.extra_terms:
            if term.coefficient != 0:
                yield -term.coefficient * E ** term.mu, float(term.exponent)

    def potential_terms(self, E: complex) -> List[Tuple[complex, float]]:
        """
        U(y) - p^2 = sum v_i e^{kappa_i y}, merged on kappa and sorted by
        decreasing kappa. The leading entry is always (1, n + r) up to the
        shift phase.
        """
        merged: List[List] = []
        for v, kappa in self.raw_terms(E):
            if self.shift:
                v *= cmath.exp(-1j * kappa * self.delta * self.shift)
            for item in merged:
                if abs(item[1] - kappa) < 1e-12:
                    item[0] += v
                    break
            else:
                merged.append([v, kappa])
        merged.sort(key=lambda item: -item[1])
        lead, rest = merged[0], merged[1:]
        return [(lead[0], lead[1])] + [(v, k) for v, k in rest if v != 0]

    def potential(self, E: complex, y):
        """U(y) including p^2; y may be an array."""
        total = self.p ** 2
        for v, kappa in self.potential_terms(E):
            total = total + v * np.exp(kappa * y)
        return total

    def shifted(self, times: int = 1) -> "OdeSpec":
        """
        The equation written in y - i delta: at energy E it coincides with
        the original one at q^(-2) E.
        """
        return OdeSpec(p=self.p, n=self.n, r=self.r, A=self.A, coeffs=dict(self.coeffs),
                       extra_terms=list(self.extra_terms), shift=self.shift + times)

    def with_p(self, p: complex) -> "OdeSpec":
        return OdeSpec(p=p, n=self.n, r=self.r, A=self.A, coeffs=dict(self.coeffs),
                       extra_terms=list(self.extra_terms), shift=self.shift)

    # -- constructors -------------------------------------------------------

    @classmethod
    def free_fermion(cls, r: int, k: float, a_map: Mapping[int, complex]) -> "OdeSpec":
        """
        n = r, A = (r-1)/2: c_{2j+1,j} = (-1)^j r a_{2j+1}, so that the
        E-dependent part of U is -r lambda(E) e^{ry}.
        """
        if r % 2 == 0:
            raise ValueError(f"free-fermion specs need odd r, got {r}")
        A = (r - 1) // 2
        coeffs = {}
        for s, value in a_map.items():
            if s % 2 == 0 or not 1 <= s <= r - 2:
                raise ValueError(f"free-fermion invariants need odd s in 1..{r - 2}, got {s}")
            j = (s - 1) // 2
            coeffs[(s, j)] = (-1) ** j * r * complex(value)
        return cls(p=r * k, n=float(r), r=r, A=A, coeffs=coeffs)

    @classmethod
    def from_chain(cls, chain, coeffs: Optional[Mapping[Key, complex]] = None) -> "OdeSpec":
        """The equation matching a lattice chain's r, A, n and twist."""
        return cls(p=chain.p, n=chain.n, r=chain.r, A=chain.A, coeffs=dict(coeffs or {}))

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> Dict:
        return {
            "p": _pack(self.p),
            "n": self.n,
            "r": self.r,
            "A": self.A,
            "coeffs": {f"{mu},{j}": _pack(c) for (mu, j), c in sorted(self.coeffs.items())},
            "extra_terms": [t.to_dict() for t in self.extra_terms],
            "shift": self.shift,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "OdeSpec":
        coeffs = {}
        for key, value in (data.get("coeffs") or {}).items():
            mu, j = (int(x) for x in key.split(","))
            coeffs[(mu, j)] = _unpack(value)
        return cls(
            p=_unpack(data["p"]),
            n=float(data["n"]),
            r=int(data["r"]),
            A=int(data["A"]),
            coeffs=coeffs,
            extra_terms=[ExtraTerm.from_dict(t) for t in data.get("extra_terms") or []],
            shift=int(data.get("shift", 0)),
        )


def exceptional_values(r: int, A: int, n_min: float = 1e-3) -> List[float]:
    """n = r(2j+1)/(2j+1+2wr), j = 0..A-1, w >= 0, down to n_min."""
    out = set()
    for j in range(A):
        w = 0
        while True:
            value = r * (2 * j + 1) / (2 * j + 1 + 2 * w * r)
            if value < n_min:
                break
            out.add(value)
            w += 1
    return sorted(out)


def is_exceptional(r: int, A: int, n: float, tol: float = EXCEPTIONAL_TOL) -> bool:
    return any(abs(n - v) <= tol * v for v in exceptional_values(r, A, n_min=n / 2))


def check_exceptional(spec: OdeSpec) -> None:
    if is_exceptional(spec.r, spec.A, spec.n):
        raise OdeError("exceptional_n", f"n={spec.n} is an exceptional value for r={spec.r}, A={spec.A}",
                       {"n": spec.n, "r": spec.r, "A": spec.A})


@dataclass
class ZeroRow:
    ray: int
    m: int
    E: complex
    theta: complex
    residual: float

    def to_dict(self) -> Dict:
        return {"ray": self.ray, "m": self.m, "E": _pack(self.E),
                "theta": _pack(self.theta), "residual": self.residual}

    @classmethod
    def from_dict(cls, data: Dict) -> "ZeroRow":
        return cls(ray=int(data["ray"]), m=int(data["m"]), E=_unpack(data["E"]),
                   theta=_unpack(data.get("theta", 0.0)), residual=float(data.get("residual", 0.0)))


@dataclass
class ZeroTable:
    rows: List[ZeroRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def rays(self) -> List[int]:
        return sorted({row.ray for row in self.rows})

    def zero(self, ray: int, m: int) -> complex:
        for row in self.rows:
            if row.ray == ray and row.m == m:
                return row.E
        raise KeyError(f"Zero not found: ray={ray}, m={m}")

    def by_ray(self) -> Dict[int, List[complex]]:
        out: Dict[int, List[complex]] = {}
        for row in sorted(self.rows, key=lambda r: (r.ray, r.m)):
            out.setdefault(row.ray, []).append(row.E)
        return out

    def as_map(self) -> Dict[Key, complex]:
        return {(row.ray, row.m): row.E for row in self.rows}

    def max_residual(self) -> float:
        return max((row.residual for row in self.rows), default=0.0)

    def merged(self, other: "ZeroTable") -> "ZeroTable":
        rows = {(row.ray, row.m): row for row in self.rows}
        rows.update({(row.ray, row.m): row for row in other.rows})
        return ZeroTable(rows=[rows[key] for key in sorted(rows)])

    def to_dict(self) -> Dict:
        return {"rows": [row.to_dict() for row in self.rows]}

    @classmethod
    def from_dict(cls, data: Dict) -> "ZeroTable":
        return cls(rows=[ZeroRow.from_dict(row) for row in data.get("rows", [])])


@dataclass
class AsymptoticData:
    """
    Large-E data of a spec. For single-coefficient specs M and L are the
    integers of the (mu, j) pair and g holds g_{2k}; G maps powers of the
    Bohr-Sommerfeld polynomial to coefficients, D holds D_{2j+1} for the
    half-filling family and xi the counterterm prefactors per s.
    """
    M: Optional[int]
    L: Optional[int]
    g: Dict[int, float]
    G: Dict[int, complex]
    D: Dict[int, complex]
    C_p: complex
    xi: Dict[int, complex] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["C_p"] = _pack(self.C_p)
        data["G"] = {k: _pack(v) for k, v in self.G.items()}
        data["D"] = {k: _pack(v) for k, v in self.D.items()}
        data["xi"] = {k: _pack(v) for k, v in self.xi.items()}
        return data
