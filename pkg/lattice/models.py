"""Data models for the lattice layer: chain parameters, RG schemes, root sets."""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional

import numpy as np

from special.gamma import gamma_ratio


class SchemeKind(str, Enum):
    STANDARD = "standard"
    BARRED = "barred"
    CPT = "cpt"


def _pack(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unpack(v: Any) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@dataclass
class ChainSpec:
    """
    An r-site periodic six-vertex chain.

    gamma = pi A / r + pi / (n + r). N must be a multiple of 2r.
    """
    N: int
    r: int
    A: int
    n: float
    k: float = 0.0
    Sz: int = 0

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.N <= 0 or self.N % (2 * self.r) != 0:
            raise ValueError(f"N must be a positive multiple of 2r={2 * self.r}, got {self.N}")
        if not 0 <= self.A <= self.r - 1:
            raise ValueError(f"A must be in 0..{self.r - 1}, got {self.A}")
        if not self.n > 0:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 < self.gamma < math.pi:
            raise ValueError(f"gamma must lie in (0, pi), got {self.gamma}")
        if abs(self.Sz) > self.N // 2:
            raise ValueError(f"|Sz| must be <= N/2, got {self.Sz}")

    @property
    def gamma(self) -> float:
        return math.pi * self.A / self.r + math.pi / (self.n + self.r)

    @property
    def q(self) -> complex:
        return complex(math.cos(self.gamma), math.sin(self.gamma))

    @property
    def omega(self) -> complex:
        return complex(math.cos(math.pi * self.k), math.sin(math.pi * self.k))

    @property
    def p(self) -> float:
        return 0.5 * (self.n + self.r) * self.k

    @property
    def p_bar(self) -> float:
        return -self.p

    @property
    def M(self) -> int:
        """Number of Bethe roots, N/2 - Sz."""
        return self.N // 2 - self.Sz

    @property
    def N0(self) -> float:
        x = self.r / (2 * self.n)
        return math.sqrt(math.pi) * gamma_ratio([1 + x], [1.5 + x]).real / self.r

    @property
    def nu(self) -> float:
        return 2 * self.n / (self.n + self.r)

    @property
    def scale(self) -> float:
        """N / (r N_0), the ratio every RG invariant is measured against."""
        return self.N / (self.r * self.N0)

    @property
    def root_exponent(self) -> float:
        """Power of `scale` that makes the small roots finite."""
        return 2 * self.n / (self.r * (self.n + self.r))

    def with_(self, **changes) -> "ChainSpec":
        data = self.to_dict()
        data.update(changes)
        return ChainSpec.from_dict(data)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "ChainSpec":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


@dataclass
class RgEntry:
    """One RG invariant: the value a_s held fixed with exponent d_s."""
    s: int
    d: float
    value: complex
    log_modified: bool = False

    def to_dict(self) -> Dict:
        return {"s": self.s, "d": self.d, "value": _pack(self.value),
                "log_modified": self.log_modified}

    @classmethod
    def from_dict(cls, data: Dict) -> "RgEntry":
        return cls(s=int(data["s"]), d=float(data["d"]), value=_unpack(data["value"]),
                   log_modified=bool(data.get("log_modified", False)))


@dataclass
class RgScheme:
    """
    A scaling scheme: the RG invariants kept fixed as N grows.

    Invariants not listed are zero. For the cpt kind each entry holds a
    real b_{2j+1} and `d` is unused.
    """
    kind: str = SchemeKind.STANDARD.value
    entries: List[RgEntry] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in {k.value for k in SchemeKind}:
            raise ValueError(f"Unknown scheme kind: {self.kind}")
        seen = set()
        for e in self.entries:
            if e.s in seen:
                raise ValueError(f"RG invariant s={e.s} listed twice")
            seen.add(e.s)

    def validate(self, r: int) -> None:
        """Check the entries against the chain period r."""
        for e in self.entries:
            if not 1 <= e.s <= r - 1:
                raise ValueError(f"RG invariant index must be in 1..{r - 1}, got {e.s}")
            if e.log_modified and 2 * e.s != r:
                raise ValueError(f"log-modified invariant only allowed for s = r/2, got s={e.s}, r={r}")
            if self.kind == SchemeKind.CPT.value:
                if e.s % 2 == 0:
                    raise ValueError(f"CP/T scheme takes odd indices only, got s={e.s}")
                if complex(e.value).imag != 0:
                    raise ValueError(f"CP/T invariants are real, got {e.value}")

    def value(self, s: int) -> complex:
        for e in self.entries:
            if e.s == s:
                return complex(e.value)
        return 0j

    def entry(self, s: int) -> Optional[RgEntry]:
        for e in self.entries:
            if e.s == s:
                return e
        return None

    def scaled(self, t: float) -> "RgScheme":
        """The same scheme with every invariant multiplied by t."""
        return RgScheme(kind=self.kind, entries=[
            RgEntry(e.s, e.d, complex(e.value) * t, e.log_modified) for e in self.entries])

    @property
    def is_trivial(self) -> bool:
        return all(complex(e.value) == 0 for e in self.entries)

    @classmethod
    def half_filling(cls, r: int, values: Mapping[int, complex]) -> "RgScheme":
        """Odd invariants a_{2j+1} with d = 1 - (2j+1)/r; even ones zero."""
        entries = []
        for s, v in sorted(values.items()):
            if s % 2 == 0:
                raise ValueError(f"half-filling scheme takes odd s only, got {s}")
            entries.append(RgEntry(s=s, d=1 - s / r, value=complex(v)))
        return cls(kind=SchemeKind.STANDARD.value, entries=entries)

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, data: Dict) -> "RgScheme":
        return cls(kind=data.get("kind", SchemeKind.STANDARD.value),
                   entries=[RgEntry.from_dict(e) for e in data.get("entries", [])])


@dataclass
class Inhomogeneities:
    """The r inhomogeneities eta_l of one period, in canonical phase order."""
    eta: np.ndarray

    def __post_init__(self):
        self.eta = np.asarray(self.eta, dtype=complex)
        if self.eta.ndim != 1 or len(self.eta) == 0:
            raise ValueError("eta must be a non-empty 1-d array")
        if np.any(self.eta == 0):
            raise ValueError("inhomogeneities must be non-zero")

    @property
    def r(self) -> int:
        return len(self.eta)

    def power_sum(self, s: int) -> complex:
        """sum_l eta_l^s (s may be negative)."""
        return complex(np.sum(self.eta ** s))

    def product(self) -> complex:
        return complex(np.prod(self.eta))

    def to_dict(self) -> Dict:
        return {"eta": [_pack(e) for e in self.eta]}

    @classmethod
    def from_dict(cls, data: Dict) -> "Inhomogeneities":
        return cls(eta=np.array([_unpack(e) for e in data["eta"]]))


@dataclass
class BranchState:
    """Continuous logarithms carried between Newton solves."""
    plus: np.ndarray    # log(eta_l + q zeta_j), shape (M, r)
    minus: np.ndarray   # log(eta_l + zeta_j / q)
    pair_plus: np.ndarray   # log(zeta_i - q^2 zeta_j), shape (M, M)
    pair_minus: np.ndarray  # log(zeta_i - q^-2 zeta_j)
    I: np.ndarray       # branch integers, one per equation


@dataclass
class BetheRootSet:
    """
    A solved set of Bethe roots with its ray decomposition.

    ray[j] is in 1..r; ray_index[j] counts from 1 by increasing modulus
    within the ray.
    """
    roots: np.ndarray
    ray: np.ndarray = None
    ray_index: np.ndarray = None
    flags: List[str] = field(default_factory=list)
    residual: float = float("nan")
    branch: Optional[BranchState] = None

    def __post_init__(self):
        self.roots = np.asarray(self.roots, dtype=complex)
        if self.ray is not None:
            self.ray = np.asarray(self.ray, dtype=int)
        if self.ray_index is not None:
            self.ray_index = np.asarray(self.ray_index, dtype=int)

    def __len__(self) -> int:
        return len(self.roots)

    def ray_sizes(self) -> Dict[int, int]:
        if self.ray is None:
            return {}
        labels, counts = np.unique(self.ray, return_counts=True)
        return {int(a): int(c) for a, c in zip(labels, counts)}

    def by_ray(self) -> Dict[int, np.ndarray]:
        """Roots of each ray, ordered by ray_index."""
        if self.ray is None:
            raise ValueError("root set has no ray labels; run classify_rays first")
        out = {}
        for a in sorted(set(int(x) for x in self.ray)):
            mask = self.ray == a
            order = np.argsort(self.ray_index[mask])
            out[a] = self.roots[mask][order]
        return out

    def root(self, a: int, m: int) -> complex:
        """zeta_m^(a)."""
        return complex(self.by_ray()[a][m - 1])

    def to_dict(self) -> Dict:
        return {
            "roots": [_pack(z) for z in self.roots],
            "ray": None if self.ray is None else [int(a) for a in self.ray],
            "ray_index": None if self.ray_index is None else [int(m) for m in self.ray_index],
            "flags": list(self.flags),
            "residual": float(self.residual),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "BetheRootSet":
        return cls(
            roots=np.array([_unpack(z) for z in data["roots"]], dtype=complex),
            ray=None if data.get("ray") is None else np.array(data["ray"], dtype=int),
            ray_index=None if data.get("ray_index") is None else np.array(data["ray_index"], dtype=int),
            flags=list(data.get("flags", [])),
            residual=float(data.get("residual", float("nan"))),
        )


@dataclass
class SumRuleSeries:
    """Finite-N sum rules h_s and their large-N extrapolation."""
    s: int
    Ns: List[int]
    h: List[complex]
    h_reg: List[complex]
    limit: complex = complex("nan")
    exponent: float = float("nan")
    residual: float = float("nan")

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.Ns, self.Ns[1:])):
            raise ValueError(f"N values must be strictly increasing, got {self.Ns}")

    def to_dict(self) -> Dict:
        return {
            "s": self.s, "Ns": list(self.Ns),
            "h": [_pack(v) for v in self.h],
            "h_reg": [_pack(v) for v in self.h_reg],
            "limit": _pack(self.limit), "exponent": self.exponent, "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SumRuleSeries":
        return cls(
            s=int(data["s"]), Ns=list(data["Ns"]),
            h=[_unpack(v) for v in data["h"]],
            h_reg=[_unpack(v) for v in data["h_reg"]],
            limit=_unpack(data.get("limit", [float("nan"), 0.0])),
            exponent=float(data.get("exponent", float("nan"))),
            residual=float(data.get("residual", float("nan"))),
        )


@dataclass
class SolverError(Exception):
    """Structured error raised by the lattice layer."""
    kind: str  # stagnation | degeneracy | branch | construction | continuation | evaluation
    message: str
    details: Optional[Dict[str, Any]] = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"
