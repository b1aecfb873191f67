"""
Conformal levels of the Z_r invariant chain at the free fermion point
(odd r, q = i).

A chiral state is a set of holes n^- and particles n^+ on each ray a in
the vacuum distribution m = 1, 2, ... of the integers labelling the roots.
Its asymptotic coefficients D_{+,s} follow from the closed-form D_+, and
D_{+,r} is the first local integral of motion I_1.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from special.bernoulli import bernoulli_poly

logger = logging.getLogger("sixvertex.harness.cft_levels")


@dataclass
class CftLevelSpec:
    holes: Dict[int, List[int]] = field(default_factory=dict)
    particles: Dict[int, List[int]] = field(default_factory=dict)
    Sz: int = 0
    s: int = 0
    Lbar: int = 0
    N: Optional[int] = None

    def validate(self, r: int) -> None:
        for label, occupation in (("holes", self.holes), ("particles", self.particles)):
            for a, ns in occupation.items():
                if not 1 <= a <= r:
                    raise ValueError(f"{label} ray must be in 1..{r}, got {a}")
                if any(x < 1 for x in ns) or list(ns) != sorted(set(ns)):
                    raise ValueError(f"{label} on ray {a} must be distinct positive integers, got {ns}")
        if self.Lbar < 0:
            raise ValueError(f"Lbar must be >= 0, got {self.Lbar}")
        if self.N is not None and (self.N <= 0 or self.N % (2 * r) != 0):
            raise ValueError(f"N must be a positive multiple of 2r={2 * r}, got {self.N}")

    @property
    def M(self) -> int:
        """Holes minus particles."""
        return sum(len(v) for v in self.holes.values()) - sum(len(v) for v in self.particles.values())

    @property
    def occupation_sum(self) -> float:
        return sum(x - 0.5 for v in self.holes.values() for x in v) + \
            sum(x - 0.5 for v in self.particles.values() for x in v)

    @classmethod
    def from_text(cls, holes: str = "", particles: str = "", **kwargs) -> "CftLevelSpec":
        """'1:1,2; 3:1' -> {1: [1, 2], 3: [1]}."""
        return cls(holes=_parse_occupation(holes), particles=_parse_occupation(particles), **kwargs)


def _parse_occupation(text: str) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = {}
    for item in (text or "").split(";"):
        item = item.strip()
        if not item:
            continue
        ray, sep, rest = item.partition(":")
        if not sep:
            raise ValueError(f"expected 'ray: n1,n2,..', got {item!r}")
        out[int(ray)] = sorted(int(x) for x in rest.split(",") if x.strip())
    return out


@dataclass
class CftLevels:
    I1_from_coefficient: complex
    I1_closed: float
    I1_conjecture: float
    Ibar1: float
    K_phase: Optional[complex]
    degeneracy: Optional[int]
    m: int
    w: int
    L: float
    case: str

    def to_dict(self) -> Dict:
        k = self.K_phase
        return {
            "I1_from_coefficient": [self.I1_from_coefficient.real, self.I1_from_coefficient.imag],
            "I1_closed": self.I1_closed, "I1_conjecture": self.I1_conjecture,
            "Ibar1": self.Ibar1, "K_phase": None if k is None else [k.real, k.imag],
            "degeneracy": self.degeneracy, "m": self.m, "w": self.w, "L": self.L,
            "case": self.case,
        }


def _check(r: int, k: float) -> None:
    if r < 1 or r % 2 == 0:
        raise ValueError(f"free fermion levels need odd r, got {r}")
    if not -0.5 < k < 0.5:
        raise ValueError(f"k must lie in (-1/2, 1/2), got {k}")


def vacuum_coefficients(r: int, k: float, s_max: int) -> Dict[int, float]:
    """D_{+,s} of the ground state: r B_{s/r+1}(1/2 + k) / (s/r + 1) for r | s, else 0."""
    _check(r, k)
    out = {}
    for s in range(1, s_max + 1):
        if s % r:
            out[s] = 0.0
            continue
        m = s // r + 1
        out[s] = r * float(bernoulli_poly(m, 0.5 + k)) / m
    return out


def excited_coefficients(spec: CftLevelSpec, r: int, k: float, s_max: int) -> Dict[int, complex]:
    """D_{+,s} with the hole and particle contributions added to the vacuum."""
    spec.validate(r)
    out = {s: complex(v) for s, v in vacuum_coefficients(r, k, s_max).items()}
    for s in out:
        total = 0j
        for a, ns in spec.holes.items():
            phase = cmath.exp(2j * math.pi * a * s / r)
            total += sum(phase * (x - 0.5 + k) ** (s / r) for x in ns)
        for a, ns in spec.particles.items():
            phase = cmath.exp(1j * math.pi * (2 * a + 1) * s / r)
            total -= sum(phase * (x - 0.5 - k) ** (s / r) for x in ns)
        out[s] += total
    return out


def _case(parity: int, k: float) -> str:
    if k < 0:
        return "i" if parity == 0 else "iii"
    return "ii" if parity == 0 else "iv"


def _tilde(case: str, r: int, m: int, s: int):
    m_tilde = abs(r - s - m) if case in ("i", "iv") else abs(s - m)
    s_tilde = {"i": s, "ii": -s, "iii": r - s, "iv": s - r}[case]
    return m_tilde, s_tilde


def free_fermion_cft_levels(spec: CftLevelSpec, r: int, k: float) -> CftLevels:
    """
    I_1 three ways (coefficient D_{+,r}, closed form in M, the conjectured
    form at n = r), the antichiral partner Ibar_1 and, when N is known, the
    r-site translation eigenvalue.

    Raises:
        ValueError for k = 0, where the conjectured assignment is ambiguous,
        or when (s + Sz)/r is not an integer.
    """
    _check(r, k)
    if k == 0:
        raise ValueError("k = 0 is ambiguous between cases; use a small non-zero twist")
    spec.validate(r)
    s = (spec.N // 2 - spec.Sz) % r if spec.N is not None else spec.s % r
    if (s + spec.Sz) % r:
        raise ValueError(f"(s + Sz)/r must be an integer, got s={s}, Sz={spec.Sz}")

    M = spec.M
    w, m = divmod(M, r)
    I1_coefficient = excited_coefficients(spec, r, k, r)[r]
    sigma = spec.occupation_sum
    I1_closed = r / 2 * (k + M / r) ** 2 - M ** 2 / (2 * r) - r / 24 + sigma
    L = sigma - m * (w + 1) ** 2 / 2 - (r - m) * w ** 2 / 2

    case = _case(((s + spec.Sz) // r - spec.Sz) % 2, k)
    m_tilde, s_tilde = _tilde(case, r, m, s)
    X = k + w + m / r + s_tilde / (2 * r)
    p = (spec.Sz + 2 * r * X) / 2
    p_bar = (spec.Sz - 2 * r * X) / 2
    chiral_m, anti_m = (m, m_tilde) if case in ("i", "iv") else (m_tilde, m)
    I1_conj = p ** 2 / (2 * r) - r / 24 + chiral_m * (r - chiral_m) / (2 * r) + L
    Ibar1 = p_bar ** 2 / (2 * r) - r / 24 + anti_m * (r - anti_m) / (2 * r) + spec.Lbar

    K = None
    if spec.N is not None:
        sign = (-1) ** (((r - 1) // 2 * (spec.N // 2 - spec.Sz) + m + r * w) % 2)
        K = (sign * cmath.exp(-0.5j * math.pi * s_tilde)
             * cmath.exp(2j * math.pi * r / spec.N * (I1_conj - Ibar1)))
    degeneracy = math.comb(r, m) if abs(L) < 1e-12 else None
    logger.debug("r=%d M=%d (m=%d, w=%d) case %s: I1=%.10g Ibar1=%.10g", r, M, m, w, case,
                 I1_closed, Ibar1)
    return CftLevels(I1_from_coefficient=complex(I1_coefficient), I1_closed=float(I1_closed),
                     I1_conjecture=float(I1_conj), Ibar1=float(Ibar1), K_phase=K,
                     degeneracy=degeneracy, m=m, w=w, L=float(L), case=case)
