"""Runtime settings and study definitions for the harness."""

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from dictionary.descriptor import DictionaryError, SchemeDescriptor, scheme_descriptor


@dataclass
class ConfigError(Exception):
    kind: str  # parse | validation
    message: str
    details: Optional[Dict[str, Any]] = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass
class Settings:
    """
    Runtime knobs shared by every command.

    Environment variables override the defaults; CLI flags override both.
    """
    tol: float = 1e-12
    nmax: int = 960
    threads: int = 1
    out_dir: Optional[Path] = None
    slow: bool = False

    def __post_init__(self):
        project_root = Path(__file__).resolve().parent.parent

        env_tol = os.environ.get("SIXVERTEX_TOL")
        if env_tol is not None:
            try:
                self.tol = float(env_tol)
            except ValueError:
                pass
        env_nmax = os.environ.get("SIXVERTEX_NMAX")
        if env_nmax is not None:
            try:
                self.nmax = int(env_nmax)
            except ValueError:
                pass
        env_threads = os.environ.get("SIXVERTEX_THREADS")
        if env_threads is not None:
            try:
                self.threads = max(1, int(env_threads))
            except ValueError:
                pass

        if self.out_dir is None:
            env_out = os.environ.get("SIXVERTEX_OUT")
            self.out_dir = Path(env_out) if env_out else project_root / "out"
        self.out_dir = Path(self.out_dir)

        env_slow = os.environ.get("SIXVERTEX_SLOW")
        if env_slow is not None:
            self.slow = env_slow.strip().lower() in ("1", "true", "yes", "on")

    def override(self, tol: Optional[float] = None, nmax: Optional[int] = None,
                 threads: Optional[int] = None, out_dir=None) -> "Settings":
        """Apply CLI flags; None leaves a field as it is."""
        if tol is not None:
            self.tol = float(tol)
        if nmax is not None:
            self.nmax = int(nmax)
        if threads is not None:
            self.threads = max(1, int(threads))
        if out_dir is not None:
            self.out_dir = Path(out_dir)
        return self

    def apply_file(self, path) -> "Settings":
        """
        Apply the optional [settings] section of an ini file (tol, nmax,
        threads, out, slow). A file without the section leaves everything as is.

        Raises:
            ConfigError(kind="parse") for a missing file or a bad value.
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError("parse", f"config file not found: {path}", {"path": str(path)})
        parser = configparser.ConfigParser()
        try:
            parser.read_string(path.read_text(encoding="utf-8"))
        except configparser.Error as exc:
            raise ConfigError("parse", str(exc), {"path": str(path)}) from exc
        if not parser.has_section("settings"):
            return self
        section = parser["settings"]
        try:
            self.override(tol=section.getfloat("tol"), nmax=section.getint("nmax"),
                          threads=section.getint("threads"), out_dir=section.get("out"))
            slow = section.getboolean("slow")
        except ValueError as exc:
            raise ConfigError("parse", f"bad value in [settings]: {exc}", {"path": str(path)}) from exc
        if slow is not None:
            self.slow = slow
        return self


def parse_index_map(text: str) -> Dict[int, complex]:
    """'1: 0.4, 3: -0.1+0.2j' -> {1: 0.4, 3: (-0.1+0.2j)}."""
    out: Dict[int, complex] = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition(":")
        if not sep:
            raise ValueError(f"expected 'index: value', got {item!r}")
        out[int(key)] = complex(value.strip().replace(" ", ""))
    return out


def parse_int_list(text: str) -> List[int]:
    return [int(x) for x in (text or "").replace(",", " ").split()]


@dataclass
class StudyConfig:
    """
    One scaling study: a chain family, its RG scheme, the N sweep and the
    ODE side it is compared against.

    Invariants (a_s) and ODE coefficients (c_mu) may be given either way
    round; the missing side comes from the dictionary.
    """
    r: int
    A: int
    n: float
    k: float = 0.0
    Sz: int = 0
    family: Optional[str] = None
    mu: Optional[int] = None
    j: Optional[int] = None
    invariants: Dict[int, complex] = field(default_factory=dict)
    coefficients: Dict[int, complex] = field(default_factory=dict)
    Ns: List[int] = field(default_factory=list)
    steps: int = 8
    m_max: int = 4
    s_max: int = 2
    fit_exponent: float = 2.0
    fit_terms: int = 1
    ode_enabled: bool = True
    zero_tol: float = 1e-3
    sum_rule_tol: float = 5e-3
    out_dir: Optional[Path] = None
    name: str = "study"

    def validate(self) -> SchemeDescriptor:
        """
        Check N, the scheme and (r, A) against each other.

        Raises:
            ConfigError(kind="validation") naming the offending field.
        """
        if not self.Ns:
            raise ConfigError("validation", "sweep needs at least one N", {"field": "Ns"})
        bad = [N for N in self.Ns if N <= 0 or N % (2 * self.r) != 0]
        if bad:
            raise ConfigError("validation", f"N must be a positive multiple of 2r={2 * self.r}, got {bad}",
                              {"field": "Ns", "bad": bad})
        if self.invariants and self.coefficients:
            raise ConfigError("validation", "give either invariants or coefficients, not both",
                              {"field": "scheme"})
        if self.m_max < 1 or self.s_max < 1:
            raise ConfigError("validation", f"m_max and s_max must be >= 1, got {self.m_max}, {self.s_max}")
        try:
            desc = scheme_descriptor(self.r, self.A, self.mu, self.j, family=self.family)
        except (DictionaryError, ValueError) as exc:
            raise ConfigError("validation", f"scheme does not fit r={self.r}, A={self.A}: {exc}",
                              {"field": "scheme"}) from exc
        stray = sorted(s for s in self.invariants if s not in desc.exponents)
        if stray:
            raise ConfigError("validation", f"invariants {stray} are not in the {desc.family} scheme",
                              {"field": "invariants", "allowed": desc.invariants})
        if desc.mu is not None:
            stray = sorted(mu for mu in self.coefficients if mu != desc.mu)
            if stray:
                raise ConfigError("validation", f"the scheme carries only c_{desc.mu}, got {stray}",
                                  {"field": "coefficients"})
        return desc

    @classmethod
    def from_parser(cls, parser: configparser.ConfigParser, name: str = "study") -> "StudyConfig":
        try:
            chain = parser["chain"]
            scheme = parser["scheme"] if parser.has_section("scheme") else {}
            sweep = parser["sweep"]
            ode = parser["ode"] if parser.has_section("ode") else {}
            output = parser["output"] if parser.has_section("output") else {}
            config = cls(
                r=int(chain["r"]),
                A=int(chain["A"]),
                n=float(chain["n"]),
                k=float(chain.get("k", "0")),
                Sz=int(chain.get("Sz", "0")),
                family=scheme.get("family") or None,
                mu=int(scheme["mu"]) if scheme.get("mu") else None,
                j=int(scheme["j"]) if scheme.get("j") else None,
                invariants=parse_index_map(scheme.get("invariants", "")),
                coefficients=parse_index_map(scheme.get("coefficients", "")),
                Ns=parse_int_list(sweep["Ns"]),
                steps=int(sweep.get("steps", "8")),
                m_max=int(sweep.get("m_max", "4")),
                s_max=int(sweep.get("s_max", "2")),
                fit_exponent=float(sweep.get("fit_exponent", "2.0")),
                fit_terms=int(sweep.get("fit_terms", "1")),
                ode_enabled=str(ode.get("enabled", "true")).lower() in ("1", "true", "yes", "on"),
                zero_tol=float(ode.get("zero_tol", "1e-3")),
                sum_rule_tol=float(ode.get("sum_rule_tol", "5e-3")),
                out_dir=Path(output["dir"]) if output.get("dir") else None,
                name=output.get("name", name),
            )
        except KeyError as exc:
            raise ConfigError("parse", f"missing section or key: {exc}", {"key": str(exc)}) from exc
        except ValueError as exc:
            raise ConfigError("parse", f"bad value: {exc}") from exc
        return config

    @classmethod
    def from_text(cls, text: str, name: str = "study") -> "StudyConfig":
        # keep key case: 'A' and 'Sz' are distinct from 'a' and 'sz'
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError("parse", str(exc)) from exc
        return cls.from_parser(parser, name=name)

    @classmethod
    def load(cls, path) -> "StudyConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError("parse", f"config file not found: {path}", {"path": str(path)})
        return cls.from_text(path.read_text(encoding="utf-8"), name=path.stem)

    def to_dict(self) -> Dict:
        def pack(m):
            return {str(s): [complex(v).real, complex(v).imag] for s, v in sorted(m.items())}

        return {
            "name": self.name, "r": self.r, "A": self.A, "n": self.n, "k": self.k, "Sz": self.Sz,
            "family": self.family, "mu": self.mu, "j": self.j,
            "invariants": pack(self.invariants), "coefficients": pack(self.coefficients),
            "Ns": list(self.Ns), "steps": self.steps, "m_max": self.m_max, "s_max": self.s_max,
            "fit_exponent": self.fit_exponent, "fit_terms": self.fit_terms,
            "ode_enabled": self.ode_enabled, "zero_tol": self.zero_tol,
            "sum_rule_tol": self.sum_rule_tol,
        }
