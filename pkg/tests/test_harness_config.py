"""Tests for harness/config.py -- settings and study definitions."""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from harness.config import ConfigError, Settings, StudyConfig, parse_index_map, parse_int_list

STUDY = """
[chain]
r = 3
A = 1
n = 5.0
k = 0.05

[scheme]
coefficients = 1: 0.4

[sweep]
Ns = 48 96 192 384
m_max = 3

[ode]
zero_tol = 2e-3

[output]
name = three_sites
"""


def test_settings_env_overrides(monkeypatch):
    """SIXVERTEX_* variables replace the defaults."""
    monkeypatch.setenv("SIXVERTEX_TOL", "1e-9")
    monkeypatch.setenv("SIXVERTEX_NMAX", "480")
    monkeypatch.setenv("SIXVERTEX_THREADS", "4")
    monkeypatch.setenv("SIXVERTEX_OUT", "/tmp/sixvertex-out")
    monkeypatch.setenv("SIXVERTEX_SLOW", "yes")
    s = Settings()
    assert s.tol == 1e-9
    assert s.nmax == 480
    assert s.threads == 4
    assert s.out_dir == Path("/tmp/sixvertex-out")
    assert s.slow is True


def test_settings_ignore_bad_env(monkeypatch):
    """Unparseable values leave the default in place."""
    monkeypatch.setenv("SIXVERTEX_TOL", "tight")
    monkeypatch.setenv("SIXVERTEX_NMAX", "many")
    monkeypatch.delenv("SIXVERTEX_OUT", raising=False)
    s = Settings()
    assert s.tol == 1e-12
    assert s.nmax == 960
    assert s.out_dir.name == "out"


def test_override_keeps_unset_fields(monkeypatch):
    """None flags leave fields alone; threads is clamped to 1."""
    monkeypatch.delenv("SIXVERTEX_TOL", raising=False)
    s = Settings().override(nmax=240, threads=0)
    assert s.nmax == 240
    assert s.threads == 1
    assert s.tol == 1e-12


def test_apply_file_reads_settings_section(monkeypatch):
    """[settings] in a study file replaces env values; absent keys stay."""
    monkeypatch.setenv("SIXVERTEX_THREADS", "4")
    monkeypatch.delenv("SIXVERTEX_SLOW", raising=False)
    text = STUDY + "\n[settings]\nnmax = 240\nslow = true\nout = /tmp/sixvertex-file\n"
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "study.ini"
        path.write_text(text, encoding="utf-8")
        s = Settings().apply_file(path)
    assert s.nmax == 240
    assert s.slow is True
    assert s.out_dir == Path("/tmp/sixvertex-file")
    assert s.threads == 4


def test_apply_file_without_section(monkeypatch):
    monkeypatch.delenv("SIXVERTEX_NMAX", raising=False)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "study.ini"
        path.write_text(STUDY, encoding="utf-8")
        assert Settings().apply_file(path).nmax == 960
        path.write_text("[settings]\nnmax = lots\n", encoding="utf-8")
        with pytest.raises(ConfigError) as exc:
            Settings().apply_file(path)
    assert exc.value.kind == "parse"


def test_parse_index_map():
    assert parse_index_map("1: 0.4, 3: -0.1+0.2j") == {1: 0.4, 3: complex(-0.1, 0.2)}
    assert parse_index_map("") == {}
    with pytest.raises(ValueError):
        parse_index_map("0.4")


def test_parse_int_list():
    assert parse_int_list("48, 96 192") == [48, 96, 192]


def test_from_text():
    """Sections map onto the dataclass fields; key case is kept."""
    config = StudyConfig.from_text(STUDY)
    assert (config.r, config.A, config.n, config.k) == (3, 1, 5.0, 0.05)
    assert config.coefficients == {1: 0.4}
    assert config.invariants == {}
    assert config.Ns == [48, 96, 192, 384]
    assert config.m_max == 3
    assert config.zero_tol == 2e-3
    assert config.name == "three_sites"
    assert config.validate().family == "half-filling"


def test_missing_section_is_parse_error():
    with pytest.raises(ConfigError) as exc:
        StudyConfig.from_text("[chain]\nr = 3\nA = 1\nn = 2\n")
    assert exc.value.kind == "parse"


def test_load_missing_file():
    with tempfile.TemporaryDirectory() as tmp:
        with pytest.raises(ConfigError) as exc:
            StudyConfig.load(Path(tmp) / "absent.ini")
    assert exc.value.kind == "parse"


def test_load_uses_file_stem():
    text = STUDY.replace("[output]\nname = three_sites\n", "")
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "mine.ini"
        path.write_text(text, encoding="utf-8")
        assert StudyConfig.load(path).name == "mine"


def test_validation_errors():
    """N off the 2r grid, both sides given, a foreign family."""
    base = dict(r=3, A=1, n=5.0, coefficients={1: 0.4}, Ns=[48, 96])
    with pytest.raises(ConfigError) as exc:
        StudyConfig(**{**base, "Ns": [48, 50]}).validate()
    assert exc.value.kind == "validation"
    assert exc.value.details["bad"] == [50]
    with pytest.raises(ConfigError):
        StudyConfig(**base, invariants={1: 0.1}).validate()
    with pytest.raises(ConfigError):
        StudyConfig(**{**base, "family": "half"}).validate()
    with pytest.raises(ConfigError):
        StudyConfig(**{**base, "Ns": []}).validate()


def test_stray_invariant_rejected():
    """r=5, (2,0) carries a_1, a_2, a_4 only."""
    config = StudyConfig(r=5, A=1, n=3.0, mu=2, j=0, invariants={3: 0.1}, Ns=[40])
    with pytest.raises(ConfigError) as exc:
        config.validate()
    assert exc.value.details["field"] == "invariants"
