import json
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from exclusionkit.config import Config, config_from_dict, load_config, thread_cap
from exclusionkit.covering import DensityGrid
from exclusionkit.densityio import atomic_write_text, format_density, parse_density, read_density, write_density
from exclusionkit.errors import ConfigError, ValidationError
from exclusionkit.samples import figure_density, random_density


# --- config ---------------------------------------------------------------------------------------

def test_defaults_and_hash_stable():
    a, b = Config(), config_from_dict({})
    assert a.hash() == b.hash()
    assert len(a.hash()) == 16
    assert a.to_dict()["bounds"]["C_A"] == 0.021


def test_hash_changes_with_content():
    assert Config().hash() != config_from_dict({"bounds": {"C_A": 0.03}}).hash()
    assert Config().hash() != Config().with_tol(1e-10).hash()


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="unknown top-level"):
        config_from_dict({"colour": 1})
    with pytest.raises(ConfigError, match="unknown key"):
        config_from_dict({"bounds": {"C_X": 1}})


def test_invalid_values():
    with pytest.raises(ConfigError):
        config_from_dict({"bounds": {"C_A": 100.0}})
    with pytest.raises(ConfigError):
        config_from_dict({"resolutions": {"n3_points": 61}})
    with pytest.raises(ConfigError):
        config_from_dict({"resolutions": {"richardson_points": [200]}})
    with pytest.raises(ConfigError):
        config_from_dict({"thresholds": {"a": 9, "b": 8}})
    with pytest.raises(ConfigError):
        config_from_dict({"seed": "x"})
    with pytest.raises(ConfigError):
        config_from_dict({"primed": {"c1p": 1.0}})
    with pytest.raises(ConfigError):
        Config().with_tol(2.0)


def test_explicit_primed_used():
    cfg = config_from_dict({"primed": {"c1p": 0.01, "c2p": 0.02, "c3p": 0.03}})
    assert cfg.primed_constants.c1p == 0.01


def test_load_config(tmp_path):
    assert load_config(None) == Config()
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"seed": 7, "tolerances": {"root": 1e-10}}))
    cfg = load_config(p)
    assert cfg.seed == 7 and cfg.tolerances.root == 1e-10
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_thread_cap(monkeypatch):
    monkeypatch.delenv("EXCLUSIONKIT_THREADS", raising=False)
    assert thread_cap() is None
    monkeypatch.setenv("EXCLUSIONKIT_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("EXCLUSIONKIT_THREADS", "many")
    with pytest.raises(ConfigError):
        thread_cap()


# --- density files --------------------------------------------------------------------------------

def test_roundtrip_bit_identical(tmp_path):
    rho = random_density(np.random.default_rng(1), 123.4, n=32, side=1.7)
    path = write_density(tmp_path / "d.txt", rho)
    back, N = read_density(path)
    assert np.array_equal(back.cells, rho.cells) and back.side == rho.side
    assert N == rho.total_mass
    assert format_density(back) == path.read_text()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([1, 2, 8, 16]), st.floats(0.1, 10))
def test_roundtrip_property(seed, n, side):
    cells = np.random.default_rng(seed).random((n, n)) * 1e3
    rho = DensityGrid(cells, side)
    back, _ = parse_density(format_density(rho))
    assert np.array_equal(back.cells, rho.cells)


def _text(rows, n=2, N=None):
    N = N if N is not None else sum(sum(r) for r in rows) * 0.25
    return "# side=1.0\n# n=%d\n# N=%r\n" % (n, N) + "\n".join(",".join(map(str, r)) for r in rows) + "\n"


def test_density_validation_errors():
    assert parse_density(_text([[1, 2], [3, 4]]))[1] == 2.5
    with pytest.raises(ValidationError, match="power of 2"):
        parse_density(_text([[1] * 3] * 3, n=3))
    with pytest.raises(ValidationError, match="payload rows"):
        parse_density(_text([[1, 2]]))
    with pytest.raises(ValidationError, match="non-numeric"):
        parse_density(_text([[1, "x"], [3, 4]], N=2.0))
    with pytest.raises(ValidationError, match="integrates"):
        parse_density(_text([[1, 2], [3, 4]], N=3.0))
    with pytest.raises(ValidationError):
        parse_density(_text([[1, -2], [3, 4]], N=1.5))
    with pytest.raises(ValidationError, match="header"):
        parse_density("side=1\n")
    with pytest.raises(ValidationError):
        read_density("/nonexistent/file")


def test_atomic_write_leaves_no_temp(tmp_path):
    p = atomic_write_text(tmp_path / "sub" / "out.txt", "hello")
    assert p.read_text() == "hello"
    atomic_write_text(p, "again")
    assert p.read_text() == "again"
    assert os.listdir(p.parent) == ["out.txt"]


def test_figure_density_file(tmp_path):
    rho = figure_density()
    back, N = read_density(write_density(tmp_path / "fig.txt", rho))
    assert N == pytest.approx(28.0)
