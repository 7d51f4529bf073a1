"""Experiment config parsing and validation."""

from fractions import Fraction
from pathlib import Path

import pytest

from froblab.config import Teich, load_config, parse_blocks
from froblab.errors import ConfigError, InvalidLift, NonIntegralCoefficient
from froblab.local import teichmuller
from froblab.residue import GF

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

BASE = """
field      { p = 2, prec = 24 }
map        { s = 1, N = 1, P = ["x0*x1", "0"] }
variety    { H = ["x0 - x1"] }
experiment { kind = tv_gap, bound = 3 }
"""


def test_parse_values():
    blocks = parse_blocks("""
    # comment line
    a { n = -3, f = 1/4, s = "x0 - x1", w = word, l = [1, [2, 3]], t = T[0, 1], c = random(7) }
    """)
    a = blocks["a"]
    assert a["n"] == -3 and a["f"] == Fraction(1, 4)
    assert a["s"] == "x0 - x1" and a["w"] == "word"
    assert a["l"] == [1, [2, 3]]
    assert isinstance(a["t"], Teich)
    assert a["c"] == ("random", [7])


@pytest.mark.parametrize("text", [
    "a { n = 1 ",
    "a { n = 1 } a { n = 2 }",
    "a { = 1 }",
    "a { n = $ }",
])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_blocks(text)


def test_load_base_config():
    cfg = load_config(BASE)
    assert cfg.kind == "tv_gap" and cfg.get("bound") == 3
    assert cfg.field.p == 2 and cfg.field.prec == 24
    assert cfg.F.N == 1 and not cfg.F.is_pure_power()
    assert len(cfg.variety.generators) == 1
    assert load_config(BASE, precision=40).field.prec == 40


def test_teichmuller_point_literal():
    cfg = load_config(CONFIGS / "backward_dml_q4.cfg")
    x = cfg.point()
    assert x[1] == teichmuller(GF(2, 2).gen, cfg.field)


@pytest.mark.parametrize("old,new,exc", [
    ("kind = tv_gap", "kind = plot", ConfigError),
    ('variety    { H = ["x0 - x1"] }', "", ConfigError),
    ("field      { p = 2, prec = 24 }", "", ConfigError),
    ('P = ["x0*x1", "0"]', 'P = ["1/2*x0^2", "0"]', NonIntegralCoefficient),
    ('P = ["x0*x1", "0"]', 'P = ["x0^3", "1/2*x1^2"]', InvalidLift),
    ("s = 1, N = 1", "p = 3, s = 1, N = 1", ConfigError),
    ("experiment {", "plot { x = 1 }\nexperiment {", ConfigError),
])
def test_load_errors(old, new, exc):
    with pytest.raises(exc):
        load_config(BASE.replace(old, new))


def test_bad_point_rejected_early():
    text = BASE.replace("kind = tv_gap, bound = 3", "kind = backward_dml, point = 5")
    with pytest.raises(ConfigError):
        load_config(text)


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.cfg")), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    cfg = load_config(path)
    assert cfg.name == path.stem
    header = cfg.describe()
    assert header["kind"] == cfg.kind
