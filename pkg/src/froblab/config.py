"""Plain-text experiment configs.

A config is a sequence of blocks ``name { key = value, ... }``.  Entries
are separated by commas or newlines and ``#`` starts a comment.  Values are
integers, fractions ``a/b``, quoted strings, bare words, lists ``[...]`` and
Teichmüller lifts ``T[c_0, ..., c_(r-1)]`` of residue elements.

    field      { p = 2, r = 2, prec = 40 }
    map        { s = 1, N = 1, P = ["0", "0"] }
    variety    { H = ["x0 - x1"] }
    experiment { kind = backward_dml, depth = 12, point = [1, T[0, 1]] }
    output     { path = "results" }
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .dynamics import validate_lift
from .errors import ConfigError
from .local import LocalField, teichmuller
from .proj import Variety, normalize_point

KINDS = ("tv_gap", "dmm_check", "backward_dml", "tilt_demo")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<comment>\#[^\n]*) | (?P<nl>\n)
  | (?P<string>"[^"\n]*") | (?P<frac>-?\d+/\d+) | (?P<int>-?\d+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_.]*) | (?P<punct>[{}\[\](),=])
""", re.VERBOSE)


class Teich:
    """Placeholder for T[c_0, ...] until the field is known."""

    def __init__(self, coeffs):
        self.coeffs = coeffs

    def __repr__(self):
        return f"T{self.coeffs}"


def _tokenize(text):
    pos = 0
    line = 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ConfigError(f"line {line}: unexpected character {text[pos]!r}")
        kind = m.lastgroup
        val = m.group()
        if kind == "nl":
            out.append(("nl", val, line))
            line += 1
        elif kind not in ("ws", "comment"):
            out.append((kind, val, line))
        pos = m.end()
    out.append(("eof", "", line))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, skip_nl=True):
        while skip_nl and self.toks[self.i][0] == "nl":
            self.i += 1
        return self.toks[self.i]

    def take(self, expected=None, skip_nl=True):
        tok = self.peek(skip_nl)
        if expected is not None and tok[1] != expected:
            raise ConfigError(f"line {tok[2]}: expected {expected!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def blocks(self):
        out = {}
        while self.peek()[0] != "eof":
            kind, name, line = self.take()
            if kind != "word":
                raise ConfigError(f"line {line}: expected a block name, found {name!r}")
            if name in out:
                raise ConfigError(f"line {line}: duplicate block {name!r}")
            self.take("{")
            out[name] = self.entries()
        return out

    def entries(self):
        items = {}
        while True:
            kind, key, line = self.take()
            if key == "}":
                return items
            if kind == "punct" and key == ",":
                continue
            if kind != "word":
                raise ConfigError(f"line {line}: expected a key, found {key!r}")
            self.take("=")
            items[key] = self.value()

    def value(self):
        kind, val, line = self.take()
        if kind == "int":
            return int(val)
        if kind == "frac":
            return Fraction(val)
        if kind == "string":
            return val[1:-1]
        if kind == "word":
            if val == "T" and self.peek()[1] == "[":
                self.take("[")
                return Teich(self.list_items())
            if self.peek(skip_nl=False)[1] == "(":
                # call syntax such as random(7)
                self.take("(")
                args = []
                while self.peek()[1] != ")":
                    args.append(self.value())
                    if self.peek()[1] == ",":
                        self.take(",")
                self.take(")")
                return (val, args)
            return val
        if val == "[":
            return self.list_items()
        raise ConfigError(f"line {line}: unexpected {val!r}")

    def list_items(self):
        items = []
        while True:
            if self.peek()[1] == "]":
                self.take("]")
                return items
            items.append(self.value())
            if self.peek()[1] == ",":
                self.take(",")


def parse_blocks(text):
    return _Parser(text).blocks()


class ExperimentConfig:
    """A validated experiment: field, map, variety, kind, parameters, output path."""

    def __init__(self, field, F, variety, kind, params, output, name="experiment"):
        self.field = field
        self.F = F
        self.variety = variety
        self.kind = kind
        self.params = params
        self.output = output
        self.name = name

    def get(self, key, default=None):
        return self.params.get(key, default)

    def point(self, key="point"):
        raw = self.params.get(key)
        if raw is None:
            return None
        return make_point(raw, self.field)

    def describe(self):
        out = {"name": self.name, "kind": self.kind, "field": repr(self.field),
               "prec": self.field.prec}
        out.update({f"map.{k}": v for k, v in self.F.describe().items()})
        if self.variety is not None:
            out["variety"] = [str(g) for g in self.variety.generators]
        for k in sorted(self.params):
            if k != "kind":
                out[k] = _plain(self.params[k])
        return out


def _plain(v):
    if isinstance(v, list):
        return [_plain(x) for x in v]
    if isinstance(v, tuple):
        return f"{v[0]}(" + ", ".join(str(_plain(a)) for a in v[1]) + ")"
    if isinstance(v, (Fraction, Teich)):
        return str(v)
    return v


def make_field(block, precision=None):
    try:
        p = block["p"]
        r = block.get("r", 1)
        prec = precision if precision is not None else block.get("prec", 32)
        return LocalField(p, r, eisenstein=block.get("eisenstein"), prec=prec,
                          modulus=block.get("modulus"))
    except KeyError as exc:
        raise ConfigError(f"field block is missing {exc}") from None
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad field block: {exc}") from None


def make_scalar(v, field):
    if isinstance(v, Teich):
        return teichmuller(field.residue(v.coeffs), field)
    if isinstance(v, list):
        return field(v)
    if isinstance(v, (int, Fraction)):
        return field(v)
    raise ConfigError(f"cannot read {v!r} as a field element")


def make_point(raw, field):
    if not isinstance(raw, list):
        raise ConfigError(f"a point must be a coordinate list, got {raw!r}")
    return normalize_point([make_scalar(c, field) for c in raw])


def load_config(source, precision=None):
    """Parse a config from a path or from text; ``precision`` overrides field.prec."""
    if isinstance(source, Path) or (isinstance(source, str) and "{" not in source):
        path = Path(source)
        text = path.read_text()
        name = path.stem
    else:
        text = source
        name = "experiment"
    blocks = parse_blocks(text)
    for need in ("field", "map", "experiment"):
        if need not in blocks:
            raise ConfigError(f"missing {need} block")
    unknown = set(blocks) - {"field", "map", "variety", "experiment", "output"}
    if unknown:
        raise ConfigError(f"unknown block(s) {sorted(unknown)}")
    field = make_field(blocks["field"], precision)
    mb = blocks["map"]
    p = mb.get("p", field.p)
    if p != field.p:
        raise ConfigError(f"map prime {p} differs from field prime {field.p}")
    try:
        N = mb["N"]
        P = mb["P"]
    except KeyError as exc:
        raise ConfigError(f"map block is missing {exc}") from None
    coefficient_field = field if field.r > 1 else None
    F = validate_lift(p, mb.get("s", 1), N, P, coefficient_field)
    variety = None
    if "variety" in blocks:
        gens = blocks["variety"].get("H")
        if not isinstance(gens, list) or not gens:
            raise ConfigError("variety block needs H = [polynomial strings]")
        variety = Variety.parse(gens, N, p)
    params = dict(blocks["experiment"])
    kind = params.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"experiment kind must be one of {KINDS}, got {kind!r}")
    if kind in ("tv_gap", "backward_dml", "dmm_check") and variety is None:
        raise ConfigError(f"{kind} needs a variety block")
    output = blocks.get("output", {}).get("path")
    cfg = ExperimentConfig(field, F, variety, kind, params, output, name)
    if "point" in params:
        cfg.point()  # validate early
    return cfg
