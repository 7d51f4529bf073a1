"""The four batch experiments and their deterministic table output."""

from __future__ import annotations

import json
import math
import random as _random
from pathlib import Path

from .closure import closure_of_root_orbit
from .dynamics import apply, backward_step, enumerate_periodic, invariance_check_hypersurface
from .errors import (DepthInsufficient, ExtensionRequired, PrecisionLoss,
                     RamifiedFieldUnsupported)
from .norms import Norm
from .poly import format_poly
from .proj import distance_to_variety, reduction_map
from .residue import format_fq
from .tilting import (CoherentOrbit, all_backward_orbits, backward_orbit, conjugacy_audit,
                      periodic_orbit_of, tilt_of_orbit)


class ExperimentResult:
    """A table plus a summary; ``violation`` is set when a theorem check fails."""

    def __init__(self, kind, header, columns, rows, summary, violation=None, status="ok"):
        self.kind = kind
        self.header = header
        self.columns = columns
        self.rows = rows
        self.summary = summary
        self.violation = violation
        self.status = status

    def to_tsv(self):
        lines = [f"# {k}={_text(v)}" for k, v in self.header.items()]
        lines += [f"# {k}={_text(v)}" for k, v in self.summary.items()]
        lines.append(f"# status={self.status}")
        if self.violation:
            lines.append(f"# violation={self.violation}")
        lines.append("\t".join(self.columns))
        for row in self.rows:
            lines.append("\t".join(_text(row[c]) for c in self.columns))
        return "\n".join(lines) + "\n"

    def to_json(self):
        doc = {"kind": self.kind, "header": self.header, "summary": self.summary,
               "status": self.status, "violation": self.violation,
               "columns": self.columns, "rows": self.rows}
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"

    def write(self, out_dir, name):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        tsv = out / f"{name}.tsv"
        js = out / f"{name}.json"
        tsv.write_text(self.to_tsv())
        js.write_text(self.to_json())
        return tsv, js


def _text(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_text(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return str(v)


def _residue_str(y):
    return "[" + " : ".join(format_fq(c) for c in y) + "]"


def _norm_str(p, v):
    return str(Norm(p, v))


# ---------------------------------------------------------------------------
# tv_gap

def gap_trend_violation(valuations):
    """True when the δ valuations rise strictly over the last three periods.

    Valuations grow as distances shrink, so a strict rise means δ_m is
    heading towards 0 with no sign of stabilizing.
    """
    v = list(valuations)
    if len(v) < 3 or v[-1] == v[-2]:
        return False
    return v[-3] < v[-2] < v[-1]


def run_tv_gap(cfg, threads=1):
    """δ_m = least distance to V over nonmember periodic points of period <= m.

    Each row reports the points fixed by F^m; δ_m is the running minimum, so
    it is non-increasing by construction.  A violation is flagged when δ_m
    keeps decreasing strictly over the last three periods without having
    stabilized.
    """
    F, V = cfg.F, cfg.variety
    p = F.p
    bound = cfg.get("bound", 6)
    M = cfg.field.prec
    rows = []
    running = math.inf  # valuation of δ, so larger is smaller distance
    deltas = []
    for m in range(1, bound + 1):
        pts = enumerate_periodic(F, m, M, threads=threads)
        members = unresolved = 0
        level = -math.inf
        for pp in pts:
            try:
                d = distance_to_variety(pp.point, V)
            except PrecisionLoss:
                unresolved += 1
                continue
            if d.member:
                members += 1
            else:
                level = max(level, d.valuation)
        local = math.inf if level == -math.inf else level
        if level != -math.inf:
            running = level if running == math.inf else max(running, level)
        deltas.append(running)
        rows.append({"m": m, "points": len(pts), "members": members, "unresolved": unresolved,
                     "min_distance_at_m": _norm_str(p, local) if local != math.inf else "-",
                     "delta": _norm_str(p, running) if running != math.inf else "-"})
    stable = len(deltas) >= 2 and deltas[-1] == deltas[-2]
    violation = None
    if gap_trend_violation(deltas):
        violation = "δ_m is still strictly decreasing over the last three periods"
    summary = {"delta": _norm_str(p, deltas[-1]) if deltas[-1] != math.inf else "-",
               "delta_valuation": str(deltas[-1]), "stabilized": stable}
    return ExperimentResult("tv_gap", cfg.describe(),
                            ["m", "points", "members", "unresolved", "min_distance_at_m", "delta"],
                            rows, summary, violation)


# ---------------------------------------------------------------------------
# dmm_check

def run_dmm_check(cfg, threads=1):
    """Invariance verdict for V against the periodic points lying on V."""
    F, V = cfg.F, cfg.variety
    bound = cfg.get("bound", 3)
    M = cfg.field.prec
    header = cfg.describe()
    summary = {}
    inv = None
    if len(V.generators) == 1:
        inv = invariance_check_hypersurface(F, V.generators[0], bound=cfg.get("invariance_bound", 3))
        summary["verdict"] = inv.verdict
        summary["l"] = inv.l
        summary["quotient"] = format_poly(inv.quotient) if inv.quotient is not None else None
        summary["witness"] = inv.witness
        summary["witness_value"] = inv.witness_value
    else:
        summary["verdict"] = "sampled"
    rows = []
    violation = None
    for m in range(1, bound + 1):
        pts = enumerate_periodic(F, m, M, threads=threads)
        on_v = []
        image_ok = 0
        for pp in pts:
            try:
                if distance_to_variety(pp.point, V).member:
                    on_v.append(pp)
            except PrecisionLoss:
                continue
        for pp in on_v:
            x = pp.point
            if inv is not None and inv.invariant:
                x = apply(F, x, inv.l)
            else:
                x = apply(F, x)
            try:
                if distance_to_variety(x, V).member:
                    image_ok += 1
            except PrecisionLoss:
                pass
        if inv is not None and inv.invariant and image_ok != len(on_v):
            violation = f"F^{inv.l} moves a periodic point of V off V at period {m}"
        rows.append({"m": m, "periodic_on_V": len(on_v), "images_on_V": image_ok,
                     "residues": [_residue_str(pp.residue) for pp in on_v]})
    return ExperimentResult("dmm_check", header, ["m", "periodic_on_V", "images_on_V", "residues"],
                            rows, summary, violation)


# ---------------------------------------------------------------------------
# backward_dml

def _branch_mode(cfg):
    """(mode, argument): random(seed) carries a seed, all(D) a depth."""
    raw = cfg.get("branch", "canonical")
    if isinstance(raw, tuple):
        name, args = raw
        if name == "all":
            return name, args[0] if args else cfg.get("depth", 12)
        return name, args[0] if args else cfg.get("seed", 0)
    return raw, cfg.get("seed", 0)


def _build_orbits(cfg, b0, depth):
    """Coherent orbits to ``depth``; returns (orbits, frontier error or None).

    canonical and random(seed) give one orbit, all(D) every orbit of depth D
    inside the field.  On a dead end the partial orbit is returned with the
    error.
    """
    F = cfg.F
    mode, arg = _branch_mode(cfg)
    if mode == "all":
        try:
            return all_backward_orbits(F, b0, arg), None
        except ExtensionRequired as exc:
            return [CoherentOrbit(F, [b0], check=False)], exc
    if mode == "random":
        try:
            return [backward_orbit(F, b0, depth, "random", _random.Random(arg))], None
        except ExtensionRequired as exc:
            return [CoherentOrbit(F, [b0], check=False)], exc
    if mode != "canonical":
        raise ValueError(f"unknown branch mode {mode!r}")
    points = [b0]
    for _ in range(depth):
        try:
            points.append(backward_step(F, points[-1])[0])
        except ExtensionRequired as exc:
            exc.depth = len(points) - 1
            return [CoherentOrbit(F, points, check=False)], exc
    return [CoherentOrbit(F, points, check=False)], None


def covering_index(members, depth):
    """Least r with every b_i (i <= D - r + 1) covered by some member b_(i+j), j < r."""
    mem = set(members)
    if not mem:
        return None
    for r in range(1, depth + 2):
        if all(any(i + j in mem for j in range(r)) for i in range(depth - r + 2)):
            return r
    return None


def run_backward_dml(cfg, threads=1):
    """Distances d(b_i, V) along a coherent backward orbit and the gap c."""
    F, V = cfg.F, cfg.variety
    p = F.p
    depth = cfg.get("depth", 12)
    b0 = cfg.point()
    if b0 is None:
        raise ValueError("backward_dml needs experiment.point")
    orbits, frontier = _build_orbits(cfg, b0, depth)
    rows = []
    members = set()
    covering = []
    gap = math.inf  # valuation of c
    for k, orbit in enumerate(orbits):
        mem = []
        for i, b in enumerate(orbit.points):
            d = distance_to_variety(b, V)
            if d.member:
                mem.append(i)
            else:
                gap = d.valuation if gap == math.inf else max(gap, d.valuation)
            rows.append({"branch": k, "i": i, "point": str(b),
                         "residue": _residue_str(reduction_map(b)),
                         "precision": b.precision(), "distance": str(d.norm), "member": d.member,
                         "gap_so_far": _norm_str(p, gap) if gap != math.inf else "-"})
        members.update(mem)
        if mem:
            covering.append(covering_index(mem, orbit.depth))
    orbit = orbits[0]
    covering_r = max(covering) if covering and None not in covering else None
    summary = {"branches": len(orbits), "depth_reached": min(o.depth for o in orbits),
               "members": sorted(members),
               "gap": _norm_str(p, gap) if gap != math.inf else "-",
               "covering_r": covering_r}
    violation = None
    status = "ok"
    if frontier is not None:
        status = "extension_required"
        summary["frontier"] = str(frontier)
    source = b0
    try:
        if orbit.depth >= 2:
            source = tilt_of_orbit(orbit)
    except (RamifiedFieldUnsupported, DepthInsufficient):
        pass
    residue = source.residue() if hasattr(source, "residue") else reduction_map(source)
    closure = closure_of_root_orbit(residue, residue_pivot(residue), cfg.get("degree", 2), s=F.s)
    summary["closure_ideal"] = closure.ideal.serialize()["basis"]
    summary["closure_stable"] = closure.stability.stable
    summary["closure_saturated"] = closure.saturated
    if members and not closure.stability.stable:
        violation = "the closure ideal of the root orbit is not Frobenius-stable"
    return ExperimentResult("backward_dml", cfg.describe(),
                            ["branch", "i", "point", "residue", "precision", "distance",
                             "member", "gap_so_far"], rows, summary, violation, status)


def residue_pivot(y):
    return next(i for i, c in enumerate(y) if not c.is_zero())


# ---------------------------------------------------------------------------
# tilt_demo

def run_tilt_demo(cfg, threads=1):
    """Conjugacy audit of one orbit and tilt constancy of periodic points."""
    F = cfg.F
    rows = []
    violation = None
    summary = {}
    depth = cfg.get("depth", 12)
    b0 = cfg.point()
    if b0 is not None:
        orbits, frontier = _build_orbits(cfg, b0, depth)
        if frontier is not None:
            summary["frontier"] = str(frontier)
        for orbit in orbits:
            audit = conjugacy_audit(orbit)
            rows.append({"case": "audit", "point": str(b0), "depth": orbit.depth,
                         "cutoff": audit.cutoff, "tilt": repr(audit.rhs.frobenius(-F.s)),
                         "check": str(audit.discrepancy), "ok": audit.passed})
            if not audit.passed:
                violation = "conjugacy audit discrepancy above cutoff"
    bound = cfg.get("bound", 2)
    seen = set()
    M = cfg.field.prec
    for m in range(1, bound + 1):
        for pp in enumerate_periodic(F, m, M, threads=threads):
            key = _residue_str(pp.residue)
            if key in seen:
                continue
            seen.add(key)
            n = pp.period
            orb = periodic_orbit_of(F, pp.point, depth=max(depth, 2 * n), bound=F.s * n)
            w = tilt_of_orbit(orb)
            ok = w.is_constant() and w.residue() == reduction_map(pp.point)
            rows.append({"case": "periodic", "point": str(pp.point), "depth": orb.depth,
                         "cutoff": w.cutoff, "tilt": repr(w), "check": "constant" if ok else
                         "not constant", "ok": ok})
            if not ok:
                violation = f"periodic point {pp.point} has a non-constant tilt"
    summary["periodic_points"] = len(seen)
    summary["all_ok"] = all(r["ok"] for r in rows)
    return ExperimentResult("tilt_demo", cfg.describe(),
                            ["case", "point", "depth", "cutoff", "tilt", "check", "ok"],
                            rows, summary, violation)


RUNNERS = {"tv_gap": run_tv_gap, "dmm_check": run_dmm_check,
           "backward_dml": run_backward_dml, "tilt_demo": run_tilt_demo}


def run_experiment(cfg, threads=1):
    return RUNNERS[cfg.kind](cfg, threads=threads)
