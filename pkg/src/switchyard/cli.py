"""Deterministic command-line surface over the library.

Every command folds its results into a run report: command name, seed,
digests of the inputs, a pass/fail line per check with numeric residuals,
and wall time.  With a fixed seed and fixed inputs everything except the
wall-time field reproduces byte-identically.  Exit codes: 0 success,
1 mathematical-check failure, 2 input error.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
import sys
import time
from typing import Optional

import click

from . import algebra as al
from . import cocyclic as cc
from . import flags as fl
from . import obstruction as obs
from . import slither as sl
from . import traintrack as tt


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


def _doc_bytes(doc) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=1) + "\n").encode()


def fmt_element(e) -> str:
    re, ang = sl.to_cylinder(e).value
    return f"log={re:.12g}{ang % al.TWO_PI:+.12g}i"


def cyl_gap(a, b) -> float:
    diff = al.group_sub(sl.to_cylinder(a), sl.to_cylinder(b))
    re, ang = diff.value
    ang = ang % al.TWO_PI
    return math.hypot(re, min(ang, al.TWO_PI - ang))


def torsion_residue(value, d: int):
    """Snap a d-torsion element to its lattice residue; returns (k, error)."""
    re, ang = sl.to_cylinder(value).value
    ang = ang % al.TWO_PI
    k = int(round(d * ang / al.TWO_PI)) % d
    target = al.TWO_PI * k / d
    return k, abs(re) + min(abs(ang - target), al.TWO_PI - abs(ang - target))


class Report:
    def __init__(self, command: str, seed: int):
        self.command = command
        self.seed = seed
        self.inputs = {}
        self.checks = []
        self.values = {}
        self._t0 = time.perf_counter()

    def add_input(self, label: str, data: bytes) -> None:
        self.inputs[label] = _digest(data)

    def check(self, name: str, ok: bool, residual: Optional[float] = None) -> None:
        self.checks.append({"name": name, "pass": bool(ok),
                            "residual": None if residual is None else float(residual)})

    def value(self, key: str, val) -> None:
        self.values[key] = val

    def finish(self, as_json: bool) -> int:
        wall_ms = (time.perf_counter() - self._t0) * 1000.0
        failed = [c for c in self.checks if not c["pass"]]
        if as_json:
            payload = {
                "command": self.command,
                "seed": self.seed,
                "inputs": self.inputs,
                "checks": self.checks,
                "values": self.values,
                "ok": not failed,
                "wall_time_ms": round(wall_ms, 3),
            }
            click.echo(json.dumps(payload, sort_keys=True))
        else:
            click.echo(f"command: {self.command}")
            click.echo(f"seed: {self.seed}")
            for label, dig in self.inputs.items():
                click.echo(f"input {label}: sha256:{dig}")
            for c in self.checks:
                tail = "" if c["residual"] is None else f" residual={c['residual']:.3g}"
                click.echo(f"check {c['name']}: {'pass' if c['pass'] else 'FAIL'}{tail}")
            for key, val in self.values.items():
                click.echo(f"{key}: {val}")
            click.echo(f"wall time: {wall_ms:.1f} ms")
        return 1 if failed else 0


def input_error(msg: str) -> "SystemExit":
    click.echo(f"input error: {msg}", err=True)
    return SystemExit(2)


def load_json_file(path: str) -> tuple:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        return json.loads(raw), raw
    except OSError as err:
        raise input_error(str(err))
    except json.JSONDecodeError as err:
        raise input_error(f"{path}: parse failure at line {err.lineno} column {err.colno}: {err.msg}")


def load_track_doc(path: str):
    doc, raw = load_json_file(path)
    try:
        track, tree = tt.track_from_json(doc)
    except (KeyError, TypeError, tt.TrackError) as err:
        raise input_error(f"{path}: {err}")
    return track, tree, raw


def require_group(kind: str) -> str:
    try:
        al.zero(kind)
    except al.GroupKindError as err:
        raise input_error(str(err))
    return kind


def oriented_tree_for(track, tree, seed: int):
    if tree is None:
        tree = tt.maximal_tree(track, seed=seed)
    return cc.ensure_right_unorientable(tree)


def write_doc(path: str, doc, report: Report, label: str) -> None:
    data = _doc_bytes(doc)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as err:
        raise input_error(str(err))
    report.add_input(label, data)


@click.group()
@click.option("--seed", type=int, default=0, show_default=True,
              help="Root of all randomness; every trial reseeds from it.")
@click.option("--group", "group_tag", default="cylinder", show_default=True,
              help="Coefficient group: real, circle, cylinder, or zd:<n>.")
@click.option("--d", "dim", type=int, default=3, show_default=True,
              help="Coordinate depth (matrix size downstream).")
@click.option("--tolerance", type=float, default=1e-9, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable report.")
@click.pass_context
def main(ctx, seed, group_tag, dim, tolerance, as_json):
    """Train-track coordinates, torsion invariants, and lifting obstructions."""
    ctx.obj = {
        "seed": seed,
        "group": group_tag,
        "d": dim,
        "tol": tolerance,
        "json": as_json,
        "tol_explicit": ctx.get_parameter_source("tolerance").name == "COMMANDLINE",
    }


@main.command()
@click.argument("path", type=click.Path())
@click.pass_obj
def validate(cfg, path):
    """Check a track file: slot pairing, cell shapes, genus, connectivity."""
    report = Report("validate", cfg["seed"])
    track, tree, raw = load_track_doc(path)
    report.add_input("track", raw)
    result = tt.validate(track)
    report.check("structure", result.valid)
    for code, msg in result.errors:
        report.value(f"error {code}", msg)
    report.value("genus", result.genus)
    report.value("switches", result.n_switches)
    report.value("rectangles", result.n_rectangles)
    report.value("plaques", result.n_plaques)
    if tree is not None:
        report.value("tree edges", len(tree.edges))
    sys.exit(report.finish(cfg["json"]))


@main.command("gen-fixture")
@click.option("--genus", type=int, default=2, show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.pass_obj
def gen_fixture(cfg, genus, out):
    """Search for a valid genus-g track and write it as JSON."""
    if genus < 2:
        raise input_error(f"genus {genus} < 2")
    report = Report("gen-fixture", cfg["seed"])
    try:
        track = tt.generate_fixture(genus, cfg["seed"])
    except tt.FixtureSearchError as err:
        report.check("search", False)
        report.value("error", str(err))
        report.finish(cfg["json"])
        sys.exit(1)
    g = track.genus
    report.check("switch count", len(track.switch_ids) == 12 * g - 12)
    report.check("rectangle count", len(track.rects) == 18 * g - 18)
    report.check("plaque count", len(track.plaques) == 4 * g - 4)
    write_doc(out, tt.track_to_json(track), report, "track out")
    report.value("genus", g)
    report.value("path", out)
    sys.exit(report.finish(cfg["json"]))


@main.command()
@click.argument("path", type=click.Path())
@click.option("--out", type=click.Path(), required=True)
@click.pass_obj
def tree(cfg, path, out):
    """Choose a seeded oriented maximal tree and write track+tree JSON."""
    report = Report("tree", cfg["seed"])
    track, _, raw = load_track_doc(path)
    report.add_input("track", raw)
    chosen = tt.maximal_tree(track, seed=cfg["seed"])
    g = track.genus
    report.check("edge count", len(chosen.edges) == 12 * g - 13)
    write_doc(out, tt.track_to_json(track, chosen), report, "tree out")
    report.value("edges", len(chosen.edges))
    report.value("root", chosen.root)
    report.value("path", out)
    sys.exit(report.finish(cfg["json"]))


@main.command()
@click.argument("path", type=click.Path())
@click.pass_obj
def classify(cfg, path):
    """Report the rectangle census of an oriented tree."""
    report = Report("classify", cfg["seed"])
    track, stored, raw = load_track_doc(path)
    if stored is None:
        raise input_error(f"{path}: no tree present; run the tree command first")
    report.add_input("track", raw)
    cls = tt.classify(stored)
    g = track.genus
    n_o = len(cls.orientable)
    n_u = len(cls.unorientable)
    report.check("free census", n_o + n_u == 6 * g - 5)
    report.check("right-crossing count", len(cls.e_right) == 1 + len(cls.s_right))
    report.check("sign parity", (n_u + len(cls.s_right)) % 2 == 0)
    report.value("orientable", n_o)
    report.value("u_left", len(cls.u_left))
    report.value("u_right", len(cls.u_right))
    report.value("s_left", len(cls.s_left))
    report.value("s_right", len(cls.s_right))
    sys.exit(report.finish(cfg["json"]))


@main.command("sample-y")
@click.argument("path", type=click.Path())
@click.option("--count", type=int, default=1, show_default=True)
@click.option("--torsion", "torsion_k", type=int, default=None,
              help="Torsion residue k; random per sample when omitted.")
@click.option("--out", type=click.Path(), required=True)
@click.pass_obj
def sample_y(cfg, path, count, torsion_k, out):
    """Draw member points with prescribed torsion and write them to a file."""
    d, kind = cfg["d"], require_group(cfg["group"])
    if d < 2:
        raise input_error(f"d {d} < 2")
    if count < 0:
        raise input_error(f"count {count} < 0")
    if torsion_k is not None and not 0 <= torsion_k < d:
        raise input_error(f"torsion residue {torsion_k} outside 0..{d - 1}")
    try:
        al.torsion_element(kind, d, 0)
    except al.GroupKindError as err:
        raise input_error(str(err))
    report = Report("sample-y", cfg["seed"])
    track, stored, raw = load_track_doc(path)
    report.add_input("track", raw)
    otree = oriented_tree_for(track, stored, cfg["seed"])
    tol = max(cfg["tol"], 1e-7)
    points = []
    member_ok, torsion_ok, worst = True, True, 0.0
    for n in range(count):
        rng = random.Random(cfg["seed"] * 1_000_003 + n)
        k = torsion_k if torsion_k is not None else rng.randrange(d)
        eps = al.torsion_element(kind, d, k)
        c = cc.i2_inverse(otree, cc.random_free(otree, d, kind, rng), eps)
        member_ok = member_ok and cc.is_member(otree, c, tol)
        got = cc.tor_prime(otree, c)
        gap = cyl_gap(got.value, eps)
        worst = max(worst, gap)
        torsion_ok = torsion_ok and gap <= tol
        points.append({"torsion": k, "coords": cc.coords_to_json(c)})
    report.check("membership", member_ok)
    report.check("torsion", torsion_ok, worst)
    doc = {"d": d, "group": kind, "seed": cfg["seed"], "count": count, "points": points}
    write_doc(out, doc, report, "points out")
    report.value("count", count)
    report.value("path", out)
    sys.exit(report.finish(cfg["json"]))


def load_coords(path: str, report: Report):
    doc, raw = load_json_file(path)
    report.add_input("coords", raw)
    if "points" in doc:
        if not doc["points"]:
            raise input_error(f"{path}: empty point file")
        doc = doc["points"][0]["coords"]
    try:
        return cc.coords_from_json(doc)
    except (KeyError, TypeError, ValueError) as err:
        raise input_error(f"{path}: {err}")


@main.command()
@click.argument("track_path", type=click.Path())
@click.argument("coords_path", type=click.Path())
@click.pass_obj
def torsion(cfg, track_path, coords_path):
    """Print the torsion invariant and its residue for a member point."""
    report = Report("torsion", cfg["seed"])
    track, stored, raw = load_track_doc(track_path)
    report.add_input("track", raw)
    otree = oriented_tree_for(track, stored, cfg["seed"])
    c = load_coords(coords_path, report)
    tol = max(cfg["tol"], 1e-7)
    try:
        cc.require_member(otree, c, tol)
    except cc.MembershipError as err:
        report.check("membership", False)
        report.value("error", str(err))
        report.finish(cfg["json"])
        sys.exit(1)
    report.check("membership", True)
    tor = cc.tor_prime(otree, c)
    k, err = torsion_residue(tor.value, c.d)
    report.check("torsion lattice", err <= tol, err)
    report.value("tor_prime", fmt_element(tor.value))
    report.value("residue", k)
    sys.exit(report.finish(cfg["json"]))


@main.command()
@click.argument("track_path", type=click.Path())
@click.argument("coords_path", type=click.Path())
@click.pass_obj
def corfinal(cfg, track_path, coords_path):
    """Compare the boundary-product ledger with its closed form and tor'."""
    report = Report("corfinal", cfg["seed"])
    track, stored, raw = load_track_doc(track_path)
    report.add_input("track", raw)
    otree = oriented_tree_for(track, stored, cfg["seed"])
    c = load_coords(coords_path, report)
    tol = cfg["tol"]
    try:
        cc.require_member(otree, c, max(tol, 1e-7))
    except cc.MembershipError as err:
        report.check("membership", False)
        report.value("error", str(err))
        report.finish(cfg["json"])
        sys.exit(1)
    report.check("membership", True)
    total = sl.total_mid_log(otree, c)
    rhs = sl.closed_form_total(otree, c)
    gap_form = cyl_gap(total, rhs)
    report.check("ledger vs closed form", gap_form <= tol, gap_form)
    tor = cc.tor_prime(otree, c)
    gap_tor = cyl_gap(sl.ob_from_product(total, c.d).value, tor.value)
    report.check("negated total vs tor_prime", gap_tor <= tol, gap_tor)
    report.value("total", fmt_element(total))
    report.value("tor_prime", fmt_element(tor.value))
    sys.exit(report.finish(cfg["json"]))


@main.command()
@click.argument("rep_path", type=click.Path(), required=False)
@click.option("--clock-shift", "use_clock", is_flag=True,
              help="Use the built-in clock-and-shift representation.")
@click.option("--identity", "use_identity", is_flag=True,
              help="Use the identity representation.")
@click.pass_obj
def ob(cfg, rep_path, use_clock, use_identity):
    """Evaluate the lifting obstruction of a relator product."""
    picked = sum((rep_path is not None, use_clock, use_identity))
    if picked != 1:
        raise input_error("provide exactly one of REP_PATH, --clock-shift, --identity")
    report = Report("ob", cfg["seed"])
    if use_clock or use_identity:
        if cfg["d"] < 2:
            raise input_error(f"d {cfg['d']} < 2")
        rep = obs.clock_shift_rep(cfg["d"]) if use_clock else obs.identity_rep(cfg["d"])
        report.add_input("rep", _doc_bytes(obs.rep_to_json(rep)))
    else:
        doc, raw = load_json_file(rep_path)
        report.add_input("rep", raw)
        try:
            rep = obs.rep_from_json(doc)
        except (KeyError, TypeError, ValueError) as err:
            raise input_error(f"{rep_path}: {err}")
    scalar_tol = cfg["tol"] if cfg["tol_explicit"] else obs.SCALAR_TOL
    try:
        value = obs.ob(rep, scalar_tol=scalar_tol)
    except ValueError as err:
        report.check("scalar relator product", False)
        report.value("error", str(err))
        report.finish(cfg["json"])
        sys.exit(1)
    report.check("scalar relator product", True, value.residual)
    report.value("ob", fmt_element(value.value))
    report.value("residue", value.residue)
    report.value("d", rep.d)
    sys.exit(report.finish(cfg["json"]))


@main.command()
@click.argument("matrices_path", type=click.Path())
@click.option("--which", type=click.Choice(["triple", "double"]), default="triple",
              show_default=True)
@click.option("--index", "index_str", default=None,
              help="Comma-separated index; triples sum to d, pairs sum to d.")
@click.pass_obj
def flags(cfg, matrices_path, which, index_str):
    """Print a flag invariant (triple or double ratio) and its log."""
    report = Report("flags", cfg["seed"])
    doc, raw = load_json_file(matrices_path)
    report.add_input("matrices", raw)
    try:
        mats = [fl.matrix_from_json(m) for m in doc["matrices"]]
    except (KeyError, TypeError, ValueError) as err:
        raise input_error(f"{matrices_path}: {err}")
    need = 3 if which == "triple" else 4
    if len(mats) != need:
        raise input_error(f"{which} ratio needs {need} matrices, got {len(mats)}")
    d = mats[0].shape[0]
    try:
        flag_list = [fl.Flag(m) for m in mats]
    except fl.DegenerateFlagError as err:
        report.check("nondegenerate flags", False)
        report.value("error", str(err))
        report.finish(cfg["json"])
        sys.exit(1)
    report.check("nondegenerate flags", True)
    if index_str is None:
        idx = (1, 1, d - 2) if which == "triple" else (1, d - 1)
    else:
        try:
            idx = tuple(int(p) for p in index_str.split(","))
        except ValueError:
            raise input_error(f"bad index {index_str!r}")
    want_len = 3 if which == "triple" else 2
    if len(idx) != want_len or any(p < 1 for p in idx) or sum(idx) != d:
        raise input_error(f"index {idx} must have {want_len} positive parts summing to {d}")
    try:
        if which == "triple":
            value = fl.triple_ratio(flag_list, idx)
        else:
            value = fl.double_ratio(*flag_list, idx)
        log = fl.log_invariant(value)
    except (fl.DegenerateFlagError, ValueError) as err:
        report.check("invariant defined", False)
        report.value("error", str(err))
        report.finish(cfg["json"])
        sys.exit(1)
    report.check("invariant defined", True)
    report.value("which", which)
    report.value("index", ",".join(map(str, idx)))
    report.value("value", f"{value.real:.12g}{value.imag:+.12g}i")
    report.value("log", fmt_element(log))
    sys.exit(report.finish(cfg["json"]))


@main.command()
@click.pass_obj
def selftest(cfg):
    """Run a fast end-to-end battery across every module."""
    report = Report("selftest", cfg["seed"])
    seed, tol = cfg["seed"], max(cfg["tol"], 1e-9)

    ok = all(al.dimension_count(d, g) == (d * d - 1) * (2 * g - 2)
             for d in range(2, 9) for g in (2, 3, 4))
    report.check("dimension identity", ok)

    track = tt.generate_fixture(2, seed)
    report.check("fixture census",
                 len(track.switch_ids) == 12 and len(track.rects) == 18
                 and len(track.plaques) == 4)
    otree = oriented_tree_for(track, None, seed)
    cls = tt.classify(otree)
    report.check("tree census",
                 len(otree.edges) == 11
                 and len(cls.orientable) + len(cls.unorientable) == 7
                 and len(cls.e_right) == 1 + len(cls.s_right)
                 and (len(cls.unorientable) + len(cls.s_right)) % 2 == 0)

    rng = random.Random(seed)
    worst = 0.0
    for d, kind in ((3, "cylinder"), (4, "zd:12"), (2, "real")):
        k = rng.randrange(d)
        eps = al.torsion_element(kind, d, k)
        c = cc.i2_inverse(otree, cc.random_free(otree, d, kind, rng), eps)
        if not cc.is_member(otree, c, 1e-7):
            worst = math.inf
            break
        worst = max(worst, cyl_gap(cc.tor_prime(otree, c).value, eps))
    report.check("sample and torsion", worst <= max(tol, 1e-7), worst)

    worst = 0.0
    for d in (2, 3, 4):
        c = cc.sample_y(otree, d, "cylinder", rng)
        total = sl.total_mid_log(otree, c)
        worst = max(worst, cyl_gap(total, sl.closed_form_total(otree, c)))
        worst = max(worst, cyl_gap(sl.ob_from_product(total, d).value,
                                   cc.tor_prime(otree, c).value))
    report.check("boundary product", worst <= tol, worst)

    worst = 0.0
    for d in (2, 3, 4, 5):
        value = obs.ob(obs.clock_shift_rep(d))
        target = al.torsion_element("cylinder", d, value.residue)
        ok = value.residue in (1, d - 1) and al.elements_equal(value.value, target, 1e-9)
        if not ok:
            worst = math.inf
        worst = max(worst, value.residual)
    report.check("clock-shift obstruction", worst <= 1e-9, worst)
    report.check("octagon obstruction", obs.ob(obs.fuchsian_octagon(3)).residue == 0)

    sys.exit(report.finish(cfg["json"]))


if __name__ == "__main__":
    main()
