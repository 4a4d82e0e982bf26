"""Command line front end.

Subcommands either run one stage against a scenario file or, with
``all``, every stage the scenario describes.  CSV outputs are
deterministic for a fixed scenario and seed (floats are written with
repr); wall-clock timings only ever land in report.json.

Exit codes: 0 a stage ran to a verdict (a violated criterion is still a
successful determination), 2 the scenario failed schema validation,
3 a numerical stage failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from .criterion import check_m0, lemma1_constants, m0_dyadic_grid, margin_sweep
from .construct import verify_sufficiency
from .errors import EngineError, SchemaError
from .jensen import (green_disk, log_potential, poisson_jensen_check,
                     potential_to_measure, uniform_circle)
from .majorants import make_log_abs_poly, make_radial_power
from .means import (DiskFractionProfile, PlanePowerProfile, check_mean_chain,
                    disk_mean, hat_radius, mollified_mean)
from .measures import Region
from .errors import PreconditionViolation
from .scenario import load_scenario
from .testfam import TruncatedLogFamily


def _threads():
    try:
        return max(1, int(os.environ.get("ZEROCERT_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return str(path)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


class _StageFailure(Exception):
    def __init__(self, stage, cause):
        super().__init__("stage %s failed: %s" % (stage, cause))
        self.stage = stage
        self.cause = cause


def _run_stage(report, name, fn):
    t0 = time.perf_counter()
    try:
        info = fn()
    except EngineError as exc:
        report["stages"][name] = {
            "status": "failed",
            "error": str(exc),
            "error_kind": exc.slug,
            "seconds": round(time.perf_counter() - t0, 3),
        }
        raise _StageFailure(name, exc) from exc
    info["status"] = "ok"
    info["seconds"] = round(time.perf_counter() - t0, 3)
    report["stages"][name] = info


# ---------------------------------------------------------------------------
# stages


def _margin_stage(sc, args, outdir):
    family = sc.family
    if family is None or args.tau_max is not None:
        t_max = args.tau_max if args.tau_max is not None else (
            family.t_max if family is not None else 200.0)
        base = family or TruncatedLogFamily()
        family = type(base)(**{**base.__dict__, "t_max": t_max})
    tol = args.tol if args.tol is not None else sc.tol("margin")
    curve = margin_sweep(sc.zeros, sc.majorant, family, tol=tol,
                         threads=_threads())
    path = _write_csv(
        outdir / "margin.csv",
        ["tau", "lhs", "rhs", "margin", "rhs_budget", "note"],
        [(s.tau, s.lhs, s.rhs, s.margin, s.rhs_budget, s.note)
         for s in curve.samples])
    print("necessary criterion: %s  (growth exponent %s, budget %.3g)"
          % (curve.verdict,
             "n/a" if curve.growth_exponent is None
             else "%.3f" % curve.growth_exponent,
             curve.budget))
    return {"verdict": curve.verdict,
            "growth_exponent": curve.growth_exponent,
            "fit_r2": curve.fit_r2,
            "budget": curve.budget,
            "details": curve.details,
            "outputs": [path]}


def _m0_stage(sc, args, outdir):
    grid = sc.m0_grid
    power = sc.m0_power
    if grid is None:
        grid = m0_dyadic_grid(100.0, 8)
        power = sc.profile.power if isinstance(sc.profile, PlanePowerProfile) \
            else 1.0
    tol = args.tol if args.tol is not None else sc.tol("m0")
    rep = check_m0(sc.majorant.up, power, grid, tol=tol)
    path = _write_csv(
        outdir / "m0.csv",
        ["z_re", "z_im", "shell", "deviation", "budget"],
        [(s["z"].real, s["z"].imag, s["shell"], s["deviation"], s["budget"])
         for s in rep.samples])
    print("regularity probe: bounded=%s  sup estimate %.6g over %d shells"
          % (rep.bounded, rep.c_estimate, len(rep.shell_sups)))
    return {"bounded": rep.bounded,
            "c_estimate": rep.c_estimate,
            "shell_sups": list(rep.shell_sups),
            "flagged": [(z.real, z.imag, d) for z, d in rep.flagged],
            "power": rep.power,
            "outputs": [path]}


def _sufficiency_stage(sc, args, outdir):
    grid = sc.sufficiency_grid
    if grid is None:
        rng = np.random.default_rng(args.seed or 0)
        r = 3.0 * np.sqrt(rng.uniform(0.0, 1.0, 40))
        theta = rng.uniform(0.0, 2.0 * math.pi, 40)
        grid = r * np.exp(1j * theta)
    profile = sc.profile or PlanePowerProfile(1.0)
    tol = args.tol if args.tol is not None else sc.tol("sufficiency")
    rep = verify_sufficiency(sc.zeros, sc.majorant, profile, grid,
                             tol=max(tol, 1e-9), family=sc.family)
    path = _write_csv(
        outdir / "sufficiency.csv",
        ["z_re", "z_im", "log_abs", "tail", "bound", "excess", "ok"],
        [(r_["z"].real, r_["z"].imag, r_["log_abs"], r_["tail"], r_["bound"],
          r_["excess"], r_["ok"]) for r_ in rep.rows])
    print("sufficiency: certified=%s (%s)  genus %d, retained %d, "
          "violations %d/%d"
          % (rep.certified, rep.reason, rep.genus, rep.retained,
             rep.violations, rep.checked))
    return {"certified": rep.certified,
            "reason": rep.reason,
            "margin_verdict": rep.margin_verdict,
            "genus": rep.genus,
            "retained": rep.retained,
            "checked": rep.checked,
            "violations": rep.violations,
            "skipped_guard": rep.skipped_guard,
            "max_excess": rep.max_excess,
            "tail_budget_max": rep.tail_budget_max,
            "balance_used": rep.balance_used,
            "balance_coeffs": list(rep.balance_coeffs),
            "outputs": [path]}


def _lemma1_stage(sc, args, outdir):
    if sc is not None and sc.lemma1 is not None:
        blk = sc.lemma1
    else:
        blk = {"d_tilde": Region.disk(0j, 1.0), "s": Region.disk(0j, 0.5),
               "z0": 0j, "b": 1.0}
    tol = args.tol if args.tol is not None else (
        sc.tol("default") if sc is not None else 1e-9)
    consts = lemma1_constants(blk["d_tilde"], blk["s"], blk["z0"], blk["b"],
                              sc.majorant, tol=tol)
    rows = [("c_test", consts.c_test, 0.0),
            ("inf_green", consts.inf_green, 0.0),
            ("c_majorant", consts.c_majorant, consts.budget)]
    rows += [(k, v, 0.0) for k, v in sorted(consts.parts.items())]
    path = _write_csv(outdir / "lemma1.csv", ["name", "value", "budget"], rows)
    print("comparison constants: c_test %.6g  c_majorant %.6g "
          "(green floor %.6g)"
          % (consts.c_test, consts.c_majorant, consts.inf_green))
    return {"c_test": consts.c_test, "inf_green": consts.inf_green,
            "c_majorant": consts.c_majorant, "parts": consts.parts,
            "budget": consts.budget, "outputs": [path]}


# ---------------------------------------------------------------------------
# selftests (no scenario required)


def _jensen_selftest(args, outdir):
    rows = []
    ok = True

    mu = uniform_circle(0j, 2.0)
    V = log_potential(mu)
    d = np.array([0.25, 1.0, 3.0, 8.0])
    want = np.maximum(0.0, np.log(2.0 / d))
    got = V.radial(d)
    err = float(np.max(np.abs(got - want)))
    rows.append(("circle-potential-closed-form", err, 1e-10, err <= 1e-10))

    mu2 = potential_to_measure(V)
    err2 = abs(mu2.pole_mass - 0.0) + abs(mu2.parts[0].weight - 1.0) \
        + abs(mu2.parts[0].radius - 2.0)
    rows.append(("round-trip-circle", err2, 1e-7, err2 <= 1e-7))

    u = make_log_abs_poly(roots=[1.0 + 0j, -0.5j], mults=[1, 2])
    rep = poisson_jensen_check(u, uniform_circle(0.2 + 0.1j, 1.7))
    tol = 1e-8 + 10.0 * rep.budget
    rows.append(("representation-identity-atoms", abs(rep.residual), tol,
                 abs(rep.residual) <= tol))

    u2 = make_radial_power(1.0, 2.0)
    rep2 = poisson_jensen_check(u2, uniform_circle(0.5 + 0j, 1.0))
    tol2 = 1e-8 + 10.0 * rep2.budget
    rows.append(("representation-identity-density", abs(rep2.residual), tol2,
                 abs(rep2.residual) <= tol2))

    g = green_disk(1.0, 0.5 + 0j)
    e_center = abs(float(g(np.array([0j]))[0]) - math.log(2.0))
    e_bdry = float(np.max(np.abs(g(np.exp(1j * np.linspace(0, 6.28, 7))))))
    rows.append(("green-disk-center", e_center, 1e-12, e_center <= 1e-12))
    rows.append(("green-disk-boundary", e_bdry, 1e-12, e_bdry <= 1e-12))

    ok = all(r[3] for r in rows)
    path = _write_csv(outdir / "jensen_selftest.csv",
                      ["check", "value", "tolerance", "ok"], rows)
    for name, val, tol_, good in rows:
        print("  %-34s %10.3e <= %8.1e  %s"
              % (name, val, tol_, "ok" if good else "FAIL"))
    print("jensen selftest: %s" % ("all ok" if ok else "FAILED"))
    if not ok:
        raise EngineError("jensen selftest failed")
    return {"checks": [{"name": n, "value": v, "tolerance": t, "ok": o}
                       for n, v, t, o in rows], "outputs": [path]}


def _means_selftest(args, outdir):
    rows = []

    sq = make_radial_power(1.0, 2.0)
    v, e = disk_mean(sq, 0j, 1.0, tol=1e-10)
    rows.append(("disk-mean-square", abs(v - 0.5), 1e-9 + e, abs(v - 0.5) <= 1e-9 + e))

    v2, e2 = mollified_mean(sq, 0j, 1.0, tol=1e-10)
    rows.append(("mollified-square", abs(v2 - 0.2), 1e-9 + e2,
                 abs(v2 - 0.2) <= 1e-9 + e2))

    h = hat_radius(PlanePowerProfile(1.0), 0j)
    rows.append(("hat-radius-origin", abs(h.value - 1.5), 1e-9,
                 abs(h.value - 1.5) <= 1e-9))

    chain = check_mean_chain(sq, PlanePowerProfile(1.0),
                             [0.5 + 0.5j, 2.0 - 1.0j], tol=1e-9)
    rows.append(("chain-square", chain.max_violation, 1e-8, chain.ok))

    try:
        hat_radius(DiskFractionProfile(0.5, 0j, 1.0), 0.2 + 0j)
        rows.append(("disk-precondition-error-path", 1.0, 0.0, False))
    except PreconditionViolation:
        rows.append(("disk-precondition-error-path", 0.0, 0.0, True))

    ok = all(r[3] for r in rows)
    path = _write_csv(outdir / "means_selftest.csv",
                      ["check", "value", "tolerance", "ok"], rows)
    for name, val, tol_, good in rows:
        print("  %-34s %10.3e <= %8.1e  %s"
              % (name, val, tol_, "ok" if good else "FAIL"))
    print("means selftest: %s" % ("all ok" if ok else "FAILED"))
    if not ok:
        raise EngineError("means selftest failed")
    return {"checks": [{"name": n, "value": v, "tolerance": t, "ok": o}
                       for n, v, t, o in rows], "outputs": [path]}


# ---------------------------------------------------------------------------
# wiring


def _load(args):
    if not args.scenario:
        raise SchemaError(["/: this command needs --scenario"])
    return load_scenario(args.scenario, tau_max=args.tau_max, seed=args.seed)


def _finish(report, outdir):
    with open(outdir / "report.json", "w", encoding="utf-8") as fh:
        json.dump(_jsonable(report), fh, sort_keys=True, indent=2)
        fh.write("\n")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="zerocert",
        description="Certification engine for candidate zero distributions "
                    "under a growth majorant.")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = ["check-necessary", "check-m0", "construct-verify", "lemma1",
                "all", "jensen-selftest", "means-selftest"]
    for name in commands:
        sp = sub.add_parser(name)
        sp.add_argument("--scenario", default=None,
                        help="scenario JSON file")
        sp.add_argument("--out", default="zerocert-out",
                        help="output directory (default zerocert-out)")
        sp.add_argument("--tol", type=float, default=None,
                        help="override stage tolerance")
        sp.add_argument("--seed", type=int, default=None,
                        help="seed for generated grids")
        sp.add_argument("--tau-max", type=float, default=None, dest="tau_max",
                        help="override the sweep's largest cutoff")
    args = parser.parse_args(argv)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    report = {"command": args.command, "stages": {}}

    try:
        if args.command == "jensen-selftest":
            _run_stage(report, "jensen-selftest",
                       lambda: _jensen_selftest(args, outdir))
        elif args.command == "means-selftest":
            _run_stage(report, "means-selftest",
                       lambda: _means_selftest(args, outdir))
        else:
            sc = _load(args)
            report["label"] = sc.label
            if args.command == "check-necessary":
                _run_stage(report, "necessary",
                           lambda: _margin_stage(sc, args, outdir))
            elif args.command == "check-m0":
                _run_stage(report, "m0", lambda: _m0_stage(sc, args, outdir))
            elif args.command == "construct-verify":
                _run_stage(report, "sufficiency",
                           lambda: _sufficiency_stage(sc, args, outdir))
            elif args.command == "lemma1":
                _run_stage(report, "lemma1",
                           lambda: _lemma1_stage(sc, args, outdir))
            elif args.command == "all":
                _run_stage(report, "necessary",
                           lambda: _margin_stage(sc, args, outdir))
                if sc.m0_grid is not None:
                    _run_stage(report, "m0",
                               lambda: _m0_stage(sc, args, outdir))
                if sc.sufficiency_grid is not None:
                    _run_stage(report, "sufficiency",
                               lambda: _sufficiency_stage(sc, args, outdir))
                if sc.lemma1 is not None:
                    _run_stage(report, "lemma1",
                               lambda: _lemma1_stage(sc, args, outdir))
    except SchemaError as exc:
        for msg in exc.messages:
            print("schema: %s" % msg, file=sys.stderr)
        return 2
    except _StageFailure as exc:
        _finish(report, outdir)
        print("stage %s failed: %s" % (exc.stage, exc.cause), file=sys.stderr)
        return 3

    _finish(report, outdir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
