"""Command-line entry points: build, verify, trace, scan-kappa.

Exit codes: 0 all checks passed, 1 a verification failed, 2 configuration or
feasibility error.  Every subcommand is deterministic given config + seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .compactify import compactify, m_samples, verify_even_in_y
from .config import ConfigError, PRESETS, RunConfig, resolve_config
from .curvature import CollarMetric, case_for_slice, measure_interior_bound, \
    verify_lemma_bounds
from .dynamics import GeodesicState, certify_no_conjugate_points, \
    certify_unbounded_growth, entering_state, jacobi_evolve
from .profile import InfeasibleBridge, check_bridge_feasibility, scan_kappa_min
from .report import Check, VerificationReport, merge_reports, report_to_csv
from .slices import ScaledConstCurv

__all__ = ["main"]


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="warpcollar",
                                description="build and certify warped collar metrics")
    sub = p.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("build", "construct a collar metric and persist it"),
        ("verify", "run the full verification pipeline"),
        ("trace", "dump a geodesic + Jacobi trajectory"),
        ("scan-kappa", "bisect the feasibility threshold in kappa"),
    ):
        q = sub.add_parser(name, help=desc)
        q.add_argument("--config", type=str, default=None, help="config file path")
        q.add_argument("--preset", type=str, default=None,
                       help=f"one of {sorted(PRESETS)}")
        q.add_argument("--seed", type=int, default=None, help="sampling seed")
        q.add_argument("--out", type=str, default=None, help="output directory")
    return p


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    path.write_text(text)
    print(f"wrote {path}")


def cmd_build(cfg: RunConfig) -> int:
    try:
        metric = cfg.build_metric()
    except InfeasibleBridge as exc:
        hint = ""
        try:
            fam = cfg.slice_family()
            if isinstance(fam, ScaledConstCurv):
                scan = scan_kappa_min(case_for_slice(fam))
                hint = f" (scan-kappa: kappa_min ~ {scan['kappa_min_constructible']:.4g})"
        except Exception:
            pass
        print(f"InfeasibleBridge: {exc}{hint}", file=sys.stderr)
        return 2
    out = _outdir(cfg)
    _write(out / "metric.json", json.dumps(metric.to_record(), indent=2, sort_keys=True))
    reloaded = CollarMetric.from_record(
        json.loads((out / "metric.json").read_text()))
    assert reloaded.to_record() == metric.to_record(), "metric round-trip failed"
    print(f"built collar metric: case={metric.profile.case.tag} "
          f"kappa={metric.kappa} t0={metric.t0:.6g}")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.slice_variant != "scaled_const_curv":
        print("verify needs a scaled constant-curvature slice; the conformal "
              "torus is an oracle instrument (see tests/demos)", file=sys.stderr)
        return 2
    try:
        metric = cfg.build_metric()
    except InfeasibleBridge as exc:
        print(f"InfeasibleBridge: {exc}", file=sys.stderr)
        return 2
    out = _outdir(cfg)
    echo = cfg.echo()
    c0 = cfg.C0 if cfg.C0 is not None else measure_interior_bound(metric, cfg.grid)
    vcfg = cfg.verifier()

    stages: list[VerificationReport] = []

    def stage(name: str, rep: VerificationReport) -> None:
        renamed = [Check(f"{name}/{c.check_id}", c.passed, c.witness, c.bound,
                         c.measured) for c in rep.checks]
        rep = VerificationReport(renamed, dict(echo), seed=cfg.seed)
        stages.append(rep)
        _write(out / f"{name}.csv", report_to_csv(rep))
        print(rep.summary_line().replace("# summary:", f"{name}:"))

    stage("lemma_bounds", verify_lemma_bounds(metric, cfg.grid, C0=c0, seed=cfg.seed))

    cf = compactify(metric)
    stage("compactification", verify_even_in_y(cf, seed=cfg.seed))
    rows = m_samples(cf)
    _write(out / "m_of_y.csv",
           "y,m\n" + "\n".join(f"{repr(a)},{repr(b)}" for a, b in rows) + "\n")

    stage("no_conjugate", certify_no_conjugate_points(
        metric, vcfg, n_samples=cfg.n_samples, seed=cfg.seed))
    stage("growth", certify_unbounded_growth(
        metric, vcfg, n_samples=cfg.n_growth_samples, seed=cfg.seed))

    merged = merge_reports(stages)
    _write(out / "merged_report.csv", report_to_csv(merged))
    print(merged.summary_line().lstrip("# "))
    return merged.exit_code()


def cmd_trace(cfg: RunConfig) -> int:
    if cfg.slice_variant != "scaled_const_curv":
        print("trace needs a scaled constant-curvature slice", file=sys.stderr)
        return 2
    try:
        metric = cfg.build_metric()
    except InfeasibleBridge as exc:
        print(f"InfeasibleBridge: {exc}", file=sys.stderr)
        return 2
    if not (0.0 < cfg.trace_tdot <= 1.0):
        print(f"trace_tdot={cfg.trace_tdot} outside (0, 1]", file=sys.stderr)
        return 2
    out = _outdir(cfg)
    d = metric.dim_slice
    state = entering_state(metric, cfg.trace_tdot)
    traj = jacobi_evolve(metric, state, np.eye(d), cfg.trace_mu0 * np.eye(d),
                         cfg.trace_length)
    mu = traj.mu_columns()[:, 0]
    det = traj.det_J
    nrm = traj.norm_J
    lines = ["s,t,tdot,mu,detJ,normJ"]
    for i in range(traj.s.size):
        lines.append(",".join(repr(float(v)) for v in
                              (traj.s[i], traj.t[i], traj.tdot[i], mu[i], det[i], nrm[i])))
    for ev in traj.events:
        lines.append(f"# event: {ev.name} s={repr(float(ev.s))}")
    _write(out / "trajectory.csv", "\n".join(lines) + "\n")
    return 0


def cmd_scan_kappa(cfg: RunConfig) -> int:
    fam = cfg.slice_family()
    if not isinstance(fam, ScaledConstCurv):
        print("scan-kappa needs a scaled constant-curvature slice", file=sys.stderr)
        return 2
    case = case_for_slice(fam)
    out = _outdir(cfg)
    scan = scan_kappa_min(case, cfg.kappa_lo, cfg.kappa_hi)
    grid = np.geomspace(cfg.kappa_lo, cfg.kappa_hi, cfg.n_grid)
    lines = ["kappa,slack,feasible"]
    for k in grid:
        res = check_bridge_feasibility(case, float(k), 1.0 / math.sqrt(float(k)))
        lines.append(f"{repr(float(k))},{repr(res.slack)},{1 if res.feasible else 0}")
    lines.append(f"# kappa_min={repr(scan['kappa_min'])} "
                 f"transition={int(scan['transition'])}")
    lines.append(f"# kappa_min_constructible={repr(scan['kappa_min_constructible'])} "
                 f"transition={int(scan['constructible_transition'])}")
    _write(out / "kappa_scan.csv", "\n".join(lines) + "\n")
    print(f"kappa_min (tangent condition) = {scan['kappa_min']:.6g}"
          f" [{'interior transition' if scan['transition'] else 'feasible at scan floor'}]")
    print(f"kappa_min (constructible)     = {scan['kappa_min_constructible']:.6g}"
          f" [{'interior transition' if scan['constructible_transition'] else 'constructible at scan floor'}]")
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = resolve_config(args.preset, args.config, args.seed, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "trace":
            return cmd_trace(cfg)
        return cmd_scan_kappa(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
