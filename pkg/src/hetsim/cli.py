"""Experiment runner: evaluates the analytic expressions, cross-validates
them against the Monte Carlo simulator, reproduces the reference table and
density-sweep figure, and emits machine-readable CSV/JSON records.

Exit codes: 0 success, 2 invalid parameters, 3 numerical-accuracy or
transform-domain failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from . import coverage as cov
from . import mcsim
from .netmodel import (
    NetworkParams,
    ParameterError,
    db_to_linear,
    fig1_params,
    linear_to_db,
    load_params,
    table1_params,
    validate,
)
from .xform import AccuracyError, DomainError

# reference values of the published downlink ASE comparison (K, N, beta)
TABLE1_ROWS = [
    (10, 100, 0.2), (10, 100, 0.5), (10, 100, 1.0),
    (10, 200, 0.2), (10, 200, 0.5), (10, 200, 1.0),
    (20, 100, 0.2), (20, 100, 0.5), (20, 100, 1.0),
]
PAPER_TABLE1_MACRO = {
    (10, 100, 0.2): 3.59, (10, 100, 0.5): 2.84, (10, 100, 1.0): 0.37,
    (10, 200, 0.2): 5.19, (10, 200, 0.5): 4.11, (10, 200, 1.0): 0.37,
    (20, 100, 0.2): 4.79, (20, 100, 0.5): 3.8, (20, 100, 1.0): 0.53,
}
PAPER_TABLE1_SC = {
    (10, 100, 0.2): 1.93e-4, (10, 100, 0.5): 4.59e-4, (10, 100, 1.0): 9.2e-4,
    (10, 200, 0.2): 3.87e-4, (10, 200, 0.5): 9.68e-4, (10, 200, 1.0): 1.9e-3,
    (20, 100, 0.2): 1.63e-4, (20, 100, 0.5): 4.1e-4, (20, 100, 1.0): 8.15e-4,
}

FIG1_QS = (0.2, 0.5, 0.8)
FIG1_LAM_START = 1e-4
FIG1_LAM_STOP = 3e-2
FIG1_POINTS = 25

_PARAM_COLS = [
    "n_antennas", "n_mues", "sc_density", "dl_fraction", "pathloss_exponent",
    "sc_pair_distance", "macro_radius", "sir_threshold_db",
    "p_m", "p_mu", "p_s", "p_su", "nulling_fraction",
]

_INT_FIELDS = {"n_antennas", "n_mues"}


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _param_values(p: NetworkParams) -> dict:
    out = {name: getattr(p, name) for name in _PARAM_COLS if name != "sir_threshold_db"}
    out["sir_threshold_db"] = linear_to_db(p.sir_threshold)
    return out


def _emit(records: list[dict], header: list[str], args) -> None:
    fmt = getattr(args, "format", "csv")
    out = getattr(args, "out", None)
    if fmt == "json":
        payload = json.dumps(records, indent=2)
        if out is None:
            sys.stdout.write(payload + "\n")
        else:
            Path(out).write_text(payload + "\n", encoding="utf-8")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        writer.writerow([_fmt(rec.get(col)) for col in header])
    if out is None:
        sys.stdout.write(buf.getvalue())
    else:
        Path(out).write_text(buf.getvalue(), encoding="utf-8")


# ---------------------------------------------------------------------------
# parameter assembly
# ---------------------------------------------------------------------------


def _add_param_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=Path, help="flat key-value parameter file")
    sp.add_argument("--n", type=int, dest="n_antennas", help="macro BS antennas N")
    sp.add_argument("--k", type=int, dest="n_mues", help="served macro users K")
    sp.add_argument("--lambda", type=float, dest="sc_density", help="small cells per m^2")
    sp.add_argument("--q", type=float, dest="dl_fraction", help="small-cell downlink probability")
    sp.add_argument("--alpha", type=float, dest="pathloss_exponent")
    sp.add_argument("--d", type=float, dest="sc_pair_distance", help="SBS-SUE distance, m")
    sp.add_argument("--r-m", type=float, dest="macro_radius", help="macro cell radius, m")
    sp.add_argument("--t-db", type=float, dest="t_db", help="SIR threshold, dB")
    sp.add_argument("--p-m", type=float, dest="p_m")
    sp.add_argument("--p-mu", type=float, dest="p_mu")
    sp.add_argument("--p-s", type=float, dest="p_s")
    sp.add_argument("--p-su", type=float, dest="p_su")
    sp.add_argument("--beta", type=float, dest="nulling_fraction")


def _add_output_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_mc_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--validate", action="store_true", dest="validate_mc",
                    help="add Monte Carlo columns and a confidence-interval flag")
    sp.add_argument("--drops", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--fidelity", choices=("distribution", "channel"), default="distribution")


def _params_from_args(args) -> NetworkParams:
    p = NetworkParams()
    if getattr(args, "config", None):
        p = load_params(args.config, base=p)
    overrides = {}
    for f in fields(NetworkParams):
        v = getattr(args, f.name, None)
        if v is not None:
            overrides[f.name] = v
    if getattr(args, "t_db", None) is not None:
        overrides["sir_threshold"] = db_to_linear(args.t_db)
    return replace(p, **overrides)


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    seed = int.from_bytes(os.urandom(8), "big") >> 1
    print(f"hetsim: seed = {seed}", file=sys.stderr)
    return seed


def _sweep_points(args, base: NetworkParams) -> list[NetworkParams]:
    spec = getattr(args, "sweep", None)
    if not spec:
        return [base]
    field_name, start, stop, points = spec[0], float(spec[1]), float(spec[2]), int(spec[3])
    if points < 2:
        raise ParameterError("sweep needs at least 2 points")
    if getattr(args, "log", False):
        if start <= 0 or stop <= 0:
            raise ParameterError("log sweep requires positive bounds")
        vals = np.geomspace(start, stop, points)
    else:
        vals = np.linspace(start, stop, points)
    known = {f.name for f in fields(NetworkParams)}
    out = []
    for v in vals:
        if field_name == "sir_threshold_db":
            out.append(replace(base, sir_threshold=db_to_linear(float(v))))
        elif field_name in known:
            value = int(round(float(v))) if field_name in _INT_FIELDS else float(v)
            out.append(replace(base, **{field_name: value}))
        else:
            raise ParameterError(f"unknown sweep parameter {field_name!r}")
    return out


# ---------------------------------------------------------------------------
# uplink / downlink commands
# ---------------------------------------------------------------------------

_UPLINK_HEADER = _PARAM_COLS + [
    "coverage", "coverage_error", "n_terms", "method", "macro_ase", "bound",
    "mc_mean", "mc_ci_low", "mc_ci_high", "inside_ci", "n_drops", "seed",
    "wall_time_s",
]


def cmd_uplink(args) -> int:
    base = _params_from_args(args)
    points = _sweep_points(args, base)
    seed = _resolve_seed(args) if args.validate_mc else None
    records = []
    for p in points:
        t0 = time.perf_counter()
        c = cov.uplink_mue_coverage(p)
        ase = p.n_mues * c.value * math.log2(1.0 + p.sir_threshold)
        rec = _param_values(p)
        rec.update(
            coverage=c.value, coverage_error=c.error_estimate, n_terms=c.n_terms,
            method=c.method, macro_ase=ase, bound=None,
            mc_mean=None, mc_ci_low=None, mc_ci_high=None, inside_ci=None,
            n_drops=None, seed=None, wall_time_s=None,
        )
        if args.bound:
            rec["bound"] = cov.uplink_mue_coverage_bound(p)
        if args.validate_mc:
            cfg = mcsim.DropConfig(p, n_drops=args.drops, seed=seed, fidelity=args.fidelity)
            est = mcsim.estimate_uplink_mue_coverage(cfg)
            rec.update(
                mc_mean=est.mean, mc_ci_low=est.ci_low, mc_ci_high=est.ci_high,
                inside_ci=est.contains(c.value), n_drops=est.n_drops, seed=seed,
            )
        rec["wall_time_s"] = time.perf_counter() - t0
        records.append(rec)
    _emit(records, _UPLINK_HEADER, args)
    return 0


_DOWNLINK_HEADER = _PARAM_COLS + [
    "macro_coverage", "macro_coverage_error", "n_terms", "method", "macro_ase",
    "sbs_coverage", "sc_ase", "clamped",
    "mc_mue_mean", "mc_mue_ci_low", "mc_mue_ci_high", "mue_inside_ci",
    "mc_sbs_mean", "mc_sbs_ci_low", "mc_sbs_ci_high", "sbs_inside_ci",
    "n_drops", "seed", "wall_time_s",
]


def cmd_downlink(args) -> int:
    base = _params_from_args(args)
    points = _sweep_points(args, base)
    seed = _resolve_seed(args) if args.validate_mc else None
    clamp = not args.no_clamp
    records = []
    for p in points:
        t0 = time.perf_counter()
        ase = cov.macro_ase_dl(p)
        c = ase.coverage
        sbs = cov.dl_sbs_coverage(p, clamp=clamp)
        sc = cov.sc_ase_dl(p, clamp=clamp)
        rec = _param_values(p)
        rec.update(
            macro_coverage=c.value, macro_coverage_error=c.error_estimate,
            n_terms=c.n_terms, method=c.method, macro_ase=ase.value,
            sbs_coverage=sbs.value, sc_ase=sc.value, clamped=clamp,
            mc_mue_mean=None, mc_mue_ci_low=None, mc_mue_ci_high=None,
            mue_inside_ci=None, mc_sbs_mean=None, mc_sbs_ci_low=None,
            mc_sbs_ci_high=None, sbs_inside_ci=None,
            n_drops=None, seed=None, wall_time_s=None,
        )
        if args.validate_mc:
            cfg = mcsim.DropConfig(p, n_drops=args.drops, seed=seed, fidelity=args.fidelity)
            mue_est, sbs_est = mcsim.estimate_dl_coverage(cfg)
            rec.update(
                mc_mue_mean=mue_est.mean, mc_mue_ci_low=mue_est.ci_low,
                mc_mue_ci_high=mue_est.ci_high, mue_inside_ci=mue_est.contains(c.value),
                mc_sbs_mean=sbs_est.mean, mc_sbs_ci_low=sbs_est.ci_low,
                mc_sbs_ci_high=sbs_est.ci_high,
                sbs_inside_ci=sbs_est.contains(cov.dl_sbs_coverage(p, clamp=True).value),
                n_drops=args.drops, seed=seed,
            )
        rec["wall_time_s"] = time.perf_counter() - t0
        records.append(rec)
    _emit(records, _DOWNLINK_HEADER, args)
    return 0


_OPTQ_HEADER = _PARAM_COLS + ["q_star", "ase_star", "sue_coverage", "sbs_coverage"]


def cmd_optimal_q(args) -> int:
    base = _params_from_args(args)
    if args.lam_points < 2:
        raise ParameterError("optimal-q sweep needs at least 2 points")
    lams = (
        np.geomspace(args.lam_start, args.lam_stop, args.lam_points)
        if args.log
        else np.linspace(args.lam_start, args.lam_stop, args.lam_points)
    )
    records = []
    for lam in lams:
        q_star, ase = cov.optimal_q(base, sc_density=float(lam))
        p = replace(base, sc_density=float(lam), dl_fraction=q_star)
        rec = _param_values(p)
        sue, sbs = ase.coverage
        rec.update(q_star=q_star, ase_star=ase.value,
                   sue_coverage=sue.value, sbs_coverage=sbs.value)
        records.append(rec)
    _emit(records, _OPTQ_HEADER, args)
    return 0


# ---------------------------------------------------------------------------
# reproduction targets
# ---------------------------------------------------------------------------

_TABLE1_HEADER = ["k", "n", "beta", "macro_ase", "sc_ase",
                  "paper_macro_ase", "paper_sc_ase", "rel_dev"]


def table1_records() -> list[dict]:
    """The nine-row downlink ASE comparison under the documented parameter
    inference (P_su = 0.1 W, small-cell column unclamped)."""
    records = []
    for (k, n, beta) in TABLE1_ROWS:
        p = table1_params(k, n, beta)
        macro = cov.macro_ase_dl(p).value
        sc = cov.sc_ase_dl(p, clamp=False).value
        ref = PAPER_TABLE1_MACRO[(k, n, beta)]
        records.append({
            "k": k, "n": n, "beta": beta,
            "macro_ase": macro, "sc_ase": sc,
            "paper_macro_ase": ref, "paper_sc_ase": PAPER_TABLE1_SC[(k, n, beta)],
            "rel_dev": (macro - ref) / ref,
        })
    return records


_FIG1_HEADER = ["sc_density", "dl_fraction", "sue_coverage", "sbs_coverage", "sc_ase"]


def fig1_records(
    lam_start: float = FIG1_LAM_START,
    lam_stop: float = FIG1_LAM_STOP,
    points: int = FIG1_POINTS,
    qs=FIG1_QS,
) -> list[dict]:
    """Small-cell ASE against density, one curve per duplex fraction."""
    records = []
    lams = np.geomspace(lam_start, lam_stop, points)
    for q in qs:
        for lam in lams:
            p = fig1_params(float(lam), q)
            ase = cov.sc_ase_ul(p)
            sue, sbs = ase.coverage
            records.append({
                "sc_density": float(lam), "dl_fraction": q,
                "sue_coverage": sue.value, "sbs_coverage": sbs.value,
                "sc_ase": ase.value,
            })
    return records


def trend_ratios(records: list[dict] | None = None) -> dict:
    """Headline ratios of the reference table with their published targets."""
    recs = {(r["k"], r["n"], r["beta"]): r for r in (records or table1_records())}
    return {
        "macro_n200_over_n100": {
            "value": recs[(10, 200, 0.2)]["macro_ase"] / recs[(10, 100, 0.2)]["macro_ase"],
            "target": 1.45, "tolerance": 0.10,
        },
        "macro_b05_over_b02": {
            "value": recs[(10, 100, 0.5)]["macro_ase"] / recs[(10, 100, 0.2)]["macro_ase"],
            "target": 0.80, "tolerance": 0.10,
        },
        "sc_b05_over_b02_unclamped": {
            "value": recs[(10, 100, 0.5)]["sc_ase"] / recs[(10, 100, 0.2)]["sc_ase"],
            "target": 2.4, "tolerance": 0.15,
        },
    }


def calibration_report() -> str:
    """Every inferred parameter and every deviation from the published
    reference values, computed live from the current implementation."""
    recs = table1_records()
    ratios = trend_ratios(recs)
    lines = []
    add = lines.append
    add("hetsim calibration report")
    add("=========================")
    add("")
    add("inferred parameters")
    add("-------------------")
    add("- The published downlink ASE comparison states no SUE transmit power.")
    add("  Reproduction uses P_su = 0.1 W, the value consistent with the")
    add("  full-nulling macro rows (the (20,100,1) row matches to 0.09%); the")
    add("  published density-sweep figure instead uses P_su = P_mu = 5 mW.")
    add("- The nulling probability M/(lambda*pi*R_m^2) is left unclamped for")
    add("  the table's small-cell column: its internal ratios (e.g. the")
    add("  (10,200,1)/(10,100,1) small-cell ratio of ~2.07 = 190/90) are")
    add("  consistent only with the raw value.  Everywhere else the")
    add("  probability is clamped to [0, 1].")
    add("")
    add("position averaging")
    add("------------------")
    add("- Uplink macro analysis: co-user distances are i.i.d. uniform-disk")
    add("  radii, so the conditional interference product collapses exactly")
    add("  to the (K-1)-th power of one averaged factor.")
    add("- Small-cell pair analysis: the pair is placed uniformly in the")
    add("  macro disk; user distances then follow the two-independent-")
    add("  uniform-points density and the K-term product is replaced by the")
    add("  K-th power of its average.  This ignores the correlation induced")
    add("  by the shared pair position; the simulator realizes the")
    add("  correlated geometry (an independent-distances mode exists for")
    add("  sensitivity checks) and agreement stays within the Monte Carlo")
    add("  confidence intervals on the validation grid.")
    add("- Downlink small-cell analysis: the cell's distance from the macro")
    add("  BS is averaged under the uniform-disk radial density.")
    add("")
    add("numerics")
    add("--------")
    add("- Gamma-tail sums run on nonnegative tail terms, so the alternating-")
    add("  series cancellation of the raw-derivative form is structurally")
    add("  absent; the tracked compensated-summation error bound stays below")
    add("  1e-12 for every antenna count up to 200 on the table grid and no")
    add("  double-to-extended escalation occurs (the extended-precision path")
    add("  is still provided and exercised by the acceptance suite).")
    add("- The shifted-argument coverage upper bound is evaluated exactly as")
    add("  printed; its shifted argument can leave the transform domain near")
    add("  the cell center, which raises a domain error rather than adopting")
    add("  an alternative reading, and the bound itself is vacuously large")
    add("  in low-interference regimes.")
    add("- The nulled-cell count is the degrees-of-freedom budget M; the")
    add("  per-user reading is available as a simulator switch.")
    add("")
    add("downlink ASE comparison (macro column)")
    add("--------------------------------------")
    add("  (K,N,beta)      computed   published   rel dev")
    for r in recs:
        add(
            f"  ({r['k']:>2},{r['n']:>3},{r['beta']:<3g})   "
            f"{r['macro_ase']:>8.4f}   {r['paper_macro_ase']:>9.4g}   "
            f"{r['rel_dev']*100:+6.2f}%"
        )
    add("")
    add("trend ratios")
    add("------------")
    for name, info in ratios.items():
        lo = info["target"] * (1 - info["tolerance"])
        hi = info["target"] * (1 + info["tolerance"])
        ok = lo <= info["value"] <= hi
        add(
            f"- {name}: {info['value']:.4f} vs target {info['target']:g} "
            f"+-{info['tolerance']*100:.0f}% -> {'PASS' if ok else 'DEVIATION'}"
        )
    add("")
    add("deviations")
    add("----------")
    add("- The (10,100,1) and (10,200,1) macro rows compute to 0.3751 against")
    add("  a published 0.37 (+1.38%), outside a 1% gate.  The published pair")
    add("  (0.37, 0.53) is internally inconsistent with the closed form,")
    add("  which pins their ratio to sqrt(2) = 1.414 (published: 1.432); no")
    add("  admissible SUE power reconciles both rows at 1%.")
    add("- The small-cell ASE column is declared non-reproducible in absolute")
    add("  terms: its values exceed the lambda*log2(1+T) ceiling implied by")
    add("  the ASE definition at lambda = 1e-4.  Its M-proportional shape is")
    add("  reproduced only if the un-nulled branch is negligible, whereas")
    add("  under the stated geometry the macro interference at a typical")
    add("  cell is far below the 10 m desired link, leaving the un-nulled")
    add("  branch within ~2% of the nulled one; the unclamped beta-ratio")
    add("  therefore computes near 1 instead of the published ~2.4 and is")
    add("  recorded here as a deviation rather than asserted.")
    add("")
    return "\n".join(lines)


def cmd_reproduce(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.target == "table1":
        records = table1_records()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_TABLE1_HEADER)
        for rec in records:
            w.writerow([_fmt(rec[c]) for c in _TABLE1_HEADER])
        (outdir / "table1.csv").write_text(buf.getvalue(), encoding="utf-8")
    else:
        records = fig1_records(args.lam_start, args.lam_stop, args.lam_points)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_FIG1_HEADER)
        for rec in records:
            w.writerow([_fmt(rec[c]) for c in _FIG1_HEADER])
        (outdir / "fig1.csv").write_text(buf.getvalue(), encoding="utf-8")
    (outdir / "calibration_report.txt").write_text(calibration_report(), encoding="utf-8")
    return 0


# ---------------------------------------------------------------------------
# validation grid
# ---------------------------------------------------------------------------

_VALIDATE_HEADER = [
    "config_id", "direction", "n_antennas", "n_mues", "sc_density",
    "dl_fraction", "nulling_fraction", "analytic", "method",
    "mc_mean", "mc_ci_low", "mc_ci_high", "inside_ci", "n_drops", "seed",
]


def analytic_coverage(direction: str, params: NetworkParams):
    if direction == "ul-mue":
        return cov.uplink_mue_coverage(params)
    if direction == "ul-sue":
        return cov.sue_coverage_ul(params)
    if direction == "ul-sbs":
        return cov.sbs_coverage_ul(params)
    if direction == "dl-mue":
        return cov.dl_mue_coverage(params)
    if direction == "dl-sbs":
        return cov.dl_sbs_coverage(params, clamp=True)
    raise ParameterError(f"unknown direction {direction!r}")


def mc_coverage(direction: str, cfg: mcsim.DropConfig) -> mcsim.McEstimate:
    if direction == "ul-mue":
        return mcsim.estimate_uplink_mue_coverage(cfg)
    if direction == "ul-sue":
        return mcsim.estimate_ul_sc_coverage(cfg, "sue")
    if direction == "ul-sbs":
        return mcsim.estimate_ul_sc_coverage(cfg, "sbs")
    if direction == "dl-mue":
        return mcsim.estimate_dl_mue_coverage(cfg)
    if direction == "dl-sbs":
        return mcsim.estimate_dl_sbs_coverage(cfg)
    raise ParameterError(f"unknown direction {direction!r}")


def validation_records(n_drops: int, seed: int, fidelity: str = "distribution") -> list[dict]:
    records = []
    for entry in mcsim.validation_grid():
        p = entry["params"]
        ana = analytic_coverage(entry["direction"], p)
        cfg = mcsim.DropConfig(p, n_drops=n_drops, seed=seed, fidelity=fidelity)
        est = mc_coverage(entry["direction"], cfg)
        records.append({
            "config_id": entry["id"], "direction": entry["direction"],
            "n_antennas": p.n_antennas, "n_mues": p.n_mues,
            "sc_density": p.sc_density, "dl_fraction": p.dl_fraction,
            "nulling_fraction": p.nulling_fraction,
            "analytic": ana.value, "method": ana.method,
            "mc_mean": est.mean, "mc_ci_low": est.ci_low,
            "mc_ci_high": est.ci_high, "inside_ci": est.contains(ana.value),
            "n_drops": n_drops, "seed": seed,
        })
    return records


def cmd_validate(args) -> int:
    seed = _resolve_seed(args)
    records = validation_records(args.drops, seed, args.fidelity)
    _emit(records, _VALIDATE_HEADER, args)
    outside = [r["config_id"] for r in records if not r["inside_ci"]]
    if outside:
        print(f"hetsim: outside 99% CI: {', '.join(outside)}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hetsim",
        description="coverage/ASE analysis of a massive-MIMO macrocell "
        "overlaid with Poisson small cells in flexible/reverse TDD",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    up = sub.add_parser("uplink", help="macro uplink coverage and ASE")
    _add_param_args(up)
    up.add_argument("--sweep", nargs=4, metavar=("FIELD", "START", "STOP", "POINTS"))
    up.add_argument("--log", action="store_true", help="log-spaced sweep")
    up.add_argument("--bound", action="store_true", help="add the series upper bound")
    _add_mc_args(up)
    _add_output_args(up)
    up.set_defaults(func=cmd_uplink)

    dn = sub.add_parser("downlink", help="macro downlink + small-cell coverage and ASE")
    _add_param_args(dn)
    dn.add_argument("--sweep", nargs=4, metavar=("FIELD", "START", "STOP", "POINTS"))
    dn.add_argument("--log", action="store_true")
    dn.add_argument("--no-clamp", action="store_true",
                    help="use the raw (unclamped) nulling probability")
    _add_mc_args(dn)
    _add_output_args(dn)
    dn.set_defaults(func=cmd_downlink)

    oq = sub.add_parser("optimal-q", help="duty-cycle optimizer over a density sweep")
    _add_param_args(oq)
    oq.add_argument("--lam-start", type=float, default=1e-5)
    oq.add_argument("--lam-stop", type=float, default=3e-2)
    oq.add_argument("--lam-points", type=int, default=9)
    oq.add_argument("--log", action="store_true", default=True)
    _add_output_args(oq)
    oq.set_defaults(func=cmd_optimal_q)

    rp = sub.add_parser("reproduce", help="reproduce the reference table or figure")
    rp.add_argument("target", choices=("table1", "fig1"))
    rp.add_argument("--outdir", type=str, default=".")
    rp.add_argument("--lam-start", type=float, default=FIG1_LAM_START)
    rp.add_argument("--lam-stop", type=float, default=FIG1_LAM_STOP)
    rp.add_argument("--lam-points", type=int, default=FIG1_POINTS)
    rp.set_defaults(func=cmd_reproduce)

    va = sub.add_parser("validate", help="analytic vs Monte Carlo on the standard grid")
    va.add_argument("--drops", type=int, default=20000)
    va.add_argument("--seed", type=int, default=None)
    va.add_argument("--fidelity", choices=("distribution", "channel"), default="distribution")
    _add_output_args(va)
    va.set_defaults(func=cmd_validate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"hetsim: parameter error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, AccuracyError) as exc:
        print(f"hetsim: numerical error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
