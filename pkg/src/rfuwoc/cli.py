"""Command-line front end.

    rfuwoc eval      --scenario fig2.json            # all analytic metrics at one point (JSON)
    rfuwoc sweep     --scenario fig2.json --out a.csv
    rfuwoc mc        --scenario fig2.json --trials 1000000 --seed 7
    rfuwoc optimize  --scenario opt.json
    rfuwoc selftest

Exit status: 0 success, 1 configuration error, 2 numerical failure,
3 infeasible optimisation target.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from importlib import resources

from . import __version__
from .e2e import fixed_gain_constant
from .errors import ConfigError, ConvergenceError, InfeasibleError, RfuwocError
from .mellin import DEFAULT_BIVARIATE_REL_TOL, DEFAULT_REL_TOL
from .montecarlo import McConfig, mc_secrecy_counts
from .optimizer import min_power_for_target, saturation_floor
from .scenario import Scenario, point_scenarios, read_scenario_json
from .secrecy import (pnz_asymptotic_high_eve_result, pnz_asymptotic_high_main_result,
                      pnz_exact_result, sop_asymptotic_high_eve_result,
                      sop_asymptotic_high_main_result, sop_lower_bound_result)

SCHEMA_VERSION = "rfuwoc-csv/1"
METRIC_NAMES = ("sop_l", "sop_a", "sop_ae", "pnz", "pnz_a", "pnz_ae")
MC_NAMES = ("mc_sop_exact", "mc_sop_lower", "mc_pnz")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_INFEASIBLE = 0, 1, 2, 3


def _metric_table(sc: Scenario, rel_tol: float | None):
    biv = rel_tol or DEFAULT_BIVARIATE_REL_TOL
    uni = rel_tol or DEFAULT_REL_TOL
    args = (sc.links, sc.eve, sc.relay)
    return {
        "sop_l": lambda: sop_lower_bound_result(*args, sc.secrecy, rel_tol=biv),
        "sop_a": lambda: sop_asymptotic_high_main_result(*args, sc.secrecy, rel_tol=uni),
        "sop_ae": lambda: sop_asymptotic_high_eve_result(*args, sc.secrecy, rel_tol=uni),
        "pnz": lambda: pnz_exact_result(*args, rel_tol=biv),
        "pnz_a": lambda: pnz_asymptotic_high_main_result(*args, rel_tol=uni),
        "pnz_ae": lambda: pnz_asymptotic_high_eve_result(*args, rel_tol=uni),
    }


def selected_metrics(data: dict) -> tuple[str, ...]:
    names = data.get("metrics") or METRIC_NAMES
    unknown = [n for n in names if n not in METRIC_NAMES]
    if unknown:
        raise ConfigError(f"metrics: unknown names {unknown}; choose from {METRIC_NAMES}")
    return tuple(n for n in METRIC_NAMES if n in names)


def run_eval(sc: Scenario, *, rel_tol: float | None = None,
             metrics: tuple[str, ...] = METRIC_NAMES) -> dict:
    """All requested analytic metrics at one point, with diagnostics."""
    table = _metric_table(sc, rel_tol)
    record = {"metrics": {}, "diagnostics": {}}
    for name in metrics:
        start = time.perf_counter()
        res = table[name]()
        record["metrics"][name] = res.value
        record["diagnostics"][name] = {"raw": res.raw, "error_estimate": res.error,
                                       "nodes": res.nodes,
                                       "seconds": round(time.perf_counter() - start, 4)}
    record["theta"] = sc.secrecy.theta
    record["relay_C"] = fixed_gain_constant(sc.links.rf, sc.relay)
    record["uwoc"] = sc.uwoc_label
    return record


def _mc_columns(sc: Scenario, mc: McConfig) -> dict:
    est = mc_secrecy_counts(sc.links, sc.eve, sc.relay, sc.secrecy, mc)
    out = {}
    for key, name in (("sop_exact", "mc_sop_exact"), ("sop_lower", "mc_sop_lower"),
                      ("pnz", "mc_pnz")):
        out[name] = est[key].value
        out[name + "_se"] = est[key].std_error
    return out


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def run_sweep(data: dict, *, rel_tol: float | None = None, mc: McConfig | None = None,
              workers: int = 4) -> str:
    """CSV text, one row per (series, axis point), rows in axis order."""
    metrics = selected_metrics(data)
    points = point_scenarios(data)
    axis = points[0][2].sweep.variable if points[0][2].sweep else None
    mc = mc or points[0][2].mc

    def evaluate(item):
        label, value, sc = item
        row = run_eval(sc, rel_tol=rel_tol, metrics=metrics)["metrics"]
        if mc is not None:
            row.update(_mc_columns(sc, mc))
        return label, value, row

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(evaluate, points))

    columns = ["series", axis or "point"] + list(metrics)
    if mc is not None:
        columns += [c for name in MC_NAMES for c in (name, name + "_se")]
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA_VERSION}\n")
    buf.write(f"# generator: rfuwoc {__version__}\n")
    buf.write(f"# scenario: {data.get('name', 'scenario')}\n")
    buf.write(f"# rel_tol: {rel_tol or 'default'}\n")
    if mc is not None:
        buf.write(f"# mc: trials={mc.trials} seed={mc.master_seed} streams={mc.stream_count}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for label, value, row in rows:
        writer.writerow([label, "" if value is None else _fmt(value)]
                        + [_fmt(row[c]) for c in columns[2:]])
    return buf.getvalue()


def read_sweep_csv(text: str) -> tuple[dict, list[dict]]:
    """Parse CSV produced by :func:`run_sweep` into (metadata, rows)."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    rows = []
    for rec in csv.DictReader(body):
        rows.append({k: (v if k == "series" else (float(v) if v != "" else None))
                     for k, v in rec.items()})
    return meta, rows


def run_mc(data: dict, mc: McConfig, *, rel_tol: float | None = None) -> str:
    """Analytic SOP_L / PNZ next to their Monte Carlo estimates and z-scores."""
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA_VERSION}\n")
    buf.write(f"# scenario: {data.get('name', 'scenario')}\n")
    buf.write(f"# mc: trials={mc.trials} seed={mc.master_seed} streams={mc.stream_count}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", "point", "metric", "analytic", "mc", "mc_se", "z",
                     "mc_sop_exact", "mc_sop_exact_se"])
    for label, value, sc in point_scenarios(data):
        rec = run_eval(sc, rel_tol=rel_tol, metrics=("sop_l", "pnz"))["metrics"]
        est = mc_secrecy_counts(sc.links, sc.eve, sc.relay, sc.secrecy, mc)
        for metric, key in (("sop_l", "sop_lower"), ("pnz", "pnz")):
            e = est[key]
            z = (rec[metric] - e.value) / e.std_error if e.std_error > 0 else 0.0
            writer.writerow([label, "" if value is None else _fmt(value), metric,
                             _fmt(rec[metric]), _fmt(e.value), _fmt(e.std_error), _fmt(z),
                             _fmt(est["sop_exact"].value), _fmt(est["sop_exact"].std_error)])
    return buf.getvalue()


def run_optimize(sc: Scenario) -> dict:
    if sc.optimize is None:
        raise ConfigError("optimize: the scenario has no 'optimize' section")
    t = sc.optimize
    floor = saturation_floor(sc.links, sc.eve, sc.relay, sc.secrecy, t.metric,
                             search_hi=t.search_hi, search_lo=t.search_lo)
    result = {"metric": t.metric, "target": t.target, "search_lo_db": t.search_lo,
              "search_hi_db": t.search_hi, "tol_db": t.tol_db,
              "floor": floor.floor, "floor_asymptotic": floor.asymptotic_at_hi,
              "asymptotic_limit": floor.asymptotic_limit, "floor_knee_db": floor.knee_db}
    result["min_mean_snr_db"] = min_power_for_target(sc.links, sc.eve, sc.relay, sc.secrecy, t)
    return result


def run_selftest(*, rel_tol: float | None = None, trials: int = 200_000,
                 seed: int = 1) -> list[tuple[str, bool, str]]:
    """Invariant checks; ``rel_tol`` overrides every quadrature tolerance."""
    from .selftest import run_checks
    return run_checks(rel_tol=rel_tol, trials=trials, seed=seed)


# --------------------------------------------------------------------------


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _mc_from_args(args, sc_mc: McConfig | None) -> McConfig | None:
    if args.trials is None and args.seed is None:
        return sc_mc
    base = sc_mc or McConfig()
    try:
        return replace(base, trials=args.trials if args.trials is not None else base.trials,
                       master_seed=args.seed if args.seed is not None else base.master_seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rfuwoc",
                                     description="Secrecy metrics of a mixed RF/UWOC relay link.")
    parser.add_argument("--version", action="version", version=f"rfuwoc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True):
        if scenario:
            p.add_argument("--scenario", required=True,
                           help="scenario JSON path, a bundled name such as fig2, or '-' for stdin")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--tol", type=float, help="relative quadrature tolerance")
        p.add_argument("--seed", type=int, help="Monte Carlo master seed")
        p.add_argument("--trials", type=int, help="Monte Carlo trials")

    common(sub.add_parser("eval", help="all analytic metrics at one point"))
    common(sub.add_parser("sweep", help="metrics along the scenario's sweep axis (CSV)"))
    common(sub.add_parser("mc", help="Monte Carlo validation of SOP_L and PNZ (CSV)"))
    common(sub.add_parser("optimize", help="minimum main-link SNR meeting a target"))
    common(sub.add_parser("selftest", help="run the built-in invariant checks"), scenario=False)
    return parser


def _resolve_source(source: str) -> str:
    if source == "-" or source.endswith(".json"):
        return source
    bundled = resources.files("rfuwoc.data").joinpath("scenarios", f"{source}.json")
    if bundled.is_file():
        return str(bundled)
    return source


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and not 0 < args.tol < 1:
        print("error: --tol must lie in (0, 1)", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "selftest":
            results = run_selftest(rel_tol=args.tol, trials=args.trials or 200_000,
                                   seed=args.seed if args.seed is not None else 1)
            lines = [f"{'PASS' if ok else 'FAIL'}  {name}  {detail}" for name, ok, detail in results]
            failed = sum(not ok for _, ok, _ in results)
            lines.append(f"{len(results) - failed}/{len(results)} invariants passed")
            _write("\n".join(lines) + "\n", args.out)
            return EXIT_OK if failed == 0 else EXIT_NUMERIC

        data = read_scenario_json(_resolve_source(args.scenario))
        if args.command == "eval":
            sc = point_scenarios({k: v for k, v in data.items() if k not in ("sweep", "series")})[0][2]
            record = run_eval(sc, rel_tol=args.tol, metrics=selected_metrics(data))
            _write(json.dumps(record, indent=2) + "\n", args.out)
        elif args.command == "sweep":
            first = point_scenarios(data)[0][2]
            _write(run_sweep(data, rel_tol=args.tol, mc=_mc_from_args(args, first.mc)), args.out)
        elif args.command == "mc":
            first = point_scenarios(data)[0][2]
            mc = _mc_from_args(args, first.mc) or McConfig()
            _write(run_mc(data, mc, rel_tol=args.tol), args.out)
        elif args.command == "optimize":
            sc = point_scenarios({k: v for k, v in data.items() if k not in ("sweep", "series")})[0][2]
            _write(json.dumps(run_optimize(sc), indent=2) + "\n", args.out)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except RfuwocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
