"""Command-line interface.

Subcommands:
  run       execute a scenario sweep and write CSV outputs
  table1    print the nominal link-budget audit
  patterns  dump the beam-hopping slot tables
  crossing  locate the SE crossing of two architectures in a results CSV

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import ConfigError, NumericalError
from .harness import (build_geometry, emit_csv, emit_summary,
                      find_crossing, run_sweep, _patterns,
                      SweepRow, CSV_HEADER)
from .linkbudget import budget_audit
from .scenario import Scenario, load_scenario, scenario_help


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dualsat",
                                 description="Dual multibeam satellite co-location simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario sweep")
    run.add_argument("scenario", nargs="?", help="scenario config file (defaults used if omitted)")
    run.add_argument("--seed", type=int, help="master seed override")
    run.add_argument("--drops", type=int, help="drops per power point override")
    run.add_argument("--out", default=None,
                     help="output directory (overrides output.directory)")
    run.add_argument("--arch", action="append",
                     help="architecture filter (repeatable)")
    run.add_argument("--jobs", type=int, help="parallel workers override")
    run.add_argument("--keys", action="store_true",
                     help="print known config keys and exit")

    sub.add_parser("table1", help="print the nominal link-budget audit")

    pat = sub.add_parser("patterns", help="dump beam-hopping slot tables")
    pat.add_argument("scenario", nargs="?", help="scenario config file")
    pat.add_argument("--out", help="write the table to a file instead of stdout")

    cross = sub.add_parser("crossing", help="SE crossing between two architectures")
    cross.add_argument("results", help="results.csv produced by `run`")
    cross.add_argument("--a", default="coordinated")
    cross.add_argument("--b", default="cognitive_nopc")
    return ap


def _load(args) -> Scenario:
    sc = load_scenario(args.scenario) if getattr(args, "scenario", None) else Scenario()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "drops", None) is not None:
        overrides["drops"] = args.drops
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = args.jobs
    if getattr(args, "arch", None):
        overrides["architectures"] = tuple(args.arch)
    if overrides:
        sc = replace(sc, **overrides)
    return sc.validate()


def _cmd_run(args) -> int:
    if args.keys:
        print(scenario_help())
        return 0
    sc = _load(args)
    done = sc.sweep_powers_dbw()

    def progress(i, n):
        print(f"\r  power point {i}/{n}", end="", file=sys.stderr, flush=True)

    results = run_sweep(sc, progress=progress)
    print(file=sys.stderr)
    paths = emit_csv(results, args.out or sc.output_directory)
    print(emit_summary(results))
    print(f"wrote {paths['results']}, {paths['cdf']}, {paths['meta']}")
    return 0


def _cmd_table1(_args) -> int:
    rows = budget_audit()
    width = max(len(r[0]) for r in rows)
    ok_all = True
    print(f"{'parameter':<{width}}  {'computed':>10}  {'reference':>10}  tol    status")
    for label, val, ref, tol, ok in rows:
        ok_all &= ok
        print(f"{label:<{width}}  {val:>10.3f}  {ref:>10.3f}  ±{tol:<4}  "
              f"{'ok' if ok else 'FAIL'}")
    return 0 if ok_all else 3


def _cmd_patterns(args) -> int:
    sc = load_scenario(args.scenario) if args.scenario else Scenario()
    sc.validate()
    layout1, _, layout2_cog = build_geometry(sc)
    if layout2_cog is None:
        print("scenario has no cognitive architecture; nothing to dump", file=sys.stderr)
        return 0
    prim, sec = _patterns(sc, layout1, layout2_cog)
    text = prim.to_table("primary") + "\n" + sec.to_table("secondary") + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _parse_results_csv(path: str) -> list[SweepRow]:
    import csv

    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = CSV_HEADER.split(",")
        if reader.fieldnames != expected:
            raise ConfigError(path, f"unexpected CSV header {reader.fieldnames}")
        for rec in reader:
            rows.append(SweepRow(
                scenario_id=rec["scenario_id"], architecture=rec["architecture"],
                p_tot_dbw=float(rec["p_tot_dbw"]), drops=int(rec["drops"]),
                se_mean=float(rec["se_mean"]), se_stderr=float(rec["se_stderr"]),
                jain_mean=float(rec["jain_mean"]), pe_mean=float(rec["pe_mean"]),
                unavailable_frac=float(rec["unavailable_frac"])))
    return rows


def _cmd_crossing(args) -> int:
    rows = _parse_results_csv(args.results)
    x = find_crossing(rows, args.a, args.b)
    if x is None:
        print(f"no SE crossing between {args.a} and {args.b}")
    else:
        print(f"SE crossing {args.a} / {args.b}: {x:.3f} dBW")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "table1":
            return _cmd_table1(args)
        if args.command == "patterns":
            return _cmd_patterns(args)
        if args.command == "crossing":
            return _cmd_crossing(args)
        raise AssertionError(args.command)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
