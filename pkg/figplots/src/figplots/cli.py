"""Command line: render one figure from a sweep CSV.

    dualsat-plot --kind se_sweep --in results.csv --out fig2.png
    dualsat-plot --kind rate_cdf --in rate_samples.csv --out fig3.png --power 22.5
    dualsat-plot --kind pe_sweep --in results.csv --out fig4.png
"""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .plots import KINDS, PlotSpec, render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="dualsat-plot",
                                 description="Render dualsat sweep figures")
    ap.add_argument("--kind", required=True, choices=KINDS)
    ap.add_argument("--in", dest="csv_path", required=True,
                    help="input CSV (results.csv or rate_samples.csv)")
    ap.add_argument("--out", default=None,
                    help="output image path (.png); defaults to "
                         "figures/<scenario_id>/<kind>.png")
    ap.add_argument("--power", type=float, default=None,
                    help="power point for rate_cdf [dBW]")
    ap.add_argument("--crossing", default=None, metavar="A,B",
                    help="annotate the SE crossing of two architectures")
    ap.add_argument("--title", default=None)
    args = ap.parse_args(argv)

    pair = None
    if args.crossing:
        parts = [p.strip() for p in args.crossing.split(",")]
        if len(parts) != 2:
            print("--crossing expects two architecture names", file=sys.stderr)
            return 2
        pair = (parts[0], parts[1])
    try:
        out = args.out or _default_out(args.csv_path, args.kind)
        spec = PlotSpec(kind=args.kind, csv_path=args.csv_path, out_path=out,
                        cdf_power_dbw=args.power, crossing_pair=pair,
                        title=args.title)
        paths = render(spec)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("wrote " + ", ".join(paths))
    return 0


def _default_out(csv_path: str, kind: str) -> str:
    import csv as _csv
    import os

    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = _csv.DictReader(fh)
        first = next(iter(reader), None)
    scenario = (first or {}).get("scenario_id") or "run"
    return os.path.join("figures", scenario, f"{kind}.png")


if __name__ == "__main__":
    sys.exit(main())
