"""CSV readers for the simulator's delimited outputs.

The sweep file schema is
    scenario_id,architecture,p_tot_dbw,drops,se_mean,se_stderr,jain_mean,
    pe_mean,unavailable_frac
and the per-user sample file
    scenario_id,architecture,p_tot_dbw,drop_index,user_index,rate
Both are consumed verbatim; a missing column is reported by name.
"""

from __future__ import annotations

import csv

SWEEP_COLUMNS = ("scenario_id", "architecture", "p_tot_dbw", "drops",
                 "se_mean", "se_stderr", "jain_mean", "pe_mean",
                 "unavailable_frac")
SAMPLE_COLUMNS = ("scenario_id", "architecture", "p_tot_dbw", "drop_index",
                  "user_index", "rate")

_FLOATS = {"p_tot_dbw", "se_mean", "se_stderr", "jain_mean", "pe_mean",
           "unavailable_frac", "rate"}
_INTS = {"drops", "drop_index", "user_index"}


class SchemaError(ValueError):
    pass


def _read(path: str, columns) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        for col in columns:
            if col not in names:
                raise SchemaError(f"{path}: missing column {col!r}")
        rows = []
        for rec in reader:
            row = {}
            for col in columns:
                raw = rec[col]
                if col in _FLOATS:
                    row[col] = float(raw)
                elif col in _INTS:
                    row[col] = int(raw)
                else:
                    row[col] = raw
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def read_sweep(path: str) -> list[dict]:
    return _read(path, SWEEP_COLUMNS)


def read_samples(path: str) -> list[dict]:
    return _read(path, SAMPLE_COLUMNS)


def se_crossing(rows: list[dict], arch_a: str, arch_b: str):
    """Smallest-power SE crossing of two architectures, linearly
    interpolated on the sweep grid; None without a sign change."""
    series = {}
    for r in rows:
        series.setdefault(r["architecture"], {})[r["p_tot_dbw"]] = r["se_mean"]
    if arch_a not in series or arch_b not in series:
        raise SchemaError(f"architectures {arch_a!r}/{arch_b!r} not in the CSV")
    powers = sorted(set(series[arch_a]) & set(series[arch_b]))
    diff = [series[arch_a][p] - series[arch_b][p] for p in powers]
    for k in range(len(diff) - 1):
        if diff[k] == 0.0 and diff[k + 1] == 0.0:
            continue
        if diff[k] == 0.0:
            return powers[k]
        if diff[k] * diff[k + 1] < 0.0:
            frac = diff[k] / (diff[k] - diff[k + 1])
            return powers[k] + frac * (powers[k + 1] - powers[k])
    return None
