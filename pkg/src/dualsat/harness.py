"""Monte Carlo driver: power sweep, per-drop evaluation, CSV emission.

Seeding: every drop derives its streams from
`numpy.random.SeedSequence(master_seed, spawn_key=(power_index, drop_index))`
split into a user-drop stream and a phase stream, so no state leaks between
sweep points and any parallel schedule reproduces the serial output byte for
byte. Drops that fail on a rank-deficient schedule are redrawn with
spawn_key=(power_index, drop_index, attempt) and counted in the metadata.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import architectures as arch
from .beamhopping import primary_pattern, secondary_pattern
from .channel import build_channel
from .errors import NumericalError, RankDeficientError
from .geometry import build_beam_layout, build_overlay_layout, drop_users
from .linkbudget import LinkBudget, db_to_linear
from .metrics import fraction_below, jain_index, power_efficiency, spectral_efficiency
from .scenario import Scenario

CSV_HEADER = ("scenario_id,architecture,p_tot_dbw,drops,se_mean,se_stderr,"
              "jain_mean,pe_mean,unavailable_frac")
CDF_HEADER = "scenario_id,architecture,p_tot_dbw,drop_index,user_index,rate"


@dataclass
class SweepRow:
    scenario_id: str
    architecture: str
    p_tot_dbw: float
    drops: int
    se_mean: float
    se_stderr: float
    jain_mean: float
    pe_mean: float
    unavailable_frac: float


@dataclass
class SweepResults:
    rows: list[SweepRow]
    cdf_samples: dict  # (architecture, p_tot_dbw) -> list of (drop, user, rate)
    meta: dict
    scenario: Scenario
    drop_se: dict = field(default_factory=dict)  # (architecture, p_tot_dbw) -> ndarray


def budget_from_scenario(sc: Scenario) -> LinkBudget:
    return LinkBudget(carrier_frequency_hz=sc.carrier_frequency_hz,
                      user_bandwidth_hz=sc.bandwidth_hz,
                      boresight_distance_m=sc.boresight_distance_km * 1e3,
                      beam_gain_peak_dbi=sc.beam_peak_gain_dbi,
                      ut_antenna_gain_dbi=sc.ut_gain_dbi,
                      clear_sky_temperature_k=sc.clear_sky_temperature_k,
                      saturated_power_per_beam_w=sc.saturated_power_w,
                      output_backoff_db=sc.obo_db)


def build_geometry(sc: Scenario):
    """Layouts shared by every drop of a scenario."""
    layout1 = build_beam_layout(sc.coverage_radius_km, sc.k1, sc.beam_radius_km,
                                satellite_id="primary")
    need_overlay = any(a.startswith("cognitive") for a in sc.architectures)
    if need_overlay:
        layout2_cog = build_overlay_layout(
            layout1, sc.k1 * sc.subbeams_per_parent,
            sc.beam_radius_km * sc.subbeam_radius_ratio)
    else:
        layout2_cog = None
    layout2 = build_beam_layout(sc.coverage_radius_km, sc.k2, sc.beam_radius_km,
                                satellite_id="secondary")
    return layout1, layout2, layout2_cog


def _patterns(sc: Scenario, layout1, layout2_cog):
    prim = primary_pattern(layout1, sc.slot_reuse)
    sec = secondary_pattern(prim, layout1, layout2_cog,
                            max_active_per_slot=sc.max_active_subbeams or None)
    return prim, sec


def evaluate_drop(sc: Scenario, budget: LinkBudget, geometry, patterns,
                  power_index: int, drop_index: int):
    """One Monte Carlo drop: returns {architecture: per-user rate vector}
    plus bookkeeping. Deterministic in (scenario, power_index, drop_index)."""
    layout1, layout2, layout2_cog = geometry
    p_tot_w = db_to_linear(sc.sweep_powers_dbw()[power_index])
    attempt = 0
    while True:
        spawn = (power_index, drop_index) if attempt == 0 else \
            (power_index, drop_index, attempt)
        ss = np.random.SeedSequence(sc.master_seed, spawn_key=spawn)
        seed_users, seed_phases = ss.spawn(2)
        users = drop_users(layout1, sc.users_per_beam, seed_users,
                           rx_gain_dbi=sc.ut_gain_dbi,
                           noise_temperature_k=sc.clear_sky_temperature_k)
        dc = build_channel(layout1, layout2, users, budget, seed_phases,
                           independent_phases=sc.independent_phases)
        dc_cog = None
        if layout2_cog is not None:
            dc_cog = build_channel(layout1, layout2_cog, users, budget,
                                   seed_phases,
                                   independent_phases=sc.independent_phases)
        try:
            results = {}
            name = "?"
            for name in sc.architectures:
                if name == "conventional":
                    res = arch.eval_conventional(
                        dc, p_tot_w, coupled_colors=sc.conventional_coupled_colors)
                elif name == "coordinated":
                    res = arch.eval_coordinated(dc, p_tot_w, sc.alpha,
                                                sc.lambda_interf)
                elif name == "cooperative":
                    res = arch.eval_cooperative(dc, p_tot_w)
                elif name == "cognitive_nopc":
                    res = arch.eval_cognitive(dc_cog, p_tot_w, patterns[0],
                                              patterns[1], power_control=False,
                                              i_over_n_cap_db=sc.i_over_n_cap_db)
                elif name == "cognitive_pc":
                    res = arch.eval_cognitive(dc_cog, p_tot_w, patterns[0],
                                              patterns[1], power_control=True,
                                              i_over_n_cap_db=sc.i_over_n_cap_db)
                else:
                    raise ValueError(f"unknown architecture {name}")
                results[name] = res.per_user_rate
            return results, attempt
        except RankDeficientError:
            attempt += 1
            if attempt > 8:
                raise
        except NumericalError as exc:
            raise NumericalError(
                f"{name} at power index {power_index}, drop {drop_index}: "
                f"{exc}") from exc


def _drop_worker(args):
    sc, power_index, drop_index = args
    budget = budget_from_scenario(sc)
    geometry = build_geometry(sc)
    patterns = _patterns(sc, geometry[0], geometry[2]) if geometry[2] is not None else None
    return evaluate_drop(sc, budget, geometry, patterns, power_index, drop_index)


def run_sweep(sc: Scenario, progress=None) -> SweepResults:
    sc.validate()
    budget = budget_from_scenario(sc)
    geometry = build_geometry(sc)
    patterns = _patterns(sc, geometry[0], geometry[2]) if geometry[2] is not None else None
    powers = sc.sweep_powers_dbw()
    cdf_points = {p for p in powers if any(abs(p - c) < 1e-9 for c in sc.cdf_powers_dbw)}

    rows: list[SweepRow] = []
    cdf_samples: dict = {}
    drop_se: dict = {}
    resampled = 0
    t0 = time.time()

    for pi, p_dbw in enumerate(powers):
        if sc.jobs > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=sc.jobs) as pool:
                drop_results = list(pool.map(
                    _drop_worker, [(sc, pi, di) for di in range(sc.drops)],
                    chunksize=max(1, sc.drops // (4 * sc.jobs))))
        else:
            drop_results = [evaluate_drop(sc, budget, geometry, patterns, pi, di)
                            for di in range(sc.drops)]
        per_arch: dict[str, dict[str, list]] = {
            a: {"se": [], "jain": [], "pe": [], "unavail": []}
            for a in sc.architectures}
        for di, (rates_by_arch, attempts) in enumerate(drop_results):
            resampled += attempts
            for a, rates in rates_by_arch.items():
                se = spectral_efficiency(rates)
                per_arch[a]["se"].append(se)
                per_arch[a]["jain"].append(jain_index(rates))
                per_arch[a]["pe"].append(power_efficiency(se, p_dbw))
                per_arch[a]["unavail"].append(
                    fraction_below(rates, sc.unavailable_threshold))
                if p_dbw in cdf_points:
                    cdf_samples.setdefault((a, p_dbw), []).extend(
                        (di, ui, float(r)) for ui, r in enumerate(rates))
        for a in sc.architectures:
            se = np.array(per_arch[a]["se"])
            drop_se[(a, p_dbw)] = se
            stderr = float(se.std(ddof=1) / np.sqrt(len(se))) if len(se) > 1 else 0.0
            rows.append(SweepRow(
                scenario_id=sc.scenario_id, architecture=a, p_tot_dbw=p_dbw,
                drops=sc.drops, se_mean=float(se.mean()), se_stderr=stderr,
                jain_mean=float(np.mean(per_arch[a]["jain"])),
                pe_mean=float(np.mean(per_arch[a]["pe"])),
                unavailable_frac=float(np.mean(per_arch[a]["unavail"]))))
        if progress:
            progress(pi + 1, len(powers))

    meta = {
        "scenario": sc.echo(),
        "master_seed": sc.master_seed,
        "drops_per_point": sc.drops,
        "power_points": powers,
        "resampled_drops": resampled,
        "wall_seconds": round(time.time() - t0, 3),
        "seed_rule": "SeedSequence(master_seed, spawn_key=(power_index, drop_index[, attempt]))",
    }
    return SweepResults(rows=rows, cdf_samples=cdf_samples, meta=meta,
                        scenario=sc, drop_se=drop_se)


def find_crossing(rows: list[SweepRow], arch_a: str, arch_b: str):
    """Smallest-power crossing of the two SE(P) curves, linearly interpolated.

    Returns None when the difference never changes sign.
    """
    pa = sorted((r.p_tot_dbw, r.se_mean) for r in rows if r.architecture == arch_a)
    pb = sorted((r.p_tot_dbw, r.se_mean) for r in rows if r.architecture == arch_b)
    if len(pa) != len(pb) or not pa:
        raise ValueError("curves must share the same power grid")
    powers = [p for p, _ in pa]
    diff = [a - b for (_, a), (_, b) in zip(pa, pb)]
    for k in range(len(diff) - 1):
        if diff[k] == 0.0 and diff[k + 1] == 0.0:
            continue
        if diff[k] == 0.0:
            return powers[k]
        if diff[k] * diff[k + 1] < 0.0:
            frac = diff[k] / (diff[k] - diff[k + 1])
            return powers[k] + frac * (powers[k + 1] - powers[k])
    return None


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (
            r.scenario_id, r.architecture, r.p_tot_dbw, r.drops, r.se_mean,
            r.se_stderr, r.jain_mean, r.pe_mean, r.unavailable_frac)))
    return "\n".join(lines) + "\n"


def render_cdf_csv(results: SweepResults) -> str:
    lines = [CDF_HEADER]
    for (a, p_dbw), samples in sorted(results.cdf_samples.items()):
        for drop_i, user_i, rate in samples:
            lines.append(",".join(_fmt(v) for v in (
                results.scenario.scenario_id, a, p_dbw, drop_i, user_i, rate)))
    return "\n".join(lines) + "\n"


def emit_csv(results: SweepResults, out_dir) -> dict:
    """Write results.csv, rate_samples.csv and the metadata sidecar.

    The CSVs are fully determined by (config, master seed); timestamps only
    appear in the sidecar. Returns the written paths.
    """
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    csv_text = render_csv(results.rows)
    paths["results"] = os.path.join(out_dir, "results.csv")
    with open(paths["results"], "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text)
    cdf_text = render_cdf_csv(results)
    paths["cdf"] = os.path.join(out_dir, "rate_samples.csv")
    with open(paths["cdf"], "w", encoding="utf-8", newline="") as fh:
        fh.write(cdf_text)
    meta = dict(results.meta)
    meta["content_sha256"] = hashlib.sha256(csv_text.encode()).hexdigest()
    meta["cdf_sha256"] = hashlib.sha256(cdf_text.encode()).hexdigest()
    meta["written_at"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    paths["meta"] = os.path.join(out_dir, "run_meta.json")
    with open(paths["meta"], "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


def emit_summary(results: SweepResults) -> str:
    """Human-readable sweep summary including curve crossings."""
    lines = [f"scenario {results.scenario.scenario_id}: "
             f"{len(results.rows)} rows, "
             f"{results.meta['drops_per_point']} drops/point"]
    archs = list(results.scenario.architectures)
    for i, a in enumerate(archs):
        for b in archs[i + 1:]:
            x = find_crossing(results.rows, a, b)
            where = f"{x:.2f} dBW" if x is not None else "none"
            lines.append(f"  SE crossing {a} / {b}: {where}")
    return "\n".join(lines)
