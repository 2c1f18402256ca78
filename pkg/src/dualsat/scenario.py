"""Scenario configuration: defaults, flat key/value config files, validation.

Config files are plain text, one `section.key = value` pair per line, `#`
comments allowed. Unknown keys are hard errors so typos cannot silently
fall back to defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .architectures import ARCHITECTURES
from .errors import ConfigError


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("true", "1", "yes", "on"):
        return True
    if v in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_float_list(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _parse_str_list(s: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in s.split(",") if x.strip())


@dataclass(frozen=True)
class Scenario:
    scenario_id: str = "default"
    # geometry
    k1: int = 7
    k2: int = 7
    coverage_radius_km: float = 500.0
    beam_radius_km: float = 250.0
    users_per_beam: int = 2
    # link budget overrides
    carrier_frequency_hz: float = 20e9
    bandwidth_hz: float = 500e6
    boresight_distance_km: float = 37_569.0
    beam_peak_gain_dbi: float = 54.0
    ut_gain_dbi: float = 41.0
    clear_sky_temperature_k: float = 235.34
    saturated_power_w: float = 55.0
    obo_db: float = 5.0
    # channel
    independent_phases: bool = False
    # sweep
    sweep_start_dbw: float = -5.0
    sweep_stop_dbw: float = 50.0
    sweep_step_dbw: float = 2.5
    # run
    drops: int = 200
    master_seed: int = 1
    jobs: int = 1
    architectures: tuple[str, ...] = ARCHITECTURES
    # scheduler
    alpha: float = 0.4
    lambda_interf: float = 1.0
    # cognitive
    slot_reuse: int = 3
    subbeam_radius_ratio: float = 0.5
    subbeams_per_parent: int = 4
    conventional_coupled_colors: bool = True
    i_over_n_cap_db: float = 12.0
    max_active_subbeams: int = 0  # 0 = unlimited
    # metrics / reporting
    unavailable_threshold: float = 0.1
    cdf_powers_dbw: tuple[float, ...] = (22.5,)
    output_directory: str = "out"

    def validate(self):
        if self.sweep_start_dbw > self.sweep_stop_dbw:
            raise ConfigError("sweep.start_dbw", "sweep start exceeds stop")
        if self.sweep_step_dbw <= 0:
            raise ConfigError("sweep.step_dbw", "sweep step must be positive")
        if self.drops < 1:
            raise ConfigError("run.drops", "drops must be >= 1")
        if self.users_per_beam < 1:
            raise ConfigError("geometry.users_per_beam", "must be >= 1")
        if self.k1 < 1 or self.k2 < 1:
            raise ConfigError("geometry.k1/k2", "beam counts must be >= 1")
        for a in self.architectures:
            if a not in ARCHITECTURES:
                raise ConfigError("run.architectures", f"unknown architecture {a!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("scheduler.alpha", "alpha must be in (0, 1)")
        if self.lambda_interf < 0:
            raise ConfigError("scheduler.lambda_interf", "must be >= 0")
        if self.jobs < 1:
            raise ConfigError("run.jobs", "jobs must be >= 1")
        return self

    def sweep_powers_dbw(self) -> list[float]:
        out = []
        p = self.sweep_start_dbw
        while p <= self.sweep_stop_dbw + 1e-9:
            out.append(round(p, 9))
            p += self.sweep_step_dbw
        return out

    def echo(self) -> dict:
        """Flat config dict (key -> value) for metadata sidecars."""
        return {key: getattr(self, attr) for key, (attr, _, _) in _KEYS.items()}


# config key -> (Scenario field, parser, description)
_KEYS = {
    "scenario.id": ("scenario_id", str, "scenario identifier"),
    "geometry.k1": ("k1", int, "beams on satellite 1"),
    "geometry.k2": ("k2", int, "beams on satellite 2"),
    "geometry.coverage_radius_km": ("coverage_radius_km", float, "coverage disc radius"),
    "geometry.beam_radius_km": ("beam_radius_km", float, "3 dB beam radius"),
    "geometry.users_per_beam": ("users_per_beam", int, "candidate users per beam"),
    "budget.carrier_frequency_hz": ("carrier_frequency_hz", float, "carrier frequency"),
    "budget.bandwidth_hz": ("bandwidth_hz", float, "total user bandwidth"),
    "budget.boresight_distance_km": ("boresight_distance_km", float, "slant range"),
    "budget.beam_peak_gain_dbi": ("beam_peak_gain_dbi", float, "beam peak gain"),
    "budget.ut_gain_dbi": ("ut_gain_dbi", float, "terminal antenna gain"),
    "budget.clear_sky_temperature_k": ("clear_sky_temperature_k", float, "system temperature"),
    "budget.saturated_power_w": ("saturated_power_w", float, "saturated HPA power"),
    "budget.obo_db": ("obo_db", float, "output back-off"),
    "channel.independent_phases": ("independent_phases", _parse_bool,
                                   "independent phase per coefficient"),
    "sweep.start_dbw": ("sweep_start_dbw", float, "sweep start"),
    "sweep.stop_dbw": ("sweep_stop_dbw", float, "sweep stop"),
    "sweep.step_dbw": ("sweep_step_dbw", float, "sweep step"),
    "run.drops": ("drops", int, "Monte Carlo drops per power point"),
    "run.seed": ("master_seed", int, "master seed"),
    "run.jobs": ("jobs", int, "parallel workers"),
    "run.architectures": ("architectures", _parse_str_list, "architectures to evaluate"),
    "scheduler.alpha": ("alpha", float, "semi-orthogonality threshold"),
    "scheduler.lambda_interf": ("lambda_interf", float, "interference penalty weight"),
    "conventional.coupled_colors": ("conventional_coupled_colors", _parse_bool,
                                    "couple the satellites' colour singletons"),
    "cognitive.slot_reuse": ("slot_reuse", int, "primary slot reuse factor"),
    "cognitive.subbeam_radius_ratio": ("subbeam_radius_ratio", float,
                                       "secondary/primary beam radius ratio"),
    "cognitive.subbeams_per_parent": ("subbeams_per_parent", int,
                                      "secondary beams per primary beam"),
    "cognitive.i_over_n_cap_db": ("i_over_n_cap_db", float, "secondary I/N cap"),
    "cognitive.max_active_subbeams": ("max_active_subbeams", int,
                                      "per-slot secondary beam budget (0 = unlimited)"),
    "metrics.unavailable_threshold": ("unavailable_threshold", float,
                                      "rate below which a user counts as unavailable"),
    "report.cdf_powers_dbw": ("cdf_powers_dbw", _parse_float_list,
                              "power points at which per-user rates are dumped"),
    "output.directory": ("output_directory", str, "directory for run outputs"),
}


def load_scenario(path: str) -> Scenario:
    """Parse a scenario file; unknown keys and bad values raise ConfigError."""
    overrides = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}", f"expected key = value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _KEYS:
                raise ConfigError(key, "unknown configuration key")
            attr, parser, _ = _KEYS[key]
            try:
                overrides[attr] = parser(value)
            except (ValueError, TypeError) as exc:
                raise ConfigError(key, f"bad value {value!r}: {exc}") from exc
    return replace(Scenario(), **overrides).validate()


def scenario_help() -> str:
    lines = ["known configuration keys:"]
    base = Scenario()
    for key, (attr, _, desc) in _KEYS.items():
        default = getattr(base, attr)
        if isinstance(default, tuple):
            default = ",".join(str(x) for x in default)
        lines.append(f"  {key:<36} {desc} (default: {default})")
    return "\n".join(lines)
