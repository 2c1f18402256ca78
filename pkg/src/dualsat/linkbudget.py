"""Ka-band forward-link budget: free-space loss, thermal noise and the
per-beam power chain (saturated HPA power, back-off, EIRP, carrier level).

All dB quantities are power ratios (10*log10). Distances are metres and
frequencies Hz at this level; the geometry module works in km and converts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 299_792_458.0  # m/s
BOLTZMANN = 1.380649e-23  # J/K


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        raise ValueError("dB conversion requires a positive value")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class LinkBudget:
    """Nominal clear-sky link budget for one satellite beam.

    Defaults reproduce a 20 GHz GEO multibeam forward link with a 500 MHz
    user band, 54 dBi beam peak gain, 41 dBi terminal gain and a 55 W HPA
    operated 5 dB backed off.
    """

    carrier_frequency_hz: float = 20e9
    user_bandwidth_hz: float = 500e6
    boresight_distance_m: float = 37_569e3
    beam_gain_peak_dbi: float = 54.0
    ut_antenna_gain_dbi: float = 41.0
    clear_sky_temperature_k: float = 235.34
    saturated_power_per_beam_w: float = 55.0
    output_backoff_db: float = 5.0
    total_power_dbw: float = 29.0

    def __post_init__(self):
        for name in ("carrier_frequency_hz", "user_bandwidth_hz",
                     "boresight_distance_m", "clear_sky_temperature_k",
                     "saturated_power_per_beam_w"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be positive and finite, got {v}")
        for name in ("beam_gain_peak_dbi", "ut_antenna_gain_dbi",
                     "output_backoff_db", "total_power_dbw"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def tx_power_per_beam_w(self) -> float:
        """Operating HPA power: saturated power reduced by the back-off."""
        return self.saturated_power_per_beam_w / db_to_linear(self.output_backoff_db)

    @property
    def eirp_dbw(self) -> float:
        return linear_to_db(self.tx_power_per_beam_w) + self.beam_gain_peak_dbi

    @property
    def path_loss_db(self) -> float:
        return free_space_loss_db(self.boresight_distance_m, self.carrier_frequency_hz)

    @property
    def carrier_power_dbw(self) -> float:
        """Received carrier at boresight through the nominal chain."""
        return self.eirp_dbw - self.path_loss_db + self.ut_antenna_gain_dbi

    @property
    def noise_power_dbw(self) -> float:
        return noise_power_dbw(self.clear_sky_temperature_k, self.user_bandwidth_hz)

    @property
    def noise_power_w(self) -> float:
        return noise_power_w(self.clear_sky_temperature_k, self.user_bandwidth_hz)

    @property
    def carrier_to_noise_db(self) -> float:
        return self.carrier_power_dbw - self.noise_power_dbw

    @property
    def total_power_w(self) -> float:
        return db_to_linear(self.total_power_dbw)


def free_space_loss_db(distance_m: float, frequency_hz: float) -> float:
    """Free-space path loss 20*log10(4*pi*d*f/c) in dB."""
    if distance_m <= 0 or frequency_hz <= 0:
        raise ValueError("distance and frequency must be positive")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * frequency_hz / SPEED_OF_LIGHT)


def noise_power_w(temperature_k: float, bandwidth_hz: float) -> float:
    """Thermal noise k*T*B in watts."""
    if temperature_k <= 0 or bandwidth_hz <= 0:
        raise ValueError("temperature and bandwidth must be positive")
    return BOLTZMANN * temperature_k * bandwidth_hz


def noise_power_dbw(temperature_k: float, bandwidth_hz: float) -> float:
    return linear_to_db(noise_power_w(temperature_k, bandwidth_hz))


# Reference values and tolerances for the nominal budget audit printed by the
# `table1` CLI subcommand.
_AUDIT_ROWS = (
    ("path_loss_db", "Path loss [dB]", 210.0, 0.2),
    ("noise_power_dbw", "Noise power N [dBW]", -118.0, 0.2),
    ("carrier_power_dbw", "Carrier power C [dBW]", -103.0, 0.5),
    ("carrier_to_noise_db", "C/N [dB]", 15.0, 0.5),
    ("tx_power_per_beam_w", "Tx power per beam [W]", 17.38, 0.1),
)


def budget_audit(budget: LinkBudget | None = None):
    """Audit the nominal budget chain against its reference values.

    Returns a list of (label, computed, reference, tolerance, ok) tuples.
    """
    budget = budget or LinkBudget()
    rows = []
    for attr, label, ref, tol in _AUDIT_ROWS:
        val = getattr(budget, attr)
        rows.append((label, val, ref, tol, abs(val - ref) <= tol))
    return rows
