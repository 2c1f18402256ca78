"""Dual-satellite baseband channel from the link budget and geometry.

Per user i and feed j the power gain is

    |h_ij|^2 = G_tx(theta_ij) * G_rx / L_fs

with the off-axis angle theta_ij computed from the planar offset divided by
the common boresight slant range (all users sit at the slant range; curvature
is second order at this scale). Each (user, satellite) pair gets one uniform
random phase, shared across that satellite's feeds - a single line-of-sight
path. Set independent_phases=True to draw one phase per coefficient instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna import pattern_gain
from .geometry import BeamLayout, UserTerminal
from .linkbudget import LinkBudget, db_to_linear, free_space_loss_db


@dataclass
class DualChannel:
    H1: np.ndarray          # (n_users, K1) complex
    H2: np.ndarray          # (n_users, K2) complex
    noise_power_w: float    # thermal noise over the full user band
    layout1: BeamLayout
    layout2: BeamLayout
    users: list[UserTerminal]
    budget: LinkBudget

    @property
    def n_users(self) -> int:
        return len(self.users)

    def gains(self, sat: int) -> np.ndarray:
        """Linear power gains |h|^2 toward satellite 1 or 2."""
        return np.abs(self.H1 if sat == 1 else self.H2) ** 2


def peak_gain_dbi(budget: LinkBudget, reference_radius_km: float,
                  beam_radius_km: float) -> float:
    """Scale the budget's peak gain to another beam size.

    Aperture gain grows with the inverse square of the beamwidth, so halving
    the beam radius adds ~6 dB over the reference beam.
    """
    return budget.beam_gain_peak_dbi + 20.0 * math.log10(reference_radius_km / beam_radius_km)


def gain_matrix(layout: BeamLayout, users: list[UserTerminal],
                budget: LinkBudget, peak_dbi: float) -> np.ndarray:
    """Linear power-gain matrix (n_users, K) for one satellite."""
    slant_km = budget.boresight_distance_m / 1e3
    theta_3db = math.atan(layout.beam_radius_3db_km / slant_km)
    pos = np.array([u.position for u in users])
    d = np.linalg.norm(pos[:, None, :] - layout.centers[None, :, :], axis=2)
    theta = np.arctan(d / slant_km)
    g_tx = db_to_linear(peak_dbi) * pattern_gain(theta, theta_3db)
    g_rx = np.array([db_to_linear(u.rx_gain_dbi) for u in users])
    l_fs = db_to_linear(free_space_loss_db(budget.boresight_distance_m,
                                           budget.carrier_frequency_hz))
    return g_tx * g_rx[:, None] / l_fs


def build_channel(layout1: BeamLayout, layout2: BeamLayout,
                  users: list[UserTerminal], budget: LinkBudget, seed,
                  independent_phases: bool = False) -> DualChannel:
    """Assemble the dual channel. Amplitudes are deterministic given the
    geometry; phases are reproducible for a fixed seed.

    layout1's beam radius anchors the budget's stated peak gain; layout2's
    peak is rescaled by the radius ratio (see `peak_gain_dbi`).
    """
    if not users:
        raise ValueError("no users")
    # home beams index layout1: the user pool is dropped over the first
    # satellite's footprint
    for i, u in enumerate(users):
        home = layout1.centers[u.home_beam]
        if np.linalg.norm(u.position - home) > layout1.beam_radius_3db_km * (1 + 1e-9):
            raise ValueError(f"user {i} outside coverage of its home beam")

    g1 = gain_matrix(layout1, users, budget, budget.beam_gain_peak_dbi)
    g2 = gain_matrix(layout2, users, budget,
                     peak_gain_dbi(budget, layout1.beam_radius_3db_km,
                                   layout2.beam_radius_3db_km))

    rng = np.random.default_rng(seed)
    n = len(users)
    if independent_phases:
        ph1 = rng.uniform(0.0, 2.0 * math.pi, g1.shape)
        ph2 = rng.uniform(0.0, 2.0 * math.pi, g2.shape)
    else:
        ph1 = rng.uniform(0.0, 2.0 * math.pi, n)[:, None]
        ph2 = rng.uniform(0.0, 2.0 * math.pi, n)[:, None]
    H1 = np.sqrt(g1) * np.exp(1j * ph1)
    H2 = np.sqrt(g2) * np.exp(1j * ph2)

    return DualChannel(H1=H1, H2=H2, noise_power_w=budget.noise_power_w,
                       layout1=layout1, layout2=layout2, users=users,
                       budget=budget)
