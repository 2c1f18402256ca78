"""Tapered-aperture reflector radiation pattern.

The co-polar gain follows the J1/J3 Bessel form commonly used for multibeam
satellite antennas:

    u      = 2.07123 * sin(theta) / sin(theta_3dB)
    G(u)   = G_max * (J1(u)/(2u) + 36*J3(u)/u^3)^2

The constant 2.07123 places the half-power point exactly at theta_3dB
(the bracket equals 1/sqrt(2) there) and the bracket tends to 1 as u -> 0.
"""

from __future__ import annotations

import numpy as np
from scipy.special import j1, jv

from .linkbudget import db_to_linear

U_3DB = 2.07123


def pattern_gain(theta_rad, theta_3db_rad):
    """Normalised pattern (linear, 1 at boresight) at off-axis angle theta.

    theta may be a scalar or ndarray; negative angles are folded by symmetry.
    """
    theta = np.abs(np.asarray(theta_rad, dtype=float))
    u = U_3DB * np.sin(theta) / np.sin(theta_3db_rad)
    small = u < 1e-6
    u_safe = np.where(small, 1.0, u)
    val = (j1(u_safe) / (2.0 * u_safe) + 36.0 * jv(3, u_safe) / u_safe**3) ** 2
    out = np.where(small, 1.0, val)
    if np.ndim(theta_rad) == 0:
        return float(out)
    return out


def antenna_gain(theta_rad, peak_gain_dbi: float, theta_3db_rad: float):
    """Absolute transmit gain (linear) toward an off-axis angle."""
    return db_to_linear(peak_gain_dbi) * pattern_gain(theta_rad, theta_3db_rad)
