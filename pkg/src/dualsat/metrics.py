"""Aggregate per-user rates into the comparison criteria: total spectral
efficiency, Jain fairness, power efficiency and the empirical rate CDF."""

from __future__ import annotations

import numpy as np

from .linkbudget import db_to_linear


def spectral_efficiency(per_user_rate) -> float:
    """Sum of per-user rates already normalised to the full system band."""
    r = np.asarray(per_user_rate, dtype=float)
    if r.size and r.min() < 0:
        raise ValueError("negative per-user rate")
    return float(r.sum())


def jain_index(rates) -> float:
    """(sum r)^2 / (n * sum r^2); 1 for equal rates, 1/n for one active user."""
    r = np.asarray(rates, dtype=float)
    if r.size < 1:
        raise ValueError("need at least one rate")
    if r.min() < 0:
        raise ValueError("negative rate")
    s2 = float((r ** 2).sum())
    if s2 == 0.0:
        raise ValueError("Jain index undefined for all-zero rates")
    return float(r.sum() ** 2 / (r.size * s2))


def power_efficiency(se: float, p_tot_dbw: float) -> float:
    """Spectral efficiency per watt of the total power budget."""
    return se / db_to_linear(p_tot_dbw)


def rate_cdf(rates) -> np.ndarray:
    """Sorted per-user rate samples (empirical CDF support points)."""
    return np.sort(np.asarray(rates, dtype=float))


def fraction_below(rates, threshold: float) -> float:
    """Fraction of users under a service threshold (unavailability)."""
    r = np.asarray(rates, dtype=float)
    if r.size == 0:
        return 0.0
    return float(np.mean(r < threshold))
