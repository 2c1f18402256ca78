import math

import numpy as np
import pytest

from dualsat.antenna import antenna_gain, pattern_gain
from dualsat.linkbudget import db_to_linear

THETA_3DB = math.atan(250.0 / 37_569.0)


def test_boresight_is_peak():
    assert pattern_gain(0.0, THETA_3DB) == pytest.approx(1.0, abs=1e-12)
    g = antenna_gain(0.0, 54.0, THETA_3DB)
    assert g == pytest.approx(db_to_linear(54.0), rel=1e-12)


def test_half_power_at_theta_3db():
    rel = pattern_gain(THETA_3DB, THETA_3DB)
    loss_db = -10.0 * math.log10(rel)
    assert abs(loss_db - 3.0) <= 0.2


def test_main_lobe_monotone():
    g_half = pattern_gain(0.5 * THETA_3DB, THETA_3DB)
    g_one = pattern_gain(THETA_3DB, THETA_3DB)
    g_two = pattern_gain(2.0 * THETA_3DB, THETA_3DB)
    assert g_two < g_one < g_half
    # fine sweep across the main lobe
    thetas = np.linspace(0.0, 1.5 * THETA_3DB, 400)
    vals = pattern_gain(thetas, THETA_3DB)
    assert np.all(np.diff(vals) < 1e-15)


def test_angle_folding_symmetry():
    assert pattern_gain(-THETA_3DB, THETA_3DB) == pytest.approx(
        pattern_gain(THETA_3DB, THETA_3DB), rel=1e-12)


def test_vectorized_matches_scalar():
    thetas = np.linspace(0.0, 3.0 * THETA_3DB, 50)
    vec = pattern_gain(thetas, THETA_3DB)
    scalars = np.array([pattern_gain(float(t), THETA_3DB) for t in thetas])
    assert np.allclose(vec, scalars, rtol=1e-12, atol=0)
