import math

import numpy as np
import pytest

from dualsat.channel import build_channel, gain_matrix, peak_gain_dbi
from dualsat.geometry import UserTerminal, build_beam_layout, drop_users
from dualsat.linkbudget import LinkBudget, linear_to_db


@pytest.fixture(scope="module")
def setup():
    budget = LinkBudget()
    lay1 = build_beam_layout(500.0, 7, 250.0, "primary")
    lay2 = build_beam_layout(500.0, 7, 250.0, "secondary")
    return budget, lay1, lay2


def _boresight_user(lay, beam):
    return UserTerminal(position=lay.centers[beam].copy(), home_beam=beam)


def test_boresight_carrier_level(setup):
    budget, lay1, lay2 = setup
    users = [_boresight_user(lay1, 0)]
    dc = build_channel(lay1, lay2, users, budget, seed=0)
    carrier_w = budget.tx_power_per_beam_w * abs(dc.H1[0, 0]) ** 2
    assert abs(linear_to_db(carrier_w) - (-103.0)) <= 0.5


def test_boresight_carrier_to_noise(setup):
    budget, lay1, lay2 = setup
    users = [_boresight_user(lay1, 0)]
    dc = build_channel(lay1, lay2, users, budget, seed=0)
    cn = linear_to_db(budget.tx_power_per_beam_w * abs(dc.H1[0, 0]) ** 2
                      / dc.noise_power_w)
    assert abs(cn - 15.0) <= 0.5


def test_mirrored_users_have_mirrored_magnitudes(setup):
    budget, lay1, lay2 = setup
    pos = np.array([120.0, 80.0])
    mirrored = np.array([120.0, -80.0])
    users = [UserTerminal(position=pos, home_beam=0),
             UserTerminal(position=mirrored, home_beam=0)]
    dc = build_channel(lay1, lay2, users, budget, seed=0)
    # reflection about the x axis permutes the ring beams (k -> 6-k)
    perm = [0, 1, 6, 5, 4, 3, 2]
    a = np.abs(dc.H1[0])
    b = np.abs(dc.H1[1])[perm]
    assert np.allclose(a, b, rtol=1e-12)


def test_rotation_invariance(setup):
    budget, lay1, lay2 = setup
    ang = math.pi / 3.0  # lattice symmetry angle
    rot = np.array([[math.cos(ang), -math.sin(ang)],
                    [math.sin(ang), math.cos(ang)]])
    users = [UserTerminal(position=np.array([90.0, -40.0]), home_beam=0)]
    dc = build_channel(lay1, lay2, users, budget, seed=0)
    users_r = [UserTerminal(position=rot @ users[0].position, home_beam=0)]
    dc_r = build_channel(lay1, lay2, users_r, budget, seed=0)
    assert np.allclose(sorted(np.abs(dc.H1[0])), sorted(np.abs(dc_r.H1[0])),
                       rtol=1e-10)


def test_home_beam_strongest_in_main_lobe(setup):
    budget, lay1, lay2 = setup
    users = drop_users(lay1, 2, seed=5)
    dc = build_channel(lay1, lay2, users, budget, seed=0)
    g = dc.gains(1)
    pos = np.array([u.position for u in users])
    d = np.linalg.norm(pos[:, None, :] - lay1.centers[None, :, :], axis=2)
    for i, u in enumerate(users):
        for b in range(7):
            if b == u.home_beam:
                continue
            if d[i, b] >= d[i, u.home_beam]:
                assert g[i, u.home_beam] >= g[i, b] * (1 - 1e-12)


def test_fixed_seed_bit_identical(setup):
    budget, lay1, lay2 = setup
    users = drop_users(lay1, 2, seed=9)
    a = build_channel(lay1, lay2, users, budget, seed=33)
    b = build_channel(lay1, lay2, users, budget, seed=33)
    assert np.array_equal(a.H1, b.H1)
    assert np.array_equal(a.H2, b.H2)


def test_phase_modes(setup):
    budget, lay1, lay2 = setup
    users = drop_users(lay1, 1, seed=2)
    dc = build_channel(lay1, lay2, users, budget, seed=4)
    # one phase per user: all feeds share it
    ph = np.angle(dc.H1[0])
    assert np.allclose(ph, ph[0])
    dc_i = build_channel(lay1, lay2, users, budget, seed=4, independent_phases=True)
    assert np.std(np.angle(dc_i.H1[0])) > 0.1
    # magnitudes identical across phase modes
    assert np.allclose(np.abs(dc.H1), np.abs(dc_i.H1), rtol=1e-12)


def test_user_outside_coverage_rejected(setup):
    budget, lay1, lay2 = setup
    bad = [UserTerminal(position=np.array([900.0, 900.0]), home_beam=0)]
    with pytest.raises(ValueError):
        build_channel(lay1, lay2, bad, budget, seed=0)


def test_overlay_peak_gain_scaling(setup):
    budget, _, _ = setup
    assert peak_gain_dbi(budget, 250.0, 125.0) == pytest.approx(
        54.0 + 20.0 * math.log10(2.0), rel=1e-12)
    assert peak_gain_dbi(budget, 250.0, 250.0) == pytest.approx(54.0)


def test_gain_matrix_shape_and_positivity(setup):
    budget, lay1, lay2 = setup
    users = drop_users(lay1, 2, seed=1)
    g = gain_matrix(lay1, users, budget, budget.beam_gain_peak_dbi)
    assert g.shape == (14, 7)
    assert np.all(np.isfinite(g)) and np.all(g >= 0.0)
