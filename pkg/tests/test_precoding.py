import numpy as np
import pytest

from dualsat.errors import RankDeficientError
from dualsat.precoding import (allocate_powers, sum_capacity_bound,
                               water_fill, zf_directions)


def _rand_channel(rng, n, k, scale=1.0):
    return scale * (rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k)))


def test_zf_identity_channel():
    W = zf_directions(np.eye(4, dtype=complex))
    assert np.allclose(W, np.eye(4), atol=1e-12)


def test_zf_orthogonal_rows():
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(_rand_channel(rng, 6, 6))
    H = q[:3] * np.array([[1.0], [2.0], [0.5]])  # orthogonal rows, mixed norms
    W = zf_directions(H)
    expected = (H.conj() / np.linalg.norm(H, axis=1, keepdims=True)).T
    assert np.allclose(W, expected, atol=1e-10)


def test_zf_residual_small():
    rng = np.random.default_rng(1)
    for _ in range(20):
        H = _rand_channel(rng, 3, 7)
        W = zf_directions(H)
        eff = H @ W
        diag = np.abs(np.diag(eff))
        off = np.abs(eff - np.diag(np.diag(eff))).max()
        assert off <= 1e-9 * diag.min()
        assert np.all(np.abs(np.linalg.norm(W, axis=0) - 1.0) < 1e-12)
        # diagonal is positive real
        assert np.allclose(np.imag(np.diag(eff)), 0.0, atol=1e-12 * diag.min())
        assert np.all(np.real(np.diag(eff)) > 0.0)


def test_zf_rejects_rank_deficient():
    H = np.ones((2, 5), dtype=complex)
    H[1] = H[0] * (1.0 + 1e-13)
    with pytest.raises(RankDeficientError):
        zf_directions(H)
    with pytest.raises(ValueError):
        zf_directions(np.ones((5, 3)))


def test_allocate_identity_hits_limit():
    W = np.eye(5, dtype=complex)
    p = allocate_powers(W, np.eye(5, dtype=complex), per_antenna_limit_w=17.38)
    assert np.allclose(p, 17.38)


def test_allocate_homogeneity():
    rng = np.random.default_rng(2)
    H = _rand_channel(rng, 4, 6)
    W = zf_directions(H)
    p1 = allocate_powers(W, H, 3.0)
    p2 = allocate_powers(W, H, 6.0)
    assert np.allclose(p2, 2.0 * p1, rtol=1e-12)


def test_allocate_binding_feed():
    rng = np.random.default_rng(3)
    for _ in range(20):
        H = _rand_channel(rng, 4, 6)
        W = zf_directions(H)
        p = allocate_powers(W, H, 2.5)
        feed_loads = (np.abs(W) ** 2) @ p
        assert feed_loads.max() / 2.5 == pytest.approx(1.0, abs=1e-9)
        assert np.all(feed_loads <= 2.5 * (1 + 1e-9))
        # permuting users permutes powers (all equal under the uniform rule)
        assert np.allclose(p, p[0])


def test_allocate_maxrate_beats_uniform():
    rng = np.random.default_rng(4)
    H = _rand_channel(rng, 3, 5)
    W = zf_directions(H)
    noise = 0.5
    d2 = np.abs(np.einsum("ij,ji->i", H, W)) ** 2
    p_uni = allocate_powers(W, H, 2.0)
    p_opt = allocate_powers(W, H, 2.0, noise_w=noise, mode="maxrate")
    rate = lambda p: np.sum(np.log2(1 + p * d2 / noise))
    assert rate(p_opt) >= rate(p_uni) - 1e-9
    assert np.all((np.abs(W) ** 2 @ p_opt) <= 2.0 * (1 + 1e-6))


def test_water_fill_exact():
    g = np.array([2.0, 1.0, 0.25])
    p = water_fill(g, 3.0)
    assert p.sum() == pytest.approx(3.0, rel=1e-12)
    # common water level on the active set
    level = p + 1.0 / g
    active = p > 0
    assert np.allclose(level[active], level[active][0], rtol=1e-12)
    assert np.all(level[~active] >= level[active][0] - 1e-12)


def test_bound_single_user_closed_form():
    rng = np.random.default_rng(5)
    h = _rand_channel(rng, 1, 6)
    noise = 1.7e-12
    for P in (1e-3, 1.0, 314.0):
        c = sum_capacity_bound(h, P, noise)
        ref = np.log2(1.0 + P * np.linalg.norm(h) ** 2 / noise)
        assert c == pytest.approx(ref, rel=1e-9)


def test_bound_low_snr_expansion():
    rng = np.random.default_rng(6)
    H = _rand_channel(rng, 5, 6)
    noise = 1.0
    P = 1e-6 * noise
    c = sum_capacity_bound(H, P, noise)
    ref = P * max(np.linalg.norm(H[i]) ** 2 for i in range(5)) / (noise * np.log(2.0))
    assert c == pytest.approx(ref, rel=0.01)


def test_bound_matches_two_user_golden_section():
    rng = np.random.default_rng(7)
    H = _rand_channel(rng, 2, 5)
    noise = 1.3
    P = 25.0

    def cap(p1):
        p = np.array([p1, P - p1])
        Z = np.eye(5, dtype=complex) + (H.conj().T * (p / noise)) @ H
        return np.linalg.slogdet(Z)[1] / np.log(2.0)

    a, b = 0.0, P
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    c1, c2 = b - gr * (b - a), a + gr * (b - a)
    for _ in range(300):
        if cap(c1) < cap(c2):
            a, c1 = c1, c2
            c2 = a + gr * (b - a)
        else:
            b, c2 = c2, c1
            c1 = b - gr * (b - a)
    assert sum_capacity_bound(H, P, noise) == pytest.approx(cap((a + b) / 2.0),
                                                            abs=1e-8)


def test_bound_dominates_zf_sum_rate():
    rng = np.random.default_rng(8)
    noise = 1.1e-12
    for _ in range(50):
        n, k = rng.integers(1, 6), 7
        H = _rand_channel(rng, int(n), k, scale=1e-6)
        P = float(rng.uniform(0.5, 500.0))
        W = zf_directions(H)
        p = allocate_powers(W, H, P / k)
        d2 = np.abs(np.einsum("ij,ji->i", H, W)) ** 2
        zf_rate = np.sum(np.log2(1.0 + p * d2 / noise))
        assert sum_capacity_bound(H, P, noise) >= zf_rate * (1 - 1e-9)


def test_bound_monotone_concave_in_power():
    rng = np.random.default_rng(9)
    H = _rand_channel(rng, 4, 6, scale=1e-6)
    noise = 1.6e-12
    powers = np.linspace(0.5, 400.0, 25)
    caps = [sum_capacity_bound(H, float(P), noise) for P in powers]
    diffs = np.diff(caps)
    assert np.all(diffs >= -1e-12)
    assert np.all(np.diff(caps, 2) <= 1e-6)


def test_bound_input_validation():
    with pytest.raises(ValueError):
        sum_capacity_bound(np.ones((1, 2)), -1.0, 1.0)


def test_bound_nonconvergence_reports_residual():
    from dualsat.errors import ConvergenceError

    rng = np.random.default_rng(10)
    H = _rand_channel(rng, 6, 7, scale=1e-6)
    with pytest.raises(ConvergenceError) as err:
        sum_capacity_bound(H, 50.0, 1.6e-12, max_iter=1, gap_tol=0.0)
    assert err.value.residual > 0.0
