"""Zero-forcing precoding with per-antenna power limits, and the joint
sum-capacity upper bound via the dual multiple-access problem.

The precoder columns are the (unit-norm) right pseudoinverse columns of the
scheduled channel, so the effective channel H @ W is diagonal with positive
real entries. Power allocation is decoupled from the directions: the default
rule gives every user the same power, scaled so the most loaded feed meets
its limit exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, RankDeficientError

RANK_TOL = 1e-10


def zf_directions(H_sched: np.ndarray) -> np.ndarray:
    """Unit-norm ZF direction matrix W (K, n) for the scheduled rows of H.

    Raises RankDeficientError when the smallest singular value is below
    RANK_TOL times the largest; the caller should reschedule.
    """
    H = np.asarray(H_sched)
    n, k = H.shape
    if n > k:
        raise ValueError(f"cannot zero-force {n} users on {k} feeds")
    sv = np.linalg.svd(H, compute_uv=False)
    if sv[-1] < RANK_TOL * sv[0]:
        raise RankDeficientError(
            f"scheduled set numerically rank deficient (sv ratio {sv[-1] / sv[0]:.2e})")
    W = np.linalg.pinv(H)
    W = W / np.linalg.norm(W, axis=0, keepdims=True)
    return W


def allocate_powers(W: np.ndarray, H_sched: np.ndarray,
                    per_antenna_limit_w: float, noise_w: float | None = None,
                    mode: str = "uniform") -> np.ndarray:
    """Per-user transmit powers under per-antenna limits.

    "uniform" (default): equal powers p = P_ant / max_k sum_j |W_kj|^2, which
    makes the most loaded feed meet the limit with equality. "maxrate" solves
    max sum log2(1 + p_j d_j^2 / N) over the same polytope (needs noise_w).
    """
    if per_antenna_limit_w <= 0:
        raise ValueError("per-antenna power limit must be positive")
    loads = np.sum(np.abs(W) ** 2, axis=1)  # per-feed load at unit user power
    n = W.shape[1]
    if mode == "uniform":
        return np.full(n, per_antenna_limit_w / loads.max())
    if mode == "maxrate":
        if noise_w is None:
            raise ValueError("maxrate allocation needs the noise power")
        from scipy.optimize import minimize

        d2 = np.abs(np.einsum("ij,ji->i", np.asarray(H_sched), W)) ** 2
        A = np.abs(W) ** 2  # (K, n): feed k load of user j at unit power

        def neg_rate(p):
            return -np.sum(np.log2(1.0 + p * d2 / noise_w))

        def neg_rate_grad(p):
            return -(d2 / noise_w) / ((1.0 + p * d2 / noise_w) * np.log(2.0))

        p0 = np.full(n, per_antenna_limit_w / loads.max())
        cons = [{"type": "ineq",
                 "fun": lambda p, row=row: per_antenna_limit_w - row @ p}
                for row in A]
        res = minimize(neg_rate, p0, jac=neg_rate_grad, method="SLSQP",
                       bounds=[(0.0, None)] * n, constraints=cons,
                       options={"maxiter": 200, "ftol": 1e-12})
        return np.maximum(res.x, 0.0)
    raise ValueError(f"unknown allocation mode {mode!r}")


def water_fill(gains: np.ndarray, total_power: float) -> np.ndarray:
    """Exact water-filling: p_i = max(mu - 1/g_i, 0) with sum p = total."""
    g = np.asarray(gains, dtype=float)
    p = np.zeros_like(g)
    pos = g > 0
    if not pos.any() or total_power <= 0:
        return p
    inv = 1.0 / g[pos]
    order = np.argsort(inv)
    inv_sorted = inv[order]
    csum = np.cumsum(inv_sorted)
    k_active = 1
    for k in range(len(inv_sorted), 0, -1):
        mu = (total_power + csum[k - 1]) / k
        if mu > inv_sorted[k - 1]:
            k_active = k
            break
    mu = (total_power + csum[k_active - 1]) / k_active
    levels = np.maximum(mu - inv_sorted, 0.0)
    levels[k_active:] = 0.0
    out = np.zeros_like(inv)
    out[order] = levels
    p[pos] = out
    return p


def sum_capacity_bound(H_joint: np.ndarray, total_power_w: float,
                       noise_w: float, tol: float = 1e-8,
                       max_iter: int = 500, gap_tol: float = 1e-5) -> float:
    """MISO broadcast sum capacity under a SUM power constraint, bits/s/Hz.

    Solved through the dual multiple-access channel with damped sum-power
    iterative water-filling: user powers p maximise
    C(p) = log2 det(I + (1/N) H^H diag(p) H). Stops once the relative
    sum-rate change is <= tol and the Frank-Wolfe duality gap certifies the
    remaining suboptimality below gap_tol (relative). Hitting max_iter is
    accepted while the gap still certifies 0.1% accuracy; beyond that a
    ConvergenceError carries the gap as the residual.
    """
    H = np.asarray(H_joint, dtype=complex)
    n, m = H.shape
    if n < 1 or total_power_w <= 0:
        raise ValueError("need at least one user and positive power")
    # everything runs on the n x n Gram form: C(p) = log2 det(I_n +
    # (1/N) S^1/2 G S^1/2), numerically sound even at extreme SNR where the
    # m x m determinant drowns its unit eigenvalues
    G = H @ H.conj().T
    p = np.full(n, total_power_w / n)
    c_prev = None
    rel_gap = np.inf
    eye = np.eye(n, dtype=complex)

    def z_of(pv):
        s = np.sqrt(pv / noise_w)
        return eye + (s[:, None] * G) * s[None, :]

    def capacity(pv):
        Z = z_of(pv)
        return Z, np.linalg.slogdet(Z)[1] / np.log(2.0)

    cap = 0.0
    for _ in range(max_iter):
        Z, cap = capacity(p)
        Zinv = np.linalg.inv(Z)
        mmse = Zinv.diagonal().real.clip(1e-300, 1.0)
        # MMSE identity: [Z^-1]_ii = 1/(1 + p_i e_i) with e_i the effective
        # gain of user i against everyone else's transmission
        eff = np.empty(n)
        active = p > 0
        eff[active] = (1.0 / mmse[active] - 1.0) / p[active]
        if (~active).any():
            # silent users: e_i = (1/N) h_i (I + (1/N) H^H S H)^-1 h_i^H,
            # folded to the n-side via the Woodbury identity
            s = np.sqrt(p / noise_w)
            M = G * s[None, :]
            X = np.linalg.solve(Z, (s[:, None] * G))
            quad = G.diagonal().real - np.einsum("ij,ji->i", M, X).real
            eff[~active] = quad[~active].clip(0.0) / noise_w
        # gradient dC/dp_i = e_i / ((1 + p_i e_i) ln 2); the linearised
        # headroom over the simplex upper-bounds C* - C(p)
        grad = eff * mmse / np.log(2.0)
        gap = total_power_w * grad.max() - float(grad @ p)
        rel_gap = abs(gap) / max(abs(cap), 1e-12)
        if c_prev is not None:
            rel = abs(cap - c_prev) / max(abs(c_prev), 1e-300)
            if rel <= tol and rel_gap <= gap_tol:
                return float(cap)
        c_prev = cap
        pw = water_fill(eff, total_power_w)
        if n == 1:
            p = pw
            continue
        # monotone step toward the water-filling point: longest improving
        # step of the ladder, else the guaranteed 1/n average
        step = pw - p
        for theta in (1.0, 0.5, 0.25, 0.125, 0.0625):
            _, c_try = capacity(p + theta * step)
            if c_try > cap:
                p = p + theta * step
                break
        else:
            p = p + step / n
    if rel_gap <= 1e-3:
        return float(cap)
    raise ConvergenceError("sum-capacity water-filling did not converge", rel_gap)
