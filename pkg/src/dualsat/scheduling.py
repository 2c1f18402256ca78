"""User selection for one satellite (SUS) and joint interference-aware
allocation across two satellites (SIUA).

SUS greedily builds a semi-orthogonal group: the first pick is the largest
channel norm; afterwards only users whose projection onto the span of the
selected channels stays below the threshold remain eligible, and the one
with the largest orthogonal component wins. Ties break to the lowest user
index so outputs are reproducible.

SIUA runs both satellites in simultaneous rounds over a common pool. With
lambda_interf = 0 each satellite independently applies the SUS criterion
(interference ignored). With lambda_interf > 0 the greedy score of a
candidate is expressed in rate units:

    score(u) = (own satellite sum rate after adding u) - (current own rate)
               - lambda * (rate the addition strips from the other
                           satellite's already-selected users)

evaluated with zero-forcing directions, equal per-user powers scaled to the
per-antenna limit, and the other satellite's current transmission as
interference. A satellite stops once its best candidate no longer pays
(score <= 0), which is what caps the served set in the interference-limited
regime. Conflicting proposals go to the higher score.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RankDeficientError
from .precoding import RANK_TOL, allocate_powers, zf_directions

LOG2 = np.log(2.0)


@dataclass
class Allocation:
    sat1_users: list[int] = field(default_factory=list)
    sat2_users: list[int] = field(default_factory=list)

    def validate(self, k1: int, k2: int):
        if set(self.sat1_users) & set(self.sat2_users):
            raise ValueError("allocation not disjoint")
        if len(self.sat1_users) > k1 or len(self.sat2_users) > k2:
            raise ValueError("allocation exceeds per-satellite beam count")


def _orth_component(h: np.ndarray, basis: np.ndarray) -> np.ndarray:
    if basis.shape[0] == 0:
        return h
    return h - (basis.conj() @ h) @ basis


def _keeps_full_rank(H_rows: np.ndarray) -> bool:
    sv = np.linalg.svd(H_rows, compute_uv=False)
    return sv[-1] >= RANK_TOL * sv[0]


def sus_select(H_pool: np.ndarray, alpha: float, max_users: int) -> list[int]:
    """Greedy semi-orthogonal user selection; returns indices in pick order."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    H = np.asarray(H_pool)
    n = H.shape[0]
    max_users = min(max_users, H.shape[1])
    norms = np.linalg.norm(H, axis=1)
    selected: list[int] = []
    basis = np.zeros((0, H.shape[1]), dtype=complex)
    while len(selected) < max_users:
        best_idx, best_score = -1, -1.0
        for u in range(n):
            if u in selected or norms[u] <= 0.0:
                continue
            orth = _orth_component(H[u], basis)
            proj_frac = np.sqrt(max(norms[u] ** 2 - np.linalg.norm(orth) ** 2, 0.0)) / norms[u]
            if proj_frac > alpha:
                continue
            score = float(np.linalg.norm(orth) ** 2)
            if score > best_score:
                best_idx, best_score = u, score
        if best_idx < 0:
            break
        if selected and not _keeps_full_rank(H[selected + [best_idx]]):
            break
        selected.append(best_idx)
        new_dir = _orth_component(H[best_idx], basis)
        nrm = np.linalg.norm(new_dir)
        if nrm > 0:
            basis = np.vstack([basis, new_dir / nrm])
    return selected


class _SatState:
    """One satellite's tentative selection during SIUA."""

    def __init__(self, H_own: np.ndarray, H_cross: np.ndarray, capacity: int,
                 per_antenna_w: float, noise_w: float):
        # H_own: pool channels toward this satellite
        # H_cross: pool channels toward the OTHER satellite
        self.H_own = H_own
        self.H_cross = H_cross
        self.capacity = min(capacity, H_own.shape[1])
        self.per_antenna_w = per_antenna_w
        self.noise_w = noise_w
        self.selected: list[int] = []
        self.basis = np.zeros((0, H_own.shape[1]), dtype=complex)
        self.W = None       # (K, m) unit-norm ZF directions
        self.powers = None  # (m,) equal per-user powers
        self.stopped = False

    def semi_orthogonal(self, u: int, alpha: float) -> bool:
        h = self.H_own[u]
        nrm = np.linalg.norm(h)
        if nrm <= 0.0:
            return False
        orth = _orth_component(h, self.basis)
        proj = np.sqrt(max(nrm ** 2 - np.linalg.norm(orth) ** 2, 0.0)) / nrm
        if proj > alpha:
            return False
        return not self.selected or _keeps_full_rank(self.H_own[self.selected + [u]])

    def orth_norm_sq(self, u: int) -> float:
        return float(np.linalg.norm(_orth_component(self.H_own[u], self.basis)) ** 2)

    def solve(self, sel: list[int]):
        """ZF directions and equal powers for a candidate set."""
        Hs = self.H_own[sel]
        W = zf_directions(Hs)
        p = allocate_powers(W, Hs, self.per_antenna_w)
        return W, p

    def rates(self, sel, W, p, other: "_SatState | None") -> float:
        """Sum rate of `sel` under this transmission, with the partner's
        current transmission as interference."""
        if not sel:
            return 0.0
        eff = self.H_own[sel] @ W
        sig = p * np.abs(np.diag(eff)) ** 2
        intra = np.maximum((np.abs(eff) ** 2 @ p) - sig, 0.0)
        inter = np.zeros(len(sel))
        if other is not None and other.selected:
            cross = self.H_cross[sel] @ other.W  # toward the other satellite
            inter = np.abs(cross) ** 2 @ other.powers
        return float(np.sum(np.log1p(sig / (self.noise_w + intra + inter)) / LOG2))

    def inflicted(self, other: "_SatState", W, p) -> float:
        """Partner sum rate under THIS candidate transmission (W, p)."""
        if other.selected is None or not other.selected:
            return 0.0
        eff = other.H_own[other.selected] @ other.W
        sig = other.powers * np.abs(np.diag(eff)) ** 2
        intra = np.maximum((np.abs(eff) ** 2 @ other.powers) - sig, 0.0)
        cross = other.H_cross[other.selected] @ W
        inter = np.abs(cross) ** 2 @ p
        return float(np.sum(np.log1p(sig / (other.noise_w + intra + inter)) / LOG2))

    def commit(self, u: int, W, p):
        self.selected.append(u)
        self.W, self.powers = W, p
        new_dir = _orth_component(self.H_own[u], self.basis)
        nrm = np.linalg.norm(new_dir)
        if nrm > 0:
            self.basis = np.vstack([self.basis, new_dir / nrm])


def _config_total(sat: _SatState, other: _SatState, trial_sel: list[int]):
    """Total rate (both satellites) if `sat` transmitted to `trial_sel`.

    Returns None when the trial set cannot be zero-forced.
    """
    if not trial_sel:
        base = other.rates(other.selected, other.W, other.powers, None)
        return base, None, None
    try:
        W, p = sat.solve(trial_sel)
    except RankDeficientError:
        return None
    own = sat.rates(trial_sel, W, p, other)
    rest = sat.inflicted(other, W, p) if other.selected else 0.0
    return own + rest, W, p


def _polish(sats, taken: set, max_moves: int = 50):
    """Best-improvement exchange: drop, add or swap one served user at a
    time while the total sum rate keeps growing. Deterministic scan order."""
    n = sats[0].H_own.shape[0]

    def total():
        return (sats[0].rates(sats[0].selected, sats[0].W, sats[0].powers, sats[1])
                + sats[1].rates(sats[1].selected, sats[1].W, sats[1].powers, sats[0]))

    current = total()
    for _ in range(max_moves):
        best_gain, best_apply = 1e-12, None
        for s in (0, 1):
            sat, other = sats[s], sats[1 - s]
            other_cur = other.rates(other.selected, other.W, other.powers, sat)
            free = [u for u in range(n) if u not in taken
                    and np.linalg.norm(sat.H_own[u]) > 0.0]
            trials = []
            for idx in range(len(sat.selected)):
                trials.append((sat.selected[:idx] + sat.selected[idx + 1:],
                               sat.selected[idx], None))
            if len(sat.selected) < sat.capacity:
                trials.extend((sat.selected + [v], None, v) for v in free)
            for idx in range(len(sat.selected)):
                for v in free:
                    trial = list(sat.selected)
                    out = trial[idx]
                    trial[idx] = v
                    trials.append((trial, out, v))
            for trial_sel, removed, added in trials:
                res = _config_total(sat, other, trial_sel)
                if res is None:
                    continue
                val = res[0]
                # own-side change replaces sat's rate AND other's rate
                gain = val - (sat.rates(sat.selected, sat.W, sat.powers, other)
                              + other_cur)
                if gain > best_gain:
                    best_gain = gain
                    best_apply = (s, trial_sel, removed, added, res[1], res[2])
        if best_apply is None:
            break
        s, trial_sel, removed, added, W, p = best_apply
        sats[s].selected = list(trial_sel)
        sats[s].W, sats[s].powers = W, p
        if removed is not None:
            taken.discard(removed)
        if added is not None:
            taken.add(added)
        current += best_gain


def _propose(sat: _SatState, other: _SatState, taken: set, alpha: float,
             lam: float):
    """Best candidate for one satellite this round, or None."""
    n = sat.H_own.shape[0]
    if sat.stopped or len(sat.selected) >= sat.capacity:
        return None
    cur_own = sat.rates(sat.selected, sat.W, sat.powers, other)
    cur_other = other.rates(other.selected, other.W, other.powers, sat) \
        if other.selected else 0.0
    best = None
    for u in range(n):
        if u in taken or not sat.semi_orthogonal(u, alpha):
            continue
        if lam == 0.0:
            score = sat.orth_norm_sq(u)
            cand = (score, -u, u, None, None)
        else:
            try:
                W, p = sat.solve(sat.selected + [u])
            except RankDeficientError:
                continue
            own = sat.rates(sat.selected + [u], W, p, other)
            loss = 0.0
            if other.selected:
                loss = cur_other - sat.inflicted(other, W, p)
            score = (own - cur_own) - lam * loss
            cand = (score, -u, u, W, p)
        if best is None or cand[:2] > best[:2]:
            best = cand
    if best is None:
        return None
    if lam > 0.0 and best[0] <= 0.0:
        sat.stopped = True  # further additions no longer pay
        return None
    return best


def siua_allocate(H1_pool: np.ndarray, H2_pool: np.ndarray, alpha: float,
                  lambda_interf: float, k1: int, k2: int,
                  per_antenna1_w: float = 1.0, per_antenna2_w: float = 1.0,
                  noise_w: float = 1.0) -> Allocation:
    """Joint allocation of a common pool to two satellites.

    Power levels only matter for lambda_interf > 0, where the score works in
    rate units; the defaults put the rate comparison at unit scale.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    if lambda_interf < 0.0:
        raise ValueError("lambda_interf must be >= 0")
    H1 = np.asarray(H1_pool)
    H2 = np.asarray(H2_pool)
    if H1.shape[0] == 0:
        raise ValueError("empty user pool")
    if k1 <= 0 and k2 <= 0:
        raise ValueError("both satellites have zero capacity")

    sats = (_SatState(H1, H2, k1, per_antenna1_w, noise_w),
            _SatState(H2, H1, k2, per_antenna2_w, noise_w))
    taken: set[int] = set()

    while True:
        props = {s: _propose(sats[s], sats[1 - s], taken, alpha, lambda_interf)
                 for s in (0, 1)}
        props = {s: c for s, c in props.items() if c is not None}
        if not props:
            break
        if len(props) == 2 and props[0][2] == props[1][2]:
            # contested user: higher score wins, then satellite 1
            winner = 0 if props[0][0] >= props[1][0] else 1
            _commit(sats[winner], props[winner], taken)
            again = _propose(sats[1 - winner], sats[winner], taken, alpha,
                             lambda_interf)
            if again is not None:
                _commit(sats[1 - winner], again, taken)
        else:
            for s, cand in props.items():
                if cand[2] not in taken:
                    _commit(sats[s], cand, taken)

    if lambda_interf > 0.0:
        _polish(sats, taken)

    alloc = Allocation(sat1_users=sats[0].selected, sat2_users=sats[1].selected)
    alloc.validate(k1, k2)
    return alloc


def _commit(sat: _SatState, cand, taken: set):
    _, _, u, W, p = cand
    if W is None:
        W, p = sat.solve(sat.selected + [u])
    sat.commit(u, W, p)
    taken.add(u)
