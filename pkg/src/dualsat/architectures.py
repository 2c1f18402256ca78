"""Per-drop evaluation of the four co-location architectures under one
total power budget.

Every evaluator returns per-user rates normalised to the total system
bandwidth, so spectral efficiencies are directly comparable:

* conventional: band halved between satellites, then split into Nc colours
  per satellite; one user per beam; rate factor 1/(2*Nc).
* coordinated: full band on both satellites, SIUA user allocation, ZF with
  per-antenna limits; the other satellite's precoded transmission is the
  residual interference; rate factor 1.
* cooperative: joint-processing sum-capacity upper bound (not achievable);
  the sum is attributed uniformly across the pool for fairness bookkeeping.
* cognitive: primary hops with slot reuse 3, the secondary overlay fills the
  dark beams; full band per active beam, rate factor 1/period, optional
  secondary power control toward an I/N cap.

The total power is split equally between the satellites and divided over
the simultaneously active beams of each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beamhopping import SlotPattern, secondary_power_control
from .channel import DualChannel
from .precoding import allocate_powers, sum_capacity_bound, zf_directions
from .scheduling import Allocation, siua_allocate

LOG2 = np.log(2.0)


@dataclass
class ArchitectureResult:
    per_user_rate: np.ndarray            # bits/s/Hz of total system bandwidth
    served_user_ids: list[int]
    consumed_power_w: float
    architecture_tag: str
    meta: dict = field(default_factory=dict)


def _users_by_beam(dc: DualChannel) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = {}
    for i, u in enumerate(dc.users):
        groups.setdefault(u.home_beam, []).append(i)
    return groups


def _conventional_colors(dc: DualChannel, nc: int, coupled: bool):
    """Per-satellite colour maps over the 2*nc sub-bands.

    With nc=3 the base assignment gives satellite s the palette
    {3s, 3s+1, 3s+2} over its lattice colouring (the orthogonal half-band
    reading). In coupled mode a beam whose colour class would be a singleton
    (e.g. the centre beam of a 7-beam layout, which never saturates on its
    own) is moved into the other satellite's palette, shifted off its
    co-located partner, so every class of two or more beams exists on the
    same spectrum and interbeam interference caps every rate.
    """
    if nc == 1:
        return (np.zeros(dc.layout1.beams_count, dtype=int),
                np.ones(dc.layout2.beams_count, dtype=int))
    if nc != 3:
        raise ValueError(f"unsupported reuse factor {nc} (hex layouts: 1 or 3)")
    if dc.layout1.colors is None or dc.layout2.colors is None:
        raise ValueError("conventional evaluation needs lattice layouts")
    colors = [dc.layout1.colors + 0, dc.layout2.colors + 3]
    if coupled:
        counts = {}
        for s in (0, 1):
            for c in colors[s]:
                counts[c] = counts.get(c, 0) + 1
        for s in (0, 1):
            lat = colors[s] - 3 * s
            single = np.array([counts[c] == 1 for c in colors[s]])
            colors[s] = np.where(single, 3 * (1 - s) + (lat + 1) % 3, colors[s])
    return colors


def eval_conventional(dc: DualChannel, total_power_w: float, nc: int = 3,
                      coupled_colors: bool = True) -> ArchitectureResult:
    """Frequency-splitting baseline: the total band is cut into 2*nc
    segments and tiled so adjacent beams never share one."""
    colors1, colors2 = _conventional_colors(dc, nc, coupled_colors)

    n = dc.n_users
    groups = _users_by_beam(dc)
    bw_frac = 1.0 / (2.0 * nc)
    noise_sub = dc.noise_power_w * bw_frac
    rates = np.zeros(n)
    served: list[int] = []

    sats = ((dc.gains(1), colors1, dc.layout1), (dc.gains(2), colors2, dc.layout2))
    for sat, (gains, colors, layout) in enumerate(sats):
        k = layout.beams_count
        p_beam = (total_power_w / 2.0) / k
        for b in range(k):
            cands = groups.get(b, [])
            if not cands:
                continue
            i = cands[min(sat, len(cands) - 1)]
            signal = p_beam * gains[i, b]
            interf = 0.0
            for o_sat, (o_gains, o_colors, o_layout) in enumerate(sats):
                p_other = (total_power_w / 2.0) / o_layout.beams_count
                cochannel = [bb for bb in range(o_layout.beams_count)
                             if o_colors[bb] == colors[b]
                             and not (o_sat == sat and bb == b)]
                if cochannel:
                    interf += p_other * o_gains[i, cochannel].sum()
            sinr = signal / (noise_sub + interf)
            rates[i] += bw_frac * np.log1p(sinr) / LOG2
            served.append(i)

    return ArchitectureResult(per_user_rate=rates, served_user_ids=sorted(set(served)),
                              consumed_power_w=total_power_w,
                              architecture_tag="conventional",
                              meta={"nc": nc, "bw_fraction": bw_frac,
                                    "coupled_colors": coupled_colors})


def eval_coordinated(dc: DualChannel, total_power_w: float, alpha: float = 0.4,
                     lambda_interf: float = 1.0,
                     allocation: Allocation | None = None) -> ArchitectureResult:
    """Full-reuse dual satellites with SIUA scheduling and per-satellite ZF."""
    k1, k2 = dc.layout1.beams_count, dc.layout2.beams_count
    if allocation is None:
        allocation = siua_allocate(dc.H1, dc.H2, alpha, lambda_interf, k1, k2,
                                   per_antenna1_w=(total_power_w / 2.0) / k1,
                                   per_antenna2_w=(total_power_w / 2.0) / k2,
                                   noise_w=dc.noise_power_w)
    n = dc.n_users
    rates = np.zeros(n)
    consumed = 0.0
    max_residual = 0.0

    sat_data = []
    for sel, H_own, H_cross, k in ((allocation.sat1_users, dc.H1, dc.H2, k1),
                                   (allocation.sat2_users, dc.H2, dc.H1, k2)):
        if not sel:
            sat_data.append(None)
            continue
        Hs = H_own[sel]
        W = zf_directions(Hs)
        p = allocate_powers(W, Hs, per_antenna_limit_w=(total_power_w / 2.0) / k)
        consumed += float(np.sum(p * np.sum(np.abs(W) ** 2, axis=0)))
        sat_data.append((sel, W, p))

    for s, data in enumerate(sat_data):
        if data is None:
            continue
        sel, W, p = data
        H_own = dc.H1 if s == 0 else dc.H2
        H_cross = dc.H2 if s == 0 else dc.H1
        other = sat_data[1 - s]
        eff = H_own[sel] @ W  # (n_sel, n_sel), ~diagonal
        for j, i in enumerate(sel):
            signal = p[j] * np.abs(eff[j, j]) ** 2
            intra = float(np.sum(p * np.abs(eff[j]) ** 2)) - p[j] * np.abs(eff[j, j]) ** 2
            intra = max(intra, 0.0)
            if signal > 0:
                max_residual = max(max_residual, intra / signal)
            inter = 0.0
            if other is not None:
                sel_o, W_o, p_o = other
                inter = float(np.sum(p_o * np.abs(H_cross[i] @ W_o) ** 2))
            sinr = signal / (dc.noise_power_w + intra + inter)
            rates[i] = np.log1p(sinr) / LOG2

    served = sorted(allocation.sat1_users + allocation.sat2_users)
    return ArchitectureResult(per_user_rate=rates, served_user_ids=served,
                              consumed_power_w=consumed,
                              architecture_tag="coordinated",
                              meta={"allocation": (list(allocation.sat1_users),
                                                   list(allocation.sat2_users)),
                                    "max_zf_residual": max_residual,
                                    "alpha": alpha,
                                    "lambda_interf": lambda_interf})


def eval_cooperative(dc: DualChannel, total_power_w: float) -> ArchitectureResult:
    """Joint-processing sum-capacity bound; rates are a bookkeeping split."""
    H = np.hstack((dc.H1, dc.H2))
    cap = sum_capacity_bound(H, total_power_w, dc.noise_power_w)
    n = dc.n_users
    rates = np.full(n, cap / n)
    return ArchitectureResult(per_user_rate=rates, served_user_ids=list(range(n)),
                              consumed_power_w=total_power_w,
                              architecture_tag="cooperative",
                              meta={"upper_bound": True,
                                    "note": "sum-capacity bound, not an achievable scheme",
                                    "sum_capacity": cap})


def _cognitive_serving(dc: DualChannel) -> tuple[dict[int, int], dict[int, int]]:
    """Map beams to served users: one pool user per primary beam (its first
    candidate), then one leftover user per overlay beam that contains one."""
    groups = _users_by_beam(dc)
    primary_serving = {b: cands[0] for b, cands in sorted(groups.items())}
    taken = set(primary_serving.values())
    pos = np.array([u.position for u in dc.users])
    secondary_serving: dict[int, int] = {}
    for c, center in enumerate(dc.layout2.centers):
        dist = np.linalg.norm(pos - center, axis=1)
        order = np.argsort(dist, kind="stable")
        for i in order:
            if i in taken or dist[i] > dc.layout2.beam_radius_3db_km:
                continue
            secondary_serving[c] = int(i)
            taken.add(int(i))
            break
    return primary_serving, secondary_serving


def eval_cognitive(dc: DualChannel, total_power_w: float,
                   primary_pat: SlotPattern, secondary_pat: SlotPattern,
                   power_control: bool,
                   i_over_n_cap_db: float = -10.0) -> ArchitectureResult:
    """Cognitive beam-hopping: per-slot SINRs over one pattern period."""
    if primary_pat.period != secondary_pat.period:
        raise ValueError("primary and secondary patterns disagree on period")
    if len(primary_pat.active_sets[0]) and \
            max(int(b) for s in primary_pat.active_sets for b in s) >= dc.layout1.beams_count:
        raise ValueError("pattern does not match the primary layout")
    g1 = dc.gains(1)
    g2 = dc.gains(2)
    noise = dc.noise_power_w
    n = dc.n_users
    period = primary_pat.period
    primary_serving, secondary_serving = _cognitive_serving(dc)

    rates = np.zeros(n)
    consumed = 0.0
    served: set[int] = set()
    for t in range(period):
        act1 = [int(b) for b in primary_pat.active_sets[t]]
        act2 = [c for c in (int(x) for x in secondary_pat.active_sets[t])
                if c in secondary_serving]
        p_prim = (total_power_w / 2.0) / len(act1) if act1 else 0.0
        p_sec = np.full(len(act2), (total_power_w / 2.0) / len(act2)) if act2 else np.zeros(0)
        if power_control and len(act2):
            prim_users_t = [primary_serving[b] for b in act1 if b in primary_serving]
            p_sec = secondary_power_control(dc, prim_users_t, act2, p_sec,
                                            i_over_n_cap_db)
        consumed += (len(act1) * p_prim + float(p_sec.sum())) / period

        for b in act1:
            if b not in primary_serving:
                continue
            i = primary_serving[b]
            signal = p_prim * g1[i, b]
            interf = p_prim * sum(g1[i, bb] for bb in act1 if bb != b)
            if len(act2):
                interf += float(p_sec @ g2[i, act2])
            rates[i] += np.log1p(signal / (noise + interf)) / LOG2 / period
            served.add(i)
        for idx, c in enumerate(act2):
            j = secondary_serving[c]
            signal = p_sec[idx] * g2[j, c]
            interf = float(p_sec @ g2[j, act2]) - p_sec[idx] * g2[j, c]
            if act1:
                interf += p_prim * float(g1[j, act1].sum())
            rates[j] += np.log1p(signal / (noise + max(interf, 0.0))) / LOG2 / period
            served.add(j)

    tag = "cognitive_pc" if power_control else "cognitive_nopc"
    return ArchitectureResult(per_user_rate=rates, served_user_ids=sorted(served),
                              consumed_power_w=consumed, architecture_tag=tag,
                              meta={"power_control": power_control,
                                    "i_over_n_cap_db": i_over_n_cap_db,
                                    "period": period})


ARCHITECTURES = ("conventional", "coordinated", "cooperative",
                 "cognitive_nopc", "cognitive_pc")
