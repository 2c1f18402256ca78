"""Beam-hopping illumination patterns and the secondary power-control rule.

The primary pattern activates one colour class of the hex layout per slot
(slot reuse factor = number of colours), so concurrently active beams are
never adjacent and each beam is lit exactly once per period.

The secondary pattern gives every overlay beam exactly one slot per period,
chosen among the slots where (a) its parent beam is dark and (b) its centre
stays clear of every active primary beam's 3 dB contour. Among eligible
slots the one with the largest clearance wins, with slot load as tie break.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PatternError
from .geometry import BeamLayout
from .linkbudget import db_to_linear


@dataclass
class SlotPattern:
    period: int
    active_sets: list[np.ndarray]  # per slot, sorted beam indices
    slot_duration: float = 1.0

    def beam_slots(self, n_beams: int) -> list[list[int]]:
        out = [[] for _ in range(n_beams)]
        for t, act in enumerate(self.active_sets):
            for b in act:
                out[int(b)].append(t)
        return out

    def to_table(self, name: str = "pattern") -> str:
        lines = [f"# {name} (period {self.period})"]
        for t, act in enumerate(self.active_sets):
            beams = " ".join(str(int(b)) for b in act)
            lines.append(f"slot {t}: {beams}")
        return "\n".join(lines)


def primary_pattern(layout: BeamLayout, slot_reuse: int) -> SlotPattern:
    """Colour-class illumination schedule for a spiral-hex layout."""
    if slot_reuse < 1:
        raise ValueError("slot_reuse must be >= 1")
    if slot_reuse > layout.beams_count:
        raise ValueError("slot_reuse larger than the number of beams")
    if slot_reuse == 1:
        return SlotPattern(period=1,
                           active_sets=[np.arange(layout.beams_count)])
    if slot_reuse == 3:
        if layout.colors is None:
            raise ValueError("layout lacks a lattice colouring")
        sets = [np.sort(np.nonzero(layout.colors == c)[0]) for c in range(3)]
        return SlotPattern(period=3, active_sets=sets)
    raise ValueError(f"unsupported slot reuse factor {slot_reuse} "
                     "(hex layouts support 1 and 3)")


def secondary_pattern(primary: SlotPattern, primary_layout: BeamLayout,
                      secondary_layout: BeamLayout,
                      max_active_per_slot: int | None = None) -> SlotPattern:
    """Hopping schedule for the overlay beams around the primary pattern."""
    d = np.linalg.norm(secondary_layout.centers[:, None, :]
                       - primary_layout.centers[None, :, :], axis=2)
    if secondary_layout.parents is not None:
        parents = secondary_layout.parents
    else:
        parents = d.argmin(axis=1)
    orphan = d[np.arange(len(parents)), parents] > primary_layout.beam_radius_3db_km
    if orphan.any():
        raise PatternError(f"orphan secondary beams: {np.nonzero(orphan)[0].tolist()}")

    clearance = primary_layout.beam_radius_3db_km
    period = primary.period
    assigned: list[list[int]] = [[] for _ in range(period)]
    for b in range(secondary_layout.beams_count):
        options = []
        for t in range(period):
            act = primary.active_sets[t]
            if parents[b] in act:
                continue
            min_dist = d[b, act].min() if len(act) else np.inf
            if min_dist > clearance:
                options.append((t, min_dist))
        if not options:
            raise PatternError(
                f"secondary beam {b} has no slot clear of the primary pattern")
        best = max(options, key=lambda o: (o[1], -len(assigned[o[0]]), -o[0]))
        assigned[best[0]].append(b)

    if max_active_per_slot is not None:
        for t in range(period):
            if len(assigned[t]) > max_active_per_slot:
                # keep the beams farthest from that slot's active primaries
                act = primary.active_sets[t]
                scores = sorted(assigned[t],
                                key=lambda b: (-d[b, act].min(), b))
                assigned[t] = scores[:max_active_per_slot]

    return SlotPattern(period=period,
                       active_sets=[np.array(sorted(a), dtype=int) for a in assigned],
                       slot_duration=primary.slot_duration)


def secondary_power_control(dual_channel, primary_user_ids, active_subbeams,
                            nominal_powers_w, i_over_n_cap_db: float) -> np.ndarray:
    """Scale active secondary beam powers (down, never up) so the aggregate
    secondary interference at every active primary user meets the I/N cap.

    The scaling is the single largest factor alpha <= 1 that makes the worst
    user meet the cap with equality; applying the rule twice is a no-op.
    """
    p = np.asarray(nominal_powers_w, dtype=float).copy()
    users = list(primary_user_ids)
    beams = list(active_subbeams)
    if not users or not beams or not p.size:
        return p
    if i_over_n_cap_db >= 600.0:  # cap far above any representable ratio
        return p
    g2 = dual_channel.gains(2)[np.ix_(users, beams)]
    interference = g2 @ p
    worst = interference.max()
    if worst <= 0.0:
        return p
    cap_lin = db_to_linear(i_over_n_cap_db) * dual_channel.noise_power_w
    alpha = cap_lin / worst
    if alpha >= 1.0 - 1e-12:
        return p
    return p * alpha
