"""Beam layouts and user drops on a locally flat coverage disc.

Two constructions are provided:

* `build_beam_layout` tiles the disc with a deterministic spiral-hex fill
  (centre beam first, then rings ordered counter-clockwise from +x). Beam
  centres are spaced sqrt(3)*r so adjacent 3 dB contours tile the disc.
* `build_overlay_layout` places a denser set of smaller beams over the same
  disc for the hopping secondary. Centres are laid out as concentric rings
  solved outside-in so that the small discs cover the whole coverage disc;
  every small beam falls inside the 3 dB contour of a parent beam.

All lengths here are km.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT3 = math.sqrt(3.0)


@dataclass
class UserTerminal:
    position: np.ndarray  # (2,) km
    home_beam: int
    rx_gain_dbi: float = 41.0
    noise_temperature_k: float = 235.34


@dataclass
class BeamLayout:
    centers: np.ndarray              # (K, 2) km
    beam_radius_3db_km: float
    satellite_id: str                # "primary" | "secondary"
    coverage_radius_km: float
    spacing_km: float
    axial: np.ndarray | None = None    # (K, 2) hex coords, spiral layouts only
    colors: np.ndarray | None = None   # 3-coloring, spiral layouts only
    parents: np.ndarray | None = None  # (K,) parent beam ids, overlay layouts

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float)
        uniq = np.unique(np.round(self.centers, 6), axis=0)
        if len(uniq) != len(self.centers):
            raise ValueError("beam centers must be distinct")

    @property
    def beams_count(self) -> int:
        return len(self.centers)

    def adjacency(self) -> np.ndarray:
        """Boolean matrix: centers one lattice step apart."""
        d = np.linalg.norm(self.centers[:, None, :] - self.centers[None, :, :], axis=2)
        adj = (d > 1e-9) & (d <= 1.01 * self.spacing_km)
        return adj


def _spiral_axial(count: int) -> np.ndarray:
    """First `count` axial hex coordinates in spiral order.

    Ring n holds the 6n cells at hex distance n, sorted counter-clockwise
    starting from the +x axis; identical inputs give identical output.
    """
    coords = [(0, 0)]
    n = 1
    while len(coords) < count:
        ring = []
        for q in range(-n, n + 1):
            for r in range(-n, n + 1):
                if (abs(q) + abs(r) + abs(q + r)) // 2 == n:
                    x = q + 0.5 * r
                    y = (SQRT3 / 2.0) * r
                    ang = math.atan2(y, x) % (2.0 * math.pi)
                    ring.append((ang, q, r))
        ring.sort()
        coords.extend((q, r) for _, q, r in ring)
        n += 1
    return np.array(coords[:count], dtype=int)


def _axial_to_xy(axial: np.ndarray, spacing: float) -> np.ndarray:
    q = axial[:, 0].astype(float)
    r = axial[:, 1].astype(float)
    return np.column_stack((spacing * (q + 0.5 * r), spacing * (SQRT3 / 2.0) * r))


def build_beam_layout(coverage_radius_km: float, beams_count: int,
                      beam_radius_3db_km: float,
                      satellite_id: str = "primary") -> BeamLayout:
    """Deterministic spiral-hex layout of `beams_count` beams."""
    if beams_count <= 0:
        raise ValueError("beams_count must be positive")
    if beam_radius_3db_km <= 0:
        raise ValueError("beam radius must be positive")
    if coverage_radius_km <= 0:
        raise ValueError("coverage radius must be positive")
    spacing = SQRT3 * beam_radius_3db_km
    axial = _spiral_axial(beams_count)
    centers = _axial_to_xy(axial, spacing)
    colors = np.mod(axial[:, 0] - axial[:, 1], 3)
    return BeamLayout(centers=centers, beam_radius_3db_km=beam_radius_3db_km,
                      satellite_id=satellite_id,
                      coverage_radius_km=coverage_radius_km,
                      spacing_km=spacing, axial=axial, colors=colors)


def _ring_plan(cover_radius: float, disc_radius: float, budget: int):
    """Concentric-ring covering of a disc by `budget` discs of radius
    disc_radius, solved outside-in.

    A ring of m discs at centre distance c covers the circle of radius Rb iff
    the half-angle beta = acos((c^2+Rb^2-r^2)/(2 c Rb)) is at least pi/m; the
    deepest feasible placement is c = Rb cos(pi/m) - sqrt(r^2 - Rb^2 sin^2).
    The ring then guards the annulus down to the mid-angle reach
    rho = c cos(pi/m) - sqrt(r^2 - c^2 sin^2), which becomes the next
    boundary. Depth-first search over ring sizes returns the first plan whose
    disc count matches the budget exactly.
    """
    r = disc_radius * 0.995  # small slack so sampled coverage is strict

    def solve_ring(rb, m):
        beta = math.pi / m
        s, co = math.sin(beta), math.cos(beta)
        if rb * s > r:
            return None
        c = max(rb * co - math.sqrt(r * r - (rb * s) ** 2), 1e-9)
        disc = r * r - (c * s) ** 2
        if disc < 0:
            return None
        rho = c * co - math.sqrt(disc)
        full = rho <= 0 and c <= r
        return c, rho, full

    def dfs(rb, budget_left):
        if budget_left <= 0:
            return None
        m_min = math.ceil(math.pi / math.asin(min(r / rb, 1.0)))
        for m in range(m_min, m_min + 4):
            if m > budget_left:
                break
            sol = solve_ring(rb, m)
            if sol is None:
                continue
            c, rho, full = sol
            if full:
                if m == budget_left:
                    return [(m, c)]
                continue
            rest = dfs(rho, budget_left - m)
            if rest is not None:
                return [(m, c)] + rest
        # tail option: one centre disc finishes the job
        if budget_left == 1 and rb <= r:
            return [(1, 0.0)]
        return None

    return dfs(cover_radius, budget)


def build_overlay_layout(parent: BeamLayout, beams_count: int,
                         beam_radius_3db_km: float,
                         satellite_id: str = "secondary") -> BeamLayout:
    """Dense overlay layout covering the parent's coverage disc.

    Centres are placed on concentric rings (see `_ring_plan`); each beam is
    assigned the nearest parent beam (ties to the lowest parent index) and
    must fall inside that parent's 3 dB contour.
    """
    if beams_count <= 0 or beam_radius_3db_km <= 0:
        raise ValueError("overlay beam count and radius must be positive")
    plan = _ring_plan(parent.coverage_radius_km, beam_radius_3db_km, beams_count)
    if plan is None:
        raise ValueError(
            f"no {beams_count}-beam ring covering of radius "
            f"{parent.coverage_radius_km} km with r={beam_radius_3db_km} km")
    centers = []
    for m, c in plan:
        ang = 2.0 * math.pi * np.arange(m) / m
        centers.append(np.column_stack((c * np.cos(ang), c * np.sin(ang))))
    centers = np.vstack(centers)

    d = np.linalg.norm(centers[:, None, :] - parent.centers[None, :, :], axis=2)
    parents = d.argmin(axis=1)
    orphan = d.min(axis=1) > parent.beam_radius_3db_km
    if orphan.any():
        raise ValueError(f"orphan overlay beams (no parent contour): "
                         f"{np.nonzero(orphan)[0].tolist()}")
    return BeamLayout(centers=centers, beam_radius_3db_km=beam_radius_3db_km,
                      satellite_id=satellite_id,
                      coverage_radius_km=parent.coverage_radius_km,
                      spacing_km=SQRT3 * beam_radius_3db_km,
                      parents=parents)


def drop_users(layout: BeamLayout, users_per_beam: int, seed,
               rx_gain_dbi: float = 41.0,
               noise_temperature_k: float = 235.34) -> list[UserTerminal]:
    """Drop `users_per_beam` candidates uniformly inside each beam's 3 dB disc.

    Users are ordered beam-major (beam 0's candidates first); a fixed seed
    reproduces the drop bit for bit.
    """
    if layout.beams_count == 0:
        raise ValueError("empty layout")
    if users_per_beam < 1:
        raise ValueError("users_per_beam must be >= 1")
    rng = np.random.default_rng(seed)
    users = []
    for b, center in enumerate(layout.centers):
        radii = layout.beam_radius_3db_km * np.sqrt(rng.uniform(0.0, 1.0, users_per_beam))
        angs = rng.uniform(0.0, 2.0 * math.pi, users_per_beam)
        for rad, ang in zip(radii, angs):
            pos = center + rad * np.array([math.cos(ang), math.sin(ang)])
            users.append(UserTerminal(position=pos, home_beam=b,
                                      rx_gain_dbi=rx_gain_dbi,
                                      noise_temperature_k=noise_temperature_k))
    return users


def coverage_gap_km(layout: BeamLayout, n_samples: int = 100_000, seed=0) -> float:
    """Max distance from a random coverage-disc point to its nearest centre."""
    rng = np.random.default_rng(seed)
    rr = layout.coverage_radius_km * np.sqrt(rng.uniform(0.0, 1.0, n_samples))
    aa = rng.uniform(0.0, 2.0 * math.pi, n_samples)
    pts = np.column_stack((rr * np.cos(aa), rr * np.sin(aa)))
    d = np.linalg.norm(pts[:, None, :] - layout.centers[None, :, :], axis=2)
    return float(d.min(axis=1).max())
