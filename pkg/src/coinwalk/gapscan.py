"""Gap survey of the (theta, phi) parameter square for the x/y two-rotation walk.

The coin ``R_x(phi) R_y(theta)`` gives the dispersion argument

    cos w(k) = cos k cos(theta) cos(phi) - sin k sin(theta) sin(phi)
             = A cos(k + d),

with amplitude ``A = hypot(cos theta cos phi, sin theta sin phi)`` and phase
``d = atan2(sin theta sin phi, cos theta cos phi)``.  The band therefore
sweeps ``[arccos A, pi - arccos A]``: the gap at w = 0 and the gap at
w = +-pi are both ``arccos A``, and they close exactly where A = 1, at
isolated parameter points.  A brute-force sampled minimiser over k is kept
alongside the closed form as a cross-check.

Closure points are enumerated on the closed square [-pi, pi]^2 (the +-pi
edges are geometrically distinct there); each point is reported once even
when both bands close on it, and the mod-2pi identification of the edges is
reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .export import write_csv

__all__ = [
    "GapClosure",
    "GapMap",
    "min_gap",
    "min_gap_sampled",
    "scan_gap_map",
    "enumerate_closures",
    "closure_points",
    "canonical_points",
    "assert_no_boundary",
    "closures_to_dict",
    "gap_map_to_csv",
    "canonical_angle",
]

BAND_ZERO = "omega_zero"
BAND_PI = "omega_pi"

_POINT_MERGE_TOL = 1e-6


@dataclass(frozen=True)
class GapClosure:
    """One (parameter point, band) at which the quasi-energy gap closes."""

    theta: float
    phi: float
    k_star: float
    band: str


@dataclass(frozen=True)
class GapMap:
    """Minimum gap to w=0 and to w=+-pi over inclusive uniform parameter grids."""

    theta_grid: np.ndarray
    phi_grid: np.ndarray
    gap_zero: np.ndarray  # shape (len(theta_grid), len(phi_grid))
    gap_pi: np.ndarray


def canonical_angle(a: float) -> float:
    """Representative of ``a`` modulo 2*pi in (-pi, pi]."""
    b = math.remainder(float(a), 2.0 * math.pi)
    if b <= -math.pi:
        b = math.pi
    return b


def _amplitude(theta, phi):
    return np.hypot(np.cos(theta) * np.cos(phi), np.sin(theta) * np.sin(phi))


def min_gap(theta: float, phi: float):
    """Closed-form ``(gap_zero, gap_pi)``; both equal ``arccos A`` (see module docstring)."""
    g = np.arccos(np.clip(_amplitude(theta, phi), -1.0, 1.0))
    return g, g


def _cos_w(theta, phi, k):
    return np.cos(k) * np.cos(theta) * np.cos(phi) - np.sin(k) * np.sin(theta) * np.sin(phi)


def _refine_extremum(fun, lo, hi, iters: int = 70):
    """Vectorised ternary search for the minimum of ``fun`` on [lo, hi]."""
    a = np.array(lo, dtype=np.float64, copy=True)
    b = np.array(hi, dtype=np.float64, copy=True)
    for _ in range(iters):
        third = (b - a) / 3.0
        m1 = a + third
        m2 = b - third
        take_left = fun(m1) < fun(m2)
        b = np.where(take_left, m2, b)
        a = np.where(take_left, a, m1)
    return 0.5 * (a + b)


def min_gap_sampled(theta, phi, k_samples: int = 1024):
    """Brute-force ``(gap_zero, gap_pi)``: coarse k-scan plus local refinement.

    Independent of the amplitude/phase closed form; agrees with
    :func:`min_gap` to well below 1e-8 away from the closures.  Broadcasts
    over array-valued ``theta``/``phi``.
    """
    if k_samples < 256:
        raise ValueError("k_samples must be >= 256")
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    k = np.linspace(-math.pi, math.pi, k_samples, endpoint=False)
    f = _cos_w(theta[..., None], phi[..., None], k)
    dk = 2.0 * math.pi / k_samples

    k_hi = k[np.argmax(f, axis=-1)]
    k_best_hi = _refine_extremum(
        lambda kk: -_cos_w(theta, phi, kk), k_hi - dk, k_hi + dk
    )
    k_lo = k[np.argmin(f, axis=-1)]
    k_best_lo = _refine_extremum(
        lambda kk: _cos_w(theta, phi, kk), k_lo - dk, k_lo + dk
    )

    f_max = np.clip(_cos_w(theta, phi, k_best_hi), -1.0, 1.0)
    f_min = np.clip(_cos_w(theta, phi, k_best_lo), -1.0, 1.0)
    gap_zero = np.arccos(f_max)  # min of w
    gap_pi = math.pi - np.arccos(f_min)  # min of pi - w
    return gap_zero, gap_pi


def scan_gap_map(n_theta: int = 181, n_phi: int = 181) -> GapMap:
    """Closed-form gap map over inclusive grids covering [-pi, pi]."""
    theta = np.linspace(-math.pi, math.pi, n_theta)
    phi = np.linspace(-math.pi, math.pi, n_phi)
    g = np.arccos(np.clip(_amplitude(theta[:, None], phi[None, :]), -1.0, 1.0))
    return GapMap(theta_grid=theta, phi_grid=phi, gap_zero=g, gap_pi=g.copy())


def _cluster_cells(cells: list[tuple[int, int]], radius: int = 2) -> list[list[tuple[int, int]]]:
    """Group grid hits whose Chebyshev distance is <= radius."""
    remaining = set(cells)
    clusters = []
    while remaining:
        seed = remaining.pop()
        group = [seed]
        frontier = [seed]
        while frontier:
            ci, cj = frontier.pop()
            near = [
                cell
                for cell in remaining
                if abs(cell[0] - ci) <= radius and abs(cell[1] - cj) <= radius
            ]
            for cell in near:
                remaining.remove(cell)
                group.append(cell)
                frontier.append(cell)
        clusters.append(group)
    return clusters


def enumerate_closures(grid: int = 721, tol: float = 1e-8) -> list[GapClosure]:
    """All gap closures on the closed square [-pi, pi]^2.

    Scans an inclusive ``grid`` x ``grid`` mesh, merges grid-adjacent hits,
    and reports one :class:`GapClosure` per (parameter point, band).  A
    cluster wider than the merge radius means ``tol`` is blurring distinct
    closures together and raises.
    """
    if grid < 181:
        raise ValueError("grid must be >= 181 per axis")
    if tol > 1e-6:
        raise ValueError("tol must be <= 1e-6")

    theta = np.linspace(-math.pi, math.pi, grid)
    phi = np.linspace(-math.pi, math.pi, grid)
    amp = _amplitude(theta[:, None], phi[None, :])
    gap = np.arccos(np.clip(amp, -1.0, 1.0))
    hits = [tuple(c) for c in np.argwhere(gap < tol)]

    closures: list[GapClosure] = []
    for group in _cluster_cells(hits, radius=2):
        rows = [c[0] for c in group]
        cols = [c[1] for c in group]
        if max(rows) - min(rows) > 4 or max(cols) - min(cols) > 4:
            raise ValueError(
                f"tol={tol} merges {len(group)} cells spanning several closures; lower it"
            )
        best = max(group, key=lambda c: amp[c])
        th, ph = float(theta[best[0]]), float(phi[best[1]])
        delta = math.atan2(math.sin(th) * math.sin(ph), math.cos(th) * math.cos(ph))
        gap_zero, gap_pi = min_gap(th, ph)
        if gap_zero < tol:
            closures.append(GapClosure(th, ph, canonical_angle(-delta), BAND_ZERO))
        if gap_pi < tol:
            closures.append(GapClosure(th, ph, canonical_angle(math.pi - delta), BAND_PI))
    closures.sort(key=lambda c: (c.theta, c.phi, c.band))
    return closures


def _dedupe(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    for p in sorted(points):
        if not any(abs(p[0] - q[0]) <= _POINT_MERGE_TOL and abs(p[1] - q[1]) <= _POINT_MERGE_TOL for q in out):
            out.append(p)
    return out


def closure_points(closures: list[GapClosure]) -> list[tuple[float, float]]:
    """Distinct closure locations on the closed square, each counted once
    regardless of how many bands close there."""
    return _dedupe([(c.theta, c.phi) for c in closures])


def canonical_points(closures: list[GapClosure]) -> list[tuple[float, float]]:
    """Distinct closure locations after identifying angles modulo 2*pi."""
    return _dedupe(
        [(canonical_angle(c.theta), canonical_angle(c.phi)) for c in closures]
    )


def assert_no_boundary(
    closures: list[GapClosure],
    gap_fn=None,
    tol: float = 1e-8,
    radii=(0.02, 0.04, 0.06, 0.08, 0.1),
    n_directions: int = 16,
) -> bool:
    """True iff every closure is isolated: the gap reopens in every direction.

    Probes ``n_directions`` rays at each radius in ``radii`` around each
    closure point; a closure lying on a curve of closures (a phase-transition
    line) keeps the gap at zero along the curve and fails the probe.
    ``gap_fn(theta, phi)`` defaults to the closed-form minimum gap.
    """
    if gap_fn is None:
        gap_fn = lambda th, ph: float(min_gap(th, ph)[0])  # noqa: E731
    angles = 2.0 * math.pi * np.arange(n_directions) / n_directions
    for th, ph in closure_points(closures):
        for r in radii:
            for a in angles:
                if gap_fn(th + r * math.cos(a), ph + r * math.sin(a)) <= tol:
                    return False
    return True


def closures_to_dict(closures: list[GapClosure], grid: int | None = None, tol: float | None = None) -> dict:
    """JSON-ready survey record reporting both counting conventions."""
    points = closure_points(closures)
    return {
        "closures": [
            {
                "theta": c.theta,
                "phi": c.phi,
                "canonical_theta": canonical_angle(c.theta),
                "canonical_phi": canonical_angle(c.phi),
                "k_star": c.k_star,
                "band": c.band,
            }
            for c in closures
        ],
        "closure_points": [list(p) for p in points],
        "count_points": len(points),
        "count_points_mod_2pi": len(canonical_points(closures)),
        "count_point_band_pairs": len(closures),
        "grid": grid,
        "tol": tol,
    }


def gap_map_to_csv(gm: GapMap, path) -> None:
    rows = (
        (float(th), float(ph), float(gm.gap_zero[i, j]), float(gm.gap_pi[i, j]))
        for i, th in enumerate(gm.theta_grid)
        for j, ph in enumerate(gm.phi_grid)
    )
    write_csv(path, ["theta", "phi", "gap_zero", "gap_pi"], rows)
