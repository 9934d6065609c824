"""Casimir level-set sections and the spectral flow of [2m] against s.

In the formal (J_x, J_y, J_z) space the constant-Casimir condition reads
cos(s) sin^2(s J_z)/sin^2(s) + J_x^2 + J_y^2 = c.  On the J_y = 0 section
J_x = sqrt(c - cos(s) sin^2(s J_z)/sin^2 s) wherever the radicand is
non-negative.  For cos s <= 0 the section is a single connected curve;
for cos s > 0 it breaks into periodic islands once c < cos(s)/sin^2(s),
the transition that mirrors the compact/non-compact change of the
underlying symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CROSSING_TOL = 1e-9


@dataclass(frozen=True)
class LevelSection:
    jz: np.ndarray
    jx: np.ndarray  # NaN where masked
    mask: np.ndarray  # True where the radicand is negative (no section point)
    connectivity: str  # "Connected" | "Disconnected"
    components: int  # maximal unmasked runs in the window


@dataclass(frozen=True)
class FlowTable:
    s_grid: np.ndarray
    m_values: np.ndarray
    values: np.ndarray  # shape (len(m_values), len(s_grid))
    crossings: tuple  # (s, m_low, m_high) triples


def level_section(d, c: float, jz_grid) -> LevelSection:
    """J_y = 0 section of the constant-Casimir surface at value c."""
    if c <= 0.0:
        raise ValueError("c must be positive")
    jz = np.asarray(jz_grid, dtype=float)
    radicand = c - d.cos_s * np.sin(d.s * jz) ** 2 / d.sin_s**2
    mask = radicand < 0.0
    jx = np.where(mask, np.nan, np.sqrt(np.maximum(radicand, 0.0)))
    components = 0
    prev = True
    for bad in mask:
        if not bad and prev:
            components += 1
        prev = bad
    return LevelSection(
        jz=jz,
        jx=jx,
        mask=mask,
        connectivity="Disconnected" if mask.any() else "Connected",
        components=components,
    )


def _disconnected(c: float, s: float) -> bool:
    # gaps exist iff cos s > 0 and c sin^2 s < cos s (radicand negative at
    # sin^2(s Jz) = 1)
    return math.cos(s) > 0.0 and c * math.sin(s) ** 2 < math.cos(s)


def topology_transition(c: float, s_grid):
    """Boundary s* between Disconnected and Connected sections on the grid.

    Returns None when the classification does not change over the grid.
    All s with cos s <= 0 classify Connected; when the transition lies in
    (0, pi/2) it satisfies c = cos(s*)/sin^2(s*) within grid resolution.
    """
    s = np.asarray(s_grid, dtype=float)
    flags = np.array([_disconnected(c, si) for si in s])
    change = np.nonzero(flags[:-1] != flags[1:])[0]
    if len(change) == 0:
        return None
    i = change[0]
    return 0.5 * (s[i] + s[i + 1])


def spectral_flow(m_max: float, s_grid) -> FlowTable:
    """Curves [2m](s) for m = 1/2, 1, ..., m_max with crossing detection.

    Crossings are sign changes of curve differences plus exact-touch points
    within CROSSING_TOL; each is reported as (s, m_low, m_high).
    """
    s = np.asarray(s_grid, dtype=float)
    if np.any(np.minimum(s % math.pi, math.pi - (s % math.pi)) < 1e-6):
        raise ValueError("s_grid must avoid multiples of pi by at least 1e-6")
    m_vals = np.arange(1, int(round(2 * m_max)) + 1, dtype=float) / 2.0
    vals = np.sin(2.0 * np.outer(m_vals, s)) / np.sin(s)

    crossings = []
    for i in range(len(m_vals)):
        for j in range(i + 1, len(m_vals)):
            diff = vals[i] - vals[j]
            sign_change = np.nonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0]
            for k in sign_change:
                # linear interpolation of the crossing location
                t = diff[k] / (diff[k] - diff[k + 1])
                crossings.append((float(s[k] + t * (s[k + 1] - s[k])), m_vals[i], m_vals[j]))
            touch = np.nonzero(np.abs(diff) <= CROSSING_TOL)[0]
            for k in touch:
                crossings.append((float(s[k]), m_vals[i], m_vals[j]))
    crossings.sort()
    return FlowTable(s_grid=s, m_values=m_vals, values=vals, crossings=tuple(crossings))


def flow_bound_excess(table: FlowTable) -> float:
    """max over curves of |[2m](s)| sin(s) - 1; non-positive up to rounding."""
    return float((np.abs(table.values) * np.abs(np.sin(table.s_grid)) - 1.0).max())


def distinct_bracket_values(k: int) -> int:
    """Number of distinct [2m] values over m = 0..k at s = pi/(k+1)."""
    s = math.pi / (k + 1)
    vals = sorted(round(math.sin(2.0 * m * s) / math.sin(s), 9) for m in range(k + 1))
    out = 1
    for a, b in zip(vals, vals[1:]):
        if b - a > 1e-9:
            out += 1
    return out
