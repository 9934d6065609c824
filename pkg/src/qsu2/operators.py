"""Explicit matrix representations of su_{e^{is}}(2) and their verification.

J_z is diagonal on an m basis with unit spacing; J_+/J_- are shift
matrices with real non-negative ladder coefficients
sqrt(c - [m +- 1/2]^2) (the undetermined phase is fixed to +1).  On
finite classes the boundary coefficients vanish and the defining
relations hold on the full matrix; truncations of infinite classes are
verified on rows at least `EDGE_BUFFER` away from the matrix edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qnumbers import Deformation, bracket_sequence, qnumber

EDGE_BUFFER = 2
CLOSURE_TOL = 1e-10
RADICAND_TOL = 1e-12


class UnitarityError(ValueError):
    """Negative ladder radicand: (c, m) violates the unitarity condition."""


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray  # dense complex
    basis: tuple  # ordered m labels
    s: float


@dataclass(frozen=True)
class AlgebraReport:
    res_jz_jpm: float  # commutators [J_z, J_+-] -+ J_+-
    res_jp_jm: float  # [J_+, J_-] - diag([2m])
    res_casimir: float  # both quadratic Casimir forms against c * I
    hermiticity: float  # ||J_- - J_+^dagger||
    casimir_forms_dev: float  # deviation between the two Casimir forms
    casimir_commutes: float  # max ||[C, X]|| over X = J_z, J_+, J_-
    maekawa_shift_dev: float  # C - cos(s)[J_z]^2 - (J+J- + J-J+)/2 vs 1/(4 cos^2(s/2)) I
    maekawa_2s_dev: float  # same with [J_z] evaluated at 2s (alternative reading)
    closed: bool  # boundary ladder coefficients vanish
    interior_buffer: int  # rows excluded from residuals at each edge (0 when closed)


def _dir_sign(direction) -> int:
    if direction in (1, +1, "+", "plus", "raise"):
        return +1
    if direction in (-1, "-", "minus", "lower"):
        return -1
    raise ValueError(f"direction must be +/-, got {direction!r}")


def ladder_coeff(d: Deformation, c: float, m: float, direction) -> float:
    """sqrt(c - [m +- 1/2]^2) >= 0, raising on unitarity violation."""
    sign = _dir_sign(direction)
    rad = c - qnumber(m + 0.5 * sign, d) ** 2
    if rad < -RADICAND_TOL * max(1.0, abs(c)):
        raise UnitarityError(
            f"c - [m {'+' if sign > 0 else '-'} 1/2]^2 = {rad!r} < 0 at c={c!r}, m={m!r}"
        )
    return math.sqrt(max(rad, 0.0))


def continuous_ladder_coeff(d: Deformation, sigma: float, m: float, direction, k: int = 0) -> float:
    """Continuous-series coefficient in its trig/hyperbolic closed form,
    sqrt(cos^2(beta) cosh^2(sigma s) + sin^2(beta) sinh^2(sigma s))/sin s
    with beta = -+ m s - s/2.  Equals ladder_coeff at c = cosh^2(s sigma)/sin^2 s."""
    sign = _dir_sign(direction)
    beta = -sign * m * d.s - d.s / 2.0
    val = math.cos(beta) ** 2 * math.cosh(sigma * d.s) ** 2 + math.sin(beta) ** 2 * math.sinh(
        sigma * d.s
    ) ** 2
    return math.sqrt(val) / d.sin_s


def build_rep(d: Deformation, c: float, m_list):
    """(J_z, J_+, J_-) on the ordered basis m_list (spacing exactly 1)."""
    ms = np.asarray(m_list, dtype=float)
    if ms.ndim != 1 or len(ms) < 1:
        raise ValueError("m_list must be a non-empty 1-d sequence")
    if len(ms) > 1 and not np.all(np.abs(np.diff(ms) - 1.0) < 1e-12):
        raise ValueError("m_list spacing must be exactly 1")
    n = len(ms)
    jz = np.diag(ms).astype(complex)
    jp = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        jp[i + 1, i] = ladder_coeff(d, c, ms[i], +1)
    jm = jp.conj().T.copy()
    basis = tuple(ms)
    return (
        OperatorMatrix(jz, basis, d.s),
        OperatorMatrix(jp, basis, d.s),
        OperatorMatrix(jm, basis, d.s),
    )


def _maxabs(a: np.ndarray, lo: int, hi: int) -> float:
    """Max absolute entry over the [lo:hi, lo:hi] block."""
    block = a[lo:hi, lo:hi]
    return float(np.abs(block).max()) if block.size else 0.0


def edge_coefficients(d: Deformation, c: float, triple) -> tuple[float, float]:
    """Ladder coefficients that would leave the basis at the bottom/top."""
    ms = triple[0].basis
    bottom = math.sqrt(max(c - qnumber(ms[0] - 0.5, d) ** 2, 0.0))
    top = math.sqrt(max(c - qnumber(ms[-1] + 0.5, d) ** 2, 0.0))
    return bottom, top


def verify_algebra(triple, d: Deformation, c: float) -> AlgebraReport:
    """Residuals of the defining relations and Casimir identities.

    Closed (finite-class) representations are checked on the full matrix;
    truncations exclude EDGE_BUFFER rows at each edge, where the lost
    ladder flux makes the diagonal relations fail by construction.
    """
    jz, jp, jm = (t.entries for t in triple)
    ms = np.asarray(triple[0].basis, dtype=float)
    n = len(ms)

    bottom, top = edge_coefficients(d, c, triple)
    closed = max(bottom, top) < CLOSURE_TOL
    buf = 0 if closed else EDGE_BUFFER
    lo, hi = buf, n - buf
    if hi <= lo:
        raise ValueError(f"basis of size {n} leaves no interior rows at buffer {buf}")

    eye = np.eye(n)
    res1 = max(
        _maxabs(jz @ jp - jp @ jz - jp, lo, hi),
        _maxabs(jz @ jm - jm @ jz + jm, lo, hi),
    )
    res2 = _maxabs(jp @ jm - jm @ jp - np.diag(bracket_sequence(ms, d)), lo, hi)

    br_half = qnumber(0.5, d)
    up = np.diag(qnumber(ms + 0.5, d) ** 2)
    down = np.diag(qnumber(ms - 0.5, d) ** 2)
    cas_a = up + jm @ jp  # [J_z + 1/2]^2 + J_- J_+
    cas_b = down + jp @ jm  # [J_z - 1/2]^2 + J_+ J_-
    anti = (jp @ jm + jm @ jp) / 2.0
    cas_sym = d.cos_s * np.diag(qnumber(ms, d) ** 2) + anti + br_half**2 * eye

    res_cas = max(_maxabs(cas_a - c * eye, lo, hi), _maxabs(cas_b - c * eye, lo, hi))
    forms_dev = max(_maxabs(cas_a - cas_b, lo, hi), _maxabs(cas_a - cas_sym, lo, hi))

    # Casimir must commute with the generators on interior rows; products
    # shift indices by one, so widen the exclusion by one row.
    lo2, hi2 = (lo + 1, hi - 1) if not closed else (lo, hi)
    commutes = 0.0
    if hi2 > lo2:
        for x in (jz, jp, jm):
            commutes = max(commutes, _maxabs(cas_b @ x - x @ cas_b, lo2, hi2))

    shift = 1.0 / (4.0 * math.cos(d.s / 2.0) ** 2)
    mae = c * eye - d.cos_s * np.diag(qnumber(ms, d) ** 2) - anti
    mae_dev = _maxabs(mae - shift * eye, lo, hi)
    if abs(math.sin(2.0 * d.s)) > 1e-12:
        br_2s = np.sin(2.0 * d.s * ms) / math.sin(2.0 * d.s)
        mae2 = c * eye - d.cos_s * np.diag(br_2s**2) - anti
        mae2_dev = _maxabs(mae2 - shift * eye, lo, hi)
    else:
        mae2_dev = float("nan")

    return AlgebraReport(
        res_jz_jpm=res1,
        res_jp_jm=res2,
        res_casimir=res_cas,
        hermiticity=float(np.abs(jm - jp.conj().T).max()),
        casimir_forms_dev=forms_dev,
        casimir_commutes=commutes,
        maekawa_shift_dev=mae_dev,
        maekawa_2s_dev=mae2_dev,
        closed=closed,
        interior_buffer=buf,
    )
