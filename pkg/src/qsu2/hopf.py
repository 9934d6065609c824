"""Generalized real deformation of su(2) with a Hopf-algebra structure.

The algebra is generated by J_z, J_+, J_- and a positive diagonal g with

    [J_z, J_+-] = +- J_+-,      [J_+, J_-] = 2 (g^2 - g^-2) / h(q),

h(q) = q - 1/q, and g^2 = f(J_z, q) drawn from the quadratic family

    f(m, q) = 1 + (q-1) m + (q-1)^2 (alpha m + b(m)),

which reduces to su(2) at q -> 1 for any bounded positive profile b.  At
the distinguished value q1 = (alpha-1)/alpha the linear terms collapse to
f = 1 + (q1-1)^2 b(m).  Unitarity confines the image of f to a c-dependent
window; a sech-shaped f yields a bounded spectrum of the deformed
commutator with a single accumulation point.

Representations are built by telescoping the commutator relation, with the
anchor fixed so the quartic Casimir matches the requested c at the basis
midpoint.  The conjugation relation g^2 J_+- g^-2 = q^{+-1} J_+- and the
exact constancy of the Casimir hold only for the geometric profile
f = f0 q1^m (the point of the family equivalent to the standard
q-deformation); for other profiles those residuals are reported, not
asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import OperatorMatrix

EDGE_BUFFER = 2


def _profile_constant(params):
    b0 = float(params.get("b0", 1.0))
    if b0 <= 0.0:
        raise ValueError("constant profile requires b0 > 0")
    return lambda m: np.full_like(np.asarray(m, dtype=float), b0, dtype=float)


def _sech_sq(m):
    """sech^2 without overflow at large |m|."""
    m = np.abs(np.asarray(m, dtype=float))
    e = np.exp(-m)
    return (2.0 * e / (1.0 + e * e)) ** 2


def _profile_sech(params, q1):
    f_lo = float(params["f_lo"])
    f_hi = float(params["f_hi"])
    # f = 1 + (q1-1)^2 b with b > 0 forces f > 1
    if not (f_hi > f_lo > 1.0):
        raise ValueError("sech profile requires f_hi > f_lo > 1 (b positive)")
    scale = (q1 - 1.0) ** 2

    def b(m):
        f = (f_hi - f_lo) * _sech_sq(m) + f_lo
        return (f - 1.0) / scale

    return b


def _profile_geometric(params, q1, alpha):
    f0 = float(params.get("f0", 4.0))
    if f0 <= 0.0:
        raise ValueError("geometric profile requires f0 > 0")

    def b(m):
        m = np.asarray(m, dtype=float)
        return alpha**2 * (f0 * q1**m - 1.0)

    return b


def _profile_tabulated(params):
    m_pts = np.asarray(params["m"], dtype=float)
    b_pts = np.asarray(params["b"], dtype=float)
    if np.any(b_pts <= 0.0):
        raise ValueError("tabulated profile must be positive")
    return lambda m: np.interp(np.asarray(m, dtype=float), m_pts, b_pts)


@dataclass(frozen=True)
class GenDeformation:
    """Deformation data: alpha fixes q1 = (alpha-1)/alpha; the profile names b.

    Profiles: "constant" (b0), "sech" (f_lo, f_hi at q = q1), "geometric"
    (f0, giving f = f0 q1^m exactly), "tabulated" (m, b arrays, linear
    interpolation).  The default alpha < 0 keeps q1 > 1 and h > 0.
    """

    alpha: float = -1.0
    profile: str = "constant"
    profile_params: dict = field(default_factory=dict)
    q1: float = field(init=False)
    h: float = field(init=False)
    C1: float = field(init=False)
    C2: float = field(init=False)

    def __post_init__(self):
        a = float(self.alpha)
        if a == 0.0:
            raise ValueError("alpha = 0 leaves q1 undefined")
        q1 = (a - 1.0) / a
        if q1 <= 0.0 or q1 == 1.0:
            raise ValueError(f"q1 = {q1!r} must be positive and != 1 (alpha in (0, 1] excluded)")
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "h", q1 - 1.0 / q1)
        # Fractional powers are taken on absolute values; the asserted signs
        # C1, C2 >= 0 fix the branch.
        w = abs(math.sqrt(q1) - 1.0 / math.sqrt(q1))
        object.__setattr__(self, "C1", 2.0 ** (4.0 / 3.0) / (abs(self.h) ** (4.0 / 3.0) * w ** (2.0 / 3.0)))
        object.__setattr__(self, "C2", 2.0 ** (1.0 / 3.0) / w ** (1.0 / 3.0))

    def b(self, m):
        if self.profile == "constant":
            fn = _profile_constant(self.profile_params)
        elif self.profile == "sech":
            fn = _profile_sech(self.profile_params, self.q1)
        elif self.profile == "geometric":
            fn = _profile_geometric(self.profile_params, self.q1, self.alpha)
        elif self.profile == "tabulated":
            fn = _profile_tabulated(self.profile_params)
        else:
            raise ValueError(f"unknown profile {self.profile!r}")
        return fn(m)

    def f_at_q1(self, m):
        """f(m, q1) = 1 + (q1 - 1)^2 b(m); must stay positive."""
        f = 1.0 + (self.q1 - 1.0) ** 2 * self.b(m)
        if np.any(np.asarray(f) <= 0.0):
            raise ValueError("f(m, q1) <= 0 on the working range (g not real)")
        return f


@dataclass(frozen=True)
class UnitarityWindow:
    L1: float
    L2: float
    l1: float
    l2: float
    f_min: float
    f_max: float
    c_min: float
    paper_ordering: bool  # l2 > L2 > l1 > L1 (holds on the q1 in (0, 1) branch)


@dataclass(frozen=True)
class HopfReport:
    coassoc_g: float
    coassoc_jp: float
    counit_jp: float
    counit_g: float
    antipode_full: float  # S(J_+) = -q^-1 J_+ convention
    antipode_half: float  # S(J_+) = -q^-1/2 J_+ convention
    comult_homomorphism: float  # Delta applied to the commutator relation
    conjugation: float  # g^2 J_+ g^-2 - q1 J_+ interior residual


def deformation_f(m, gd: GenDeformation, q: float):
    """f(m, q) = 1 + (q-1) m + (q-1)^2 (alpha m + b(m))."""
    m = np.asarray(m, dtype=float)
    dq = q - 1.0
    out = 1.0 + dq * m + dq * dq * (gd.alpha * m + gd.b(m))
    return float(out) if out.ndim == 0 else out


def reduction_residuals(gd: GenDeformation, m: float, eps: float = 1e-6):
    """Residuals of the su(2) reduction conditions f(m,1) = 1 and
    df/dq(m,1) = m (central finite difference)."""
    r0 = abs(deformation_f(m, gd, 1.0) - 1.0)
    der = (deformation_f(m, gd, 1.0 + eps) - deformation_f(m, gd, 1.0 - eps)) / (2.0 * eps)
    return r0, abs(der - m)


def _window_bounds(c: float, gd: GenDeformation):
    """Window bounds from the two quadratic inequalities; inf marks a
    one-sided condition."""
    if c < 0.0:
        raise ValueError("c must be non-negative")
    sq1 = math.sqrt(gd.q1)
    beta = 1.0 + c / (2.0 * gd.C1)
    rad = beta * beta - 1.0
    if rad < 0.0:
        raise ValueError(f"window empty at this c: beta^2 - 1 = {rad!r} < 0")
    root = math.sqrt(rad)
    L1, L2 = sq1 * (beta - root), sq1 * (beta + root)

    a1 = gd.C1
    a2 = 2.0 * gd.C2 / gd.h
    disc = a1 * a1 * beta * beta - (a1 * a1 - a2 * a2)
    if disc < 0.0:
        raise ValueError(f"window empty at this c: discriminant {disc!r} < 0")
    droot = math.sqrt(disc)
    lead = a1 + a2
    if lead > 0.0:
        u_lo = (a1 * beta - droot) / lead
        u_hi = (a1 * beta + droot) / lead
        l1, l2 = sq1 * u_lo, sq1 * u_hi
    else:
        # downward parabola: the positive-u feasible set is one-sided above
        u_lo = (a1 * beta - droot) / lead
        l1, l2 = sq1 * u_lo, math.inf
    return L1, L2, l1, l2


def window_c_min(gd: GenDeformation, c_hi: float = 64.0, iters: int = 80) -> float:
    """Smallest c with a non-empty f window, located by bisection."""

    def width(c):
        L1, L2, l1, l2 = _window_bounds(c, gd)
        return min(L2, l2) - max(L1, l1)

    lo, hi = 0.0, c_hi
    while width(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise ValueError("no non-empty window found up to c = 1e12")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if width(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def unitarity_window(c: float, gd: GenDeformation) -> UnitarityWindow:
    """Unitarity window for the image of f at Casimir value c."""
    L1, L2, l1, l2 = _window_bounds(c, gd)
    f_min = max(L1, l1)
    f_max = min(L2, l2)
    return UnitarityWindow(
        L1=L1,
        L2=L2,
        l1=l1,
        l2=l2,
        f_min=f_min,
        f_max=f_max,
        c_min=window_c_min(gd),
        paper_ordering=bool(l2 > L2 > l1 > L1),
    )


def window_inequalities(f, c: float, gd: GenDeformation):
    """Direct evaluation of the two non-negativity conditions at f values.

    Returns (e35, e36), the expectation values of J_+J_- and J_-J_+ scaled
    by C2; unitarity requires both >= 0.
    """
    f = np.asarray(f, dtype=float)
    gt = np.sqrt(f / math.sqrt(gd.q1))
    quad = (gt - 1.0 / gt) ** 2
    e35 = c - gd.C1 * quad
    e36 = e35 - (2.0 * gd.C2 / gd.h) * (gt**2 - gt**-2)
    return e35, e36


def sech_profile(m, gd: GenDeformation, f_lo: float, f_hi: float):
    """(f_hi - f_lo)/cosh^2(m) + f_lo; image inside (f_lo, f_hi]."""
    if not (f_hi > f_lo > 0.0):
        raise ValueError("requires f_hi > f_lo > 0")
    out = (f_hi - f_lo) * _sech_sq(m) + f_lo
    return float(out) if np.ndim(out) == 0 else out


def spectrum_2jz(gd: GenDeformation, m_range):
    """Deformed commutator spectrum 2 (f - 1/f)/h over the m range."""
    f = np.asarray(gd.f_at_q1(m_range), dtype=float)
    return 2.0 * (f - 1.0 / f) / gd.h


def detect_accumulation(m_values, values, tail: int = 8):
    """Monotone-tail detection of a two-sided accumulation point.

    Returns a dict with the one-sided limit estimates, whether both tails
    are monotone, and whether they agree (single two-sided limit point).
    """
    m = np.asarray(m_values, dtype=float)
    v = np.asarray(values, dtype=float)
    order = np.argsort(m)
    m, v = m[order], v[order]
    left, right = v[:tail], v[-tail:]
    dl, dr = np.diff(left), np.diff(right)
    monotone = bool((np.all(dl <= 0) or np.all(dl >= 0)) and (np.all(dr <= 0) or np.all(dr >= 0)))
    lim_minus, lim_plus = float(left[0]), float(right[-1])
    return {
        "limit_minus": lim_minus,
        "limit_plus": lim_plus,
        "monotone_tails": monotone,
        "two_sided": bool(abs(lim_plus - lim_minus) < 1e-6 * (1.0 + abs(lim_plus))),
        "limit": 0.5 * (lim_plus + lim_minus),
        "bounded": bool(np.isfinite(v).all()),
    }


def _c2_casimir(gd: GenDeformation) -> float:
    """J_+J_- coefficient of the quartic Casimir, 2^{1/3}/(q^{1/2}+q^{-1/2})^{1/3}."""
    v = math.sqrt(gd.q1) + 1.0 / math.sqrt(gd.q1)
    return 2.0 ** (1.0 / 3.0) / v ** (1.0 / 3.0)


def gen_commutator_diag(gd: GenDeformation, m):
    """Diagonal of [J_+, J_-]: 2 (f(m) - 1/f(m))/h."""
    f = gd.f_at_q1(m)
    return 2.0 * (f - 1.0 / f) / gd.h


def build_gen_rep(gd: GenDeformation, dim: int, c: float, m0: float | None = None):
    """(J_z, J_+, J_-, g) on m0 .. m0+dim-1 by telescoping the commutator.

    |N_m|^2 is telescoped from the basis midpoint, anchored so the quartic
    Casimir equals c there.  Raises when the anchor or any telescoped
    |N_m|^2 goes negative (no unitary truncation at this anchor).
    """
    if dim < 3:
        raise ValueError("dim must be >= 3")
    if m0 is None:
        m0 = -(dim - 1) / 2.0
    ms = m0 + np.arange(dim, dtype=float)
    f = np.asarray(gd.f_at_q1(ms), dtype=float)
    gt = f ** 0.5 * gd.q1 ** -0.25  # diag(sqrt(f)) * q1^{-1/4}
    phi = (gt - 1.0 / gt) ** 2
    k_diag = 2.0 * (f - 1.0 / f) / gd.h

    a = dim // 2
    c2c = _c2_casimir(gd)
    n2 = np.empty(dim - 1)
    anchor = (c - gd.C1 * phi[a]) / c2c  # |N|^2 feeding row a from below
    if anchor < -1e-12:
        raise ValueError(f"no unitary truncation at this anchor: |N|^2 = {anchor!r}")
    n2[a - 1] = max(anchor, 0.0)
    for i in range(a, dim - 1):  # upward: N_i^2 = N_{i-1}^2 - K(m_i)
        n2[i] = n2[i - 1] - k_diag[i]
    for i in range(a - 2, -1, -1):  # downward
        n2[i] = n2[i + 1] + k_diag[i + 1]
    if np.any(n2 < -1e-12 * max(1.0, abs(c))):
        raise ValueError(f"no unitary truncation at this anchor: min |N|^2 = {n2.min()!r}")
    n2 = np.maximum(n2, 0.0)

    jz = np.diag(ms).astype(complex)
    jp = np.zeros((dim, dim), dtype=complex)
    for i in range(dim - 1):
        jp[i + 1, i] = math.sqrt(n2[i])
    jm = jp.conj().T.copy()
    g = np.diag(gt).astype(complex)
    basis = tuple(ms)
    return (
        OperatorMatrix(jz, basis, 0.0),
        OperatorMatrix(jp, basis, 0.0),
        OperatorMatrix(jm, basis, 0.0),
        OperatorMatrix(g, basis, 0.0),
    )


def casimir_gen(gd: GenDeformation, rep) -> np.ndarray:
    """Quartic Casimir matrix C1 (g~ - g~^-1)^2 + c2 J_+ J_- of the built rep."""
    _, jp, jm, g = rep
    gt = np.real(np.diag(g.entries))
    quad = np.diag((gt - 1.0 / gt) ** 2)
    return gd.C1 * quad + _c2_casimir(gd) * (jp.entries @ jm.entries)


def conjugation_residual(gd: GenDeformation, rep) -> float:
    """Interior residual of g^2 J_+ g^-2 - q1 J_+ (exact only for the
    geometric profile, where f steps by the ratio q1)."""
    _, jp, _, g = rep
    n = jp.entries.shape[0]
    f = np.real(np.diag(g.entries)) ** 2 * math.sqrt(gd.q1)
    conj = np.diag(f) @ jp.entries @ np.diag(1.0 / f)
    res = conj - gd.q1 * jp.entries
    lo, hi = EDGE_BUFFER, n - EDGE_BUFFER
    return float(np.abs(res[lo:hi, lo:hi]).max())


def _interior_pair_mask(n: int, buf: int) -> np.ndarray:
    keep = np.zeros(n, dtype=bool)
    keep[buf : n - buf] = True
    return np.kron(keep, keep)


def hopf_axiom_report(gd: GenDeformation, rep) -> HopfReport:
    """Numerical residuals of the Hopf axioms on the truncated rep.

    Coassociativity and the counit axiom collapse structurally (Delta(g) is
    grouplike, eps(J_+) = 0) and are asserted tiny by tests.  The antipode
    axiom is evaluated under both half-power conventions and reported: with
    a diagonal sqrt(f) realization of g, S(J_+) = -q^-1 J_+ leaves a
    sqrt(q)-vs-q mismatch.  The comultiplication-homomorphism residual on
    the commutator relation vanishes only when the conjugation relation
    holds (geometric profile).
    """
    _, jp_m, jm_m, g_m = rep
    jp, jm = jp_m.entries, jm_m.entries
    # the stored matrix is the tilde-normalized q1^{-1/4} sqrt(f); the Hopf
    # maps and the commutator relation use the bare g with g^2 = f
    g = gd.q1**0.25 * g_m.entries
    ginv = np.diag(1.0 / np.diag(g))
    n = jp.shape[0]

    def kron3(a, b, c):
        return np.kron(np.kron(a, b), c)

    # Delta(J+) = J+ (x) g^-1 + g (x) J+ ; Delta(g) = g (x) g
    d_jp = np.kron(jp, ginv) + np.kron(g, jp)
    d_jm = np.kron(jm, ginv) + np.kron(g, jm)
    d_g = np.kron(g, g)
    d_ginv = np.kron(ginv, ginv)

    coassoc_g = float(np.abs(kron3(g, g, g) - kron3(g, g, g)).max())
    lhs = np.kron(d_jp, ginv) + kron3(g, g, jp)  # (Delta (x) id) Delta(J+)
    rhs = np.kron(jp, d_ginv) + np.kron(g, d_jp)  # (id (x) Delta) Delta(J+)
    coassoc_jp = float(np.abs(lhs - rhs).max())

    # (eps (x) id) Delta = id with eps(J+) = 0, eps(g^+-1) = 1
    counit_jp = float(np.abs(0.0 * ginv + 1.0 * jp - jp).max())
    counit_g = float(np.abs(1.0 * g - g).max())

    mask = np.zeros(n, dtype=bool)
    mask[EDGE_BUFFER : n - EDGE_BUFFER] = True

    def interior_max(a, idx):
        sub = a[np.ix_(idx, idx)]
        return float(np.abs(sub).max()) if sub.size else 0.0

    # m (S (x) id) Delta(J+) - eta eps(J+) = S(J+) g^-1 + g^-1 J+
    anti_full = -(1.0 / gd.q1) * jp @ ginv + ginv @ jp
    anti_half = -(1.0 / math.sqrt(gd.q1)) * jp @ ginv + ginv @ jp
    idx1 = np.where(mask)[0]
    antipode_full = interior_max(anti_full, idx1)
    antipode_half = interior_max(anti_half, idx1)

    # Delta on the commutator relation [J+, J-] = 2 (g^2 - g^-2)/h
    hom = (d_jp @ d_jm - d_jm @ d_jp) - 2.0 * (d_g @ d_g - d_ginv @ d_ginv) / gd.h
    pair = _interior_pair_mask(n, EDGE_BUFFER)
    idx2 = np.where(pair)[0]
    comult_hom = interior_max(hom, idx2)

    return HopfReport(
        coassoc_g=coassoc_g,
        coassoc_jp=coassoc_jp,
        counit_jp=counit_jp,
        counit_g=counit_g,
        antipode_full=antipode_full,
        antipode_half=antipode_half,
        comult_homomorphism=comult_hom,
        conjugation=conjugation_residual(gd, rep),
    )
