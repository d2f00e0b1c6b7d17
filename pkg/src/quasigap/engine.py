"""Bulk point enumeration and visibility over integer coefficient arrays.

A point x = x1 + x2*zeta is handled as the int64 quadruple (a, b, c, d)
with x1 = a + b*omega, x2 = c + d*omega.  Every predicate used here
(radius, window membership, coprimality) reduces to exact sign tests of
integers of the form P + Q*sqrt(m), so the whole pipeline is branch-exact
while running as vectorised numpy.

Coefficient magnitudes stay far below the int64 overflow line for all
supported radii; `_assert_radius` guards the entry point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclo import CYCLO5, CYCLO8, CycloId
from .geometry import Window
from .qfield import Ring, ZSQRT2, ZTAU

__all__ = [
    "MembershipProgram",
    "build_program",
    "sign_sqrt",
    "sign_quad_pair",
    "modulus_sq_pair",
    "conj_pairs",
    "mul_by",
    "gcd_is_unit",
    "enumerate_family",
    "MAX_RADIUS",
]

MAX_RADIUS = 10_000.0
_EPS = 1e-5

_I64 = np.int64


def _assert_radius(T: float) -> None:
    if not (0 < T <= MAX_RADIUS):
        raise ValueError(f"radius must be in (0, {MAX_RADIUS:g}] for exact int64 arithmetic")


def sign_sqrt(p: np.ndarray, q: np.ndarray, m: int) -> np.ndarray:
    """Exact sign of p + q*sqrt(m) elementwise (int64 in, int8 out)."""
    # squaring must not overflow: |p|, sqrt(m)*|q| < 3e9 keeps p^2, m*q^2 < 2^63
    lim = 2_900_000_000 // m
    if p.size:
        assert int(np.abs(p).max(initial=0)) < 2_900_000_000
        assert int(np.abs(q).max(initial=0)) < lim
    sp = np.sign(p).astype(np.int8)
    sq = np.sign(q).astype(np.int8)
    same = (sp == sq) | (sq == 0)
    out = np.where(same, sp, np.where(sp == 0, sq, np.int8(0)))
    mixed = ~(same | (sp == 0))
    if mixed.any():
        pm = p[mixed]
        qm = q[mixed]
        d = pm * pm - m * qm * qm
        sd = np.sign(d).astype(np.int8)
        out[mixed] = np.where(sp[mixed] > 0, sd, -sd)
    return out


def sign_quad_pair(u: np.ndarray, v: np.ndarray, ring: Ring) -> np.ndarray:
    """Exact sign of u + v*omega elementwise."""
    if ring is ZSQRT2:
        return sign_sqrt(u, v, 2)
    return sign_sqrt(2 * u + v, v, 5)


def _mul_pairs(ring: Ring, au, av, bu, bv):
    """(au + av*omega)(bu + bv*omega) as a coefficient pair."""
    t, n = ring.trace, ring.norm_omega
    vv = av * bv
    return au * bu - n * vv, au * bv + av * bu + t * vv


def conj_pairs(ring: Ring, u: np.ndarray, v: np.ndarray):
    """sigma(u + v*omega) = (u + t*v) - v*omega."""
    return u + ring.trace * v, -v


def mul_by(ring: Ring, u, v, e: int, f: int):
    """Multiply coefficient arrays by the fixed element e + f*omega."""
    return _mul_pairs(ring, u, v, np.int64(e), np.int64(f))


def modulus_sq_pair(cid: CycloId, a, b, c, d):
    """|x|^2 = x1^2 + mu*x1*x2 + x2^2 with mu = zeta + conj(zeta)."""
    ring = cid.ring
    u1, v1 = _mul_pairs(ring, a, b, a, b)
    u2, v2 = _mul_pairs(ring, c, d, c, d)
    uc, vc = _mul_pairs(ring, a, b, c, d)
    if cid.n == 8:
        # mu = omega = sqrt2: omega*(u + v*omega) = 2v + u*omega
        um, vm = 2 * vc, uc
    else:
        # mu = tau - 1: (tau-1)(u + v*tau) = (v-u) + u*tau
        um, vm = vc - uc, uc
    return u1 + u2 + um, v1 + v2 + vm


def radius_mask(cid: CycloId, a, b, c, d, t_sq_num: int, t_sq_den: int) -> np.ndarray:
    """|x|^2 <= T^2 exactly, with T^2 = t_sq_num / t_sq_den."""
    mu, mv = modulus_sq_pair(cid, a, b, c, d)
    return sign_quad_pair(t_sq_num - t_sq_den * mu, -t_sq_den * mv, cid.ring) >= 0


@dataclass
class MembershipProgram:
    """Integer half-plane forms: per edge, value = (E0 + E1*s1 + E2*s2) in Z[omega],
    evaluated on the conjugate coordinates s1 = sigma(x1), s2 = sigma(x2)."""

    ring: Ring
    open_boundary: bool
    e0u: np.ndarray
    e0v: np.ndarray
    e1u: np.ndarray
    e1v: np.ndarray
    e2u: np.ndarray
    e2v: np.ndarray

    def edge_count(self) -> int:
        return len(self.e0u)

    def classify(self, s1u, s1v, s2u, s2v) -> np.ndarray:
        """min over edges of the interior sign: 1 inside, 0 boundary, -1 outside.

        Points that fall strictly outside an early edge are dropped from the
        remaining edge tests."""
        t = self.ring.trace
        n = self.ring.norm_omega
        out = np.full(len(s1u), -1, dtype=np.int8)
        live = np.arange(len(s1u))
        state = np.ones(len(s1u), dtype=np.int8)
        for i in range(self.edge_count()):
            if len(live) == 0:
                break
            a1, b1 = s1u[live], s1v[live]
            a2, b2 = s2u[live], s2v[live]
            e1u, e1v = int(self.e1u[i]), int(self.e1v[i])
            e2u, e2v = int(self.e2u[i]), int(self.e2v[i])
            vu = int(self.e0u[i]) + e1u * a1 - n * e1v * b1 + e2u * a2 - n * e2v * b2
            vv = (int(self.e0v[i]) + e1u * b1 + e1v * a1 + t * e1v * b1
                  + e2u * b2 + e2v * a2 + t * e2v * b2)
            s = sign_quad_pair(vu, vv, self.ring)
            keep = s >= 0
            state[live] = np.minimum(state[live], s)
            live = live[keep]
        out[live] = state[live]
        return out

    def admits(self, cls: np.ndarray) -> np.ndarray:
        if self.open_boundary:
            return cls > 0
        return cls >= 0


def _qmul(ring: Ring, a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    t, n = ring.trace, ring.norm_omega
    vv = a[1] * b[1]
    return (a[0] * b[0] - n * vv, a[0] * b[1] + a[1] * b[0] + t * vv)


def build_program(window: Window, cid: CycloId) -> MembershipProgram:
    """Compile a window into integer edge forms on (sigma x1, sigma x2).

    Internal coordinates: point = (alpha, beta*rho_eff) with
      alpha = s1 + g*s2, beta = h*s2,
    where (g, h) = (-omega/2, omega/2) for n = 8 and
    (-tau/2, (tau-1)/2) for n = 5 (rho_eff = sqrt(tau+2)).
    """
    ring = cid.ring
    if window.ring is not ring:
        raise ValueError("window ring does not match family")
    half = Fraction(1, 2)
    if cid.n == 8:
        g = (Fraction(0), -half)
        h = (Fraction(0), half)
    else:
        g = (Fraction(0), -half)
        h = (-half, half)
    rows = []
    for a_, b_, c_ in window.halfplane_forms():
        e1 = a_
        e2u = _qmul(ring, a_, g)
        e2w = _qmul(ring, b_, h)
        e2 = (e2u[0] + e2w[0], e2u[1] + e2w[1])
        rows.append((c_, e1, e2))
    den = 1
    for row in rows:
        for pair in row:
            for f in pair:
                den = den * f.denominator // math.gcd(den, f.denominator)
    cols = [[], [], [], [], [], []]
    for c_, e1, e2 in rows:
        vals = (c_[0], c_[1], e1[0], e1[1], e2[0], e2[1])
        for i, f in enumerate(vals):
            scaled = f * den
            assert scaled.denominator == 1
            cols[i].append(int(scaled))
    # forms stay well inside int64 for every window this library builds
    for col in cols:
        assert all(abs(x) < 2**40 for x in col), "half-plane coefficients too large"
    arrs = [np.array(col, dtype=_I64) for col in cols]
    return MembershipProgram(ring, window.open_boundary,
                             arrs[0], arrs[1], arrs[2], arrs[3], arrs[4], arrs[5])


# -- coprimality -------------------------------------------------------------


def _rounddiv(x: np.ndarray, k: np.ndarray) -> np.ndarray:
    # nearest integer to x/k for k > 0 (tie direction immaterial here)
    return (2 * x + k) // (2 * k)


def gcd_is_unit(ring: Ring, a, b, c, d) -> np.ndarray:
    """Vectorised Euclidean algorithm: is gcd(a + b*omega, c + d*omega) a unit?"""
    t, n = ring.trace, ring.norm_omega
    xu = a.astype(_I64).copy()
    xv = b.astype(_I64).copy()
    yu = c.astype(_I64).copy()
    yv = d.astype(_I64).copy()
    active = (yu != 0) | (yv != 0)
    while active.any():
        au, av = xu[active], xv[active]
        bu, bv = yu[active], yv[active]
        nb = bu * bu + t * bu * bv + n * bv * bv
        cu, cv = conj_pairs(ring, bu, bv)
        pu, pv = _mul_pairs(ring, au, av, cu, cv)
        neg = nb < 0
        nb = np.abs(nb)
        pu = np.where(neg, -pu, pu)
        pv = np.where(neg, -pv, pv)
        qu = _rounddiv(pu, nb)
        qv = _rounddiv(pv, nb)
        su, sv = _mul_pairs(ring, qu, qv, bu, bv)
        ru = au - su
        rv = av - sv
        # remainder contract: |N(r)| < |N(y)| (rings are norm-Euclidean)
        nr = np.abs(ru * ru + t * ru * rv + n * rv * rv)
        assert (nr < nb).all()
        xu[active], xv[active] = bu, bv
        yu[active], yv[active] = ru, rv
        act = active.copy()
        active[act] = (ru != 0) | (rv != 0)
    norm = np.abs(xu * xu + t * xu * xv + n * xv * xv)
    return norm == 1


# -- candidate enumeration ----------------------------------------------------


def _ragged_offsets(counts: np.ndarray) -> np.ndarray:
    """For counts (k0, k1, ...) return (0..k0-1, 0..k1-1, ...) flattened."""
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=_I64)
    ends = np.cumsum(counts)
    starts = ends - counts
    return np.arange(total, dtype=_I64) - np.repeat(starts, counts)


def enumerate_family(cid: CycloId, T: float, r_int: float,
                     block_x1: int = 512):
    """Yield candidate coefficient blocks (a, b, c, d) covering every lattice
    point with |x| <= T + slack and |sigma(x)| <= r_int + slack.

    Bounds are conservative floats; callers must apply the exact radius and
    window filters.  Deterministic: blocks appear in increasing b, then a.
    """
    _assert_radius(T)
    ring = cid.ring
    w = ring.omega_float()
    wbar = ring.trace - w
    span = w - wbar  # 2*sqrt2 or sqrt5
    if cid.n == 8:
        k_phys = w / 2.0        # cos(2 pi/8) = sqrt2/2... times? mu/2 with mu = sqrt2
        k_int = -w / 2.0
    else:
        k_phys = (w - 1.0) / 2.0   # (tau-1)/2
        k_int = -w / 2.0           # -tau/2
    one_minus_kp2 = 1.0 - k_phys * k_phys
    one_minus_ki2 = 1.0 - k_int * k_int

    # |x|^2 = x1^2 + 2k*x1*x2 + x2^2 >= (1-k^2)*x1^2 bounds each coordinate
    X = T / one_minus_kp2 ** 0.5 + _EPS
    S = r_int / one_minus_ki2 ** 0.5 + _EPS

    b_lo = math.ceil((-X - S) / span - _EPS)
    b_hi = math.floor((X + S) / span + _EPS)

    a_list = []
    b_list = []
    for b in range(b_lo, b_hi + 1):
        lo = max(-X - b * w, -S - b * wbar)
        hi = min(X - b * w, S - b * wbar)
        if lo > hi:
            continue
        a0 = math.ceil(lo - _EPS)
        a1 = math.floor(hi + _EPS)
        if a0 > a1:
            continue
        a_list.append(np.arange(a0, a1 + 1, dtype=_I64))
        b_list.append(np.full(a1 - a0 + 1, b, dtype=_I64))
    if not a_list:
        return
    a_all = np.concatenate(a_list)
    b_all = np.concatenate(b_list)

    t_sq = T * T
    r_sq = r_int * r_int
    for start in range(0, len(a_all), block_x1):
        a1b = a_all[start:start + block_x1]
        b1b = b_all[start:start + block_x1]
        x1 = a1b.astype(np.float64) + b1b.astype(np.float64) * w
        s1 = a1b.astype(np.float64) + b1b.astype(np.float64) * wbar

        disc_p = t_sq - one_minus_kp2 * x1 * x1
        disc_i = r_sq - one_minus_ki2 * s1 * s1
        ok = (disc_p > -1.0) & (disc_i > -1.0)
        if not ok.any():
            continue
        sqp = np.sqrt(np.maximum(disc_p, 0.0))
        sqi = np.sqrt(np.maximum(disc_i, 0.0))
        p_lo = -k_phys * x1 - sqp - _EPS
        p_hi = -k_phys * x1 + sqp + _EPS
        i_lo = -k_int * s1 - sqi - _EPS
        i_hi = -k_int * s1 + sqi + _EPS

        d_lo = np.ceil((p_lo - i_hi) / span).astype(_I64)
        d_hi = np.floor((p_hi - i_lo) / span).astype(_I64)
        nd = np.where(ok, np.maximum(d_hi - d_lo + 1, 0), 0)
        if int(nd.sum()) == 0:
            continue
        idx = np.repeat(np.arange(len(a1b)), nd)
        dd = d_lo[idx] + _ragged_offsets(nd)

        ddf = dd.astype(np.float64)
        c_lo = np.ceil(np.maximum(p_lo[idx] - ddf * w, i_lo[idx] - ddf * wbar)).astype(_I64)
        c_hi = np.floor(np.minimum(p_hi[idx] - ddf * w, i_hi[idx] - ddf * wbar)).astype(_I64)
        nc = np.maximum(c_hi - c_lo + 1, 0)
        if int(nc.sum()) == 0:
            continue
        idx2 = np.repeat(np.arange(len(dd)), nc)
        cc = c_lo[idx2] + _ragged_offsets(nc)
        yield (a1b[idx[idx2]], b1b[idx[idx2]], cc, dd[idx2])
