"""Densities of points and of visible points: closed forms and counting.

The visible-point densities all share the shape (unit factor) * theta / zeta_K(2)
with zeta_K the Dedekind zeta function of the real quadratic field; the
translated-octagon case replaces the unit factor by an inclusion-exclusion
sum over window intersections.  Empirical estimates divide exact counts by
the ball volume, and the Z^d Moebius baseline gives 1/zeta(d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .geometry import (Window, intersect_convex, make_pentagon_w1, star_check,
                       transform)
from .qfield import (FieldFraction, QuadInt, Ring, ZSQRT2, ZTAU, enum_primes,
                     lcm)
from .quasicrystal import FamilySpec, PointSample
from .tower import TowerReal

__all__ = [
    "DensityReport",
    "zeta_k",
    "zeta_k_euler",
    "point_density_constant",
    "density_a",
    "density_visible_a",
    "density_visible_a_extended",
    "density_visible_t",
    "density_p",
    "density_visible_p",
    "empirical_density",
    "zd_visible",
]


@dataclass
class DensityReport:
    theta_total: float
    theta_visible: float
    relative_visible_fraction: float
    method: str  # "closed_form", "extended_sum" or "empirical"
    terms: list | None = None

    def as_dict(self) -> dict:
        d = {
            "theta_total": self.theta_total,
            "theta_visible": self.theta_visible,
            "fraction": self.relative_visible_fraction,
            "method": self.method,
        }
        if self.terms is not None:
            d["terms"] = self.terms
        return d


def zeta_k(ring: Ring) -> float:
    """Dedekind zeta at 2: pi^4/(48*sqrt2) over Q(sqrt2), 2*sqrt5*pi^4/375 over Q(tau)."""
    p4 = math.pi ** 4
    if ring is ZSQRT2:
        return p4 / (48.0 * math.sqrt(2.0))
    return 2.0 * math.sqrt(5.0) * p4 / 375.0


def zeta_k_euler(ring: Ring, norm_bound: int) -> float:
    """Truncated Euler product over prime ideals; cross-check oracle for zeta_k."""
    prod = 1.0
    for pi in enum_primes(ring, norm_bound):
        prod *= 1.0 - 1.0 / abs(pi.norm()) ** 2
    return 1.0 / prod


# -- lattice covolume chain ----------------------------------------------------


def _det4(m: list[list[TowerReal]]) -> TowerReal:
    """Exact 4x4 determinant by Laplace expansion along the first row."""
    def det3(r):
        return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))

    total = None
    for j in range(4):
        minor = [[m[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        term = m[0][j] * det3(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def point_density_constant(ring: Ring) -> TowerReal:
    """Exact constant k with theta(family set) = vol(window)/k.

    Computed from the Minkowski-embedding covolume of O_K^2 in R^4 together
    with the physical/internal shear matrices of the identification, rather
    than hard-coded; the sqrt2 case must come out as 4.
    """
    one = TowerReal(ring, 1)
    zero = TowerReal(ring)
    omega = TowerReal(ring, 0, 1)
    conj_omega = TowerReal(ring, ring.trace, -1)
    # basis of {(x, sigma(x)) : x in O_K^2}: coordinates (p1, p2, i1, i2)
    basis = [
        [one, zero, one, zero],
        [omega, zero, conj_omega, zero],
        [zero, one, zero, one],
        [zero, omega, zero, conj_omega],
    ]
    covol = abs(_det4(basis))
    half = Fraction(1, 2)
    if ring is ZSQRT2:
        det_a = TowerReal(ring, 0, half)    # 1/sqrt2
        det_a1 = TowerReal(ring, 0, half)
    else:
        det_a = TowerReal(ring, 0, 0, -half, half)   # sqrt(tau+2)/(2 tau)
        det_a1 = TowerReal(ring, 0, 0, half, 0)      # sqrt(tau+2)/2
    return det_a * det_a1 * covol


_A_CONST = point_density_constant(ZSQRT2)
assert _A_CONST == TowerReal(ZSQRT2, 4), "octagonal covolume chain must give 4"
_T_CONST = point_density_constant(ZTAU)  # 5*(2*tau-1)/4


def density_a(window: Window) -> float:
    """theta(A_W) = vol(W)/4."""
    return float(window.area() / _A_CONST)


def _unit_conj_abs(ring: Ring) -> float:
    u = ring.fundamental_unit
    return abs(float(u.conj()))


def density_visible_a(window: Window) -> DensityReport:
    """theta of visible points, 2*|sigma(lambda)|*theta(A_W)/zeta_K(2);
    requires the window to be star-shaped with -W inside sqrt2*W."""
    if not star_check(window, TowerReal(ZSQRT2, 0, 1)).ok():
        raise ValueError("window outside the simple theorem; "
                         "use density_visible_a_extended")
    theta = density_a(window)
    frac = 2.0 * _unit_conj_abs(ZSQRT2) / zeta_k(ZSQRT2)
    return DensityReport(theta, frac * theta, frac, "closed_form")


def default_extended_m() -> list[FieldFraction]:
    """The worked occlusion core for octagon translates just past the simple
    family: {2, u, u^2, sqrt2, sqrt2 u, sqrt2 u^2, u/sqrt2, u^2/sqrt2}."""
    one = QuadInt(ZSQRT2, 1, 0)
    s2 = QuadInt(ZSQRT2, 0, 1)
    u = ZSQRT2.fundamental_unit
    u2 = u * u
    return [
        FieldFraction(QuadInt(ZSQRT2, 2, 0), one),
        FieldFraction(u, one),
        FieldFraction(u2, one),
        FieldFraction(s2, one),
        FieldFraction(s2 * u, one),
        FieldFraction(s2 * u2, one),
        FieldFraction(u, s2),
        FieldFraction(u2, s2),
    ]


def density_visible_a_extended(window: Window,
                               m_set: list[FieldFraction] | None = None,
                               p_set: list[QuadInt] | None = None) -> DensityReport:
    """Subset sum over M: theta_vis = (4 zeta_K(2) prod_{pi in P}(1 - N(pi)^-2))^-1
    * sum_{M0 subset M} (-1)^|M0| vol(W_M0)/N(Pi_M0)^2,
    with W_M0 = W cut by the sigma(c)-scaled copies and Pi_M0 the lcm of the
    numerators of M0.  All intersection volumes are exact."""
    if m_set is None:
        m_set = default_extended_m()
    if p_set is None:
        p_set = [QuadInt(ZSQRT2, 0, 1)]
    if len(m_set) > 20:
        raise ValueError("subset sum over more than 2^20 terms rejected")
    if not window.contains_origin():
        raise ValueError("window must contain the origin")
    ring = ZSQRT2
    one = QuadInt(ring, 1, 0)
    scaled = []
    for c in m_set:
        s = TowerReal.from_quadint(c.num.conj()) / TowerReal.from_quadint(c.den.conj())
        scaled.append(transform(window, scale=s))

    total = TowerReal(ring)
    terms = []
    for r in range(len(m_set) + 1):
        for subset in combinations(range(len(m_set)), r):
            poly = window
            for j in subset:
                poly = intersect_convex(poly, scaled[j])
                if poly is None:
                    break
            vol = TowerReal(ring) if poly is None else poly.area()
            pi = one
            for j in subset:
                num = m_set[j].num
                if not num.is_unit():
                    pi = lcm(pi, num)
            npi2 = pi.norm() ** 2
            term = vol * Fraction((-1) ** r, npi2)
            total = total + term
            terms.append({
                "subset": [str(float(m_set[j])) for j in subset],
                "vol": float(vol),
                "n_pi_sq": npi2,
            })
    prefactor = 4.0 * zeta_k(ring)
    for p in p_set:
        prefactor *= 1.0 - 1.0 / p.norm() ** 2
    theta_vis = float(total) / prefactor
    theta = density_a(window)
    return DensityReport(theta, theta_vis, theta_vis / theta, "extended_sum", terms)


def c_num(c: FieldFraction) -> QuadInt:
    return c.num


def density_visible_t(window: Window) -> DensityReport:
    """theta of visible T-set points, |sigma(tau)|*theta(T_W)/zeta_K(2);
    requires -W inside 2*tau*W."""
    if not star_check(window, TowerReal(ZTAU, 0, 2)).ok():
        raise ValueError("window outside the T-set theorem hypotheses")
    theta = float(window.area() / _T_CONST)
    frac = _unit_conj_abs(ZTAU) / zeta_k(ZTAU)
    return DensityReport(theta, frac * theta, frac, "closed_form")


def _kappa_class_density(vol: TowerReal) -> TowerReal:
    # each kappa class is an index-5 sublattice slice: vol/(5 * T-chain constant)
    return vol / (_T_CONST * 5)


def density_p() -> float:
    """theta(P_eps) = 8*(1+tau^2)*vol(W1)/(25*(2tau-1)); independent of eps."""
    pen = make_pentagon_w1()
    tau = TowerReal(ZTAU, 0, 1)
    total = TowerReal(ZTAU)
    for scale in (TowerReal(ZTAU, 1), tau, tau, TowerReal(ZTAU, 1)):
        total = total + _kappa_class_density(pen.area() * scale * scale)
    return float(total)


def density_visible_p(spec_or_gamma) -> DensityReport:
    """theta of visible P-set points:
    ((3+tau)*vol(W1) - vol(W1 cut (W1 + tau*eps))) / (3*(tau+2)*zeta_K(2))."""
    if isinstance(spec_or_gamma, FamilySpec):
        spec = spec_or_gamma
    else:
        spec = FamilySpec.penrose(spec_or_gamma)
    ex, ey = spec.epsilon()
    if not (ex * ex + ey * ey < Fraction(1, 100)):
        raise ValueError("the P-set density formula needs |epsilon| < 0.1")
    pen = make_pentagon_w1()
    tau = TowerReal(ZTAU, 0, 1)
    shifted = transform(pen, translate=(tau * ex, tau * ey))
    inter = intersect_convex(pen, shifted)
    vol_inter = TowerReal(ZTAU) if inter is None else inter.area()
    numerator = pen.area() * TowerReal(ZTAU, 3, 1) - vol_inter
    denom = 3.0 * float(TowerReal(ZTAU, 2, 1)) * zeta_k(ZTAU)
    theta_vis = float(numerator) / denom
    theta = density_p()
    return DensityReport(theta, theta_vis, theta_vis / theta, "closed_form")


def empirical_density(sample: PointSample) -> DensityReport:
    """Counts over vol(B_T): the finite-T approximation of both densities."""
    t = float(sample.T)
    ball = math.pi * t * t
    theta = len(sample) / ball
    vis = sample.visible_count() / ball if sample.visible is not None else 0.0
    frac = vis / theta if theta > 0 else 0.0
    return DensityReport(theta, vis, frac, "empirical")


def zd_visible(d: int, T: float) -> tuple[float, float]:
    """Fraction of visible (coprime-coordinate) points of Z^d in B_T,
    and the limit 1/zeta(d)."""
    import mpmath

    if d < 2:
        raise ValueError("d >= 2")
    n = int(math.floor(T))
    if d == 2:
        r = np.arange(-n, n + 1, dtype=np.int64)
        xx, yy = np.meshgrid(r, r, sparse=True)
        inside = xx * xx + yy * yy <= int(T * T)
        g = np.gcd(np.abs(xx), np.abs(yy))
        vis = int(((g == 1) & inside).sum())
        tot = int(inside.sum()) - 1  # drop the origin
    elif d == 3:
        r = np.arange(-n, n + 1, dtype=np.int64)
        vis = 0
        tot = 0
        t2 = int(T * T)
        for z in r:
            xx, yy = np.meshgrid(r, r, sparse=True)
            inside = xx * xx + yy * yy + z * z <= t2
            g = np.gcd(np.gcd(np.abs(xx), np.abs(yy)), abs(int(z)))
            vis += int(((g == 1) & inside).sum())
            tot += int(inside.sum())
        tot -= 1
    else:
        raise ValueError("only d in {2, 3} is supported for direct counting")
    limit = float(1 / mpmath.zeta(d))
    return vis / tot, limit
