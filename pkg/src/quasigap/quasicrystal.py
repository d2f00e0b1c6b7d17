"""Generation and exact visibility classification of A-, T- and P-sets.

A-sets live over Z[zeta_8] with an octagonal (or user) window, T-sets over
Z[zeta_5] with a decagonal window, and P-sets are the de Bruijn unions of
four pentagonal windows indexed by the residue kappa(x) mod 5.  Visibility
is decided two independent ways: the per-family arithmetic predicate, and a
brute-force ray oracle that keeps the closest point in each direction.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import engine
from .cyclo import CYCLO5, CYCLO8, CycloId, CycloPoint
from .geometry import (Window, make_pentagon_w1, penrose_translate, star_check,
                       transform)
from .qfield import FieldFraction, QuadInt, ZSQRT2, ZTAU, enum_primes, gcd, is_coprime
from .tower import TowerReal

__all__ = [
    "FamilySpec",
    "PointSample",
    "generate",
    "visible_predicate",
    "oracle_visible",
    "visible_by_occlusion",
    "count_inclusion_exclusion",
    "standard_occlusion",
    "translated_octagon_occlusion",
    "validate_penrose_translate",
]

_I64 = np.int64


def validate_penrose_translate(gamma: list[Fraction | int | str]) -> bool:
    """True iff all gamma_j are non-integer rationals summing to zero.

    Such translates give windows whose boundaries miss every lattice
    projection, and the resulting P-set is a rhombic Penrose vertex set.
    """
    try:
        g = [Fraction(x) for x in gamma]
    except (ValueError, ZeroDivisionError):
        return False
    if len(g) != 5:
        return False
    if any(x.denominator == 1 for x in g):
        return False
    return sum(g) == 0


@dataclass(frozen=True)
class FamilySpec:
    """Which point family to build, plus its window data."""

    family: str  # "A", "T" or "P"
    window: Window | None = None
    gamma: tuple[Fraction, ...] | None = None

    @staticmethod
    def ammann_beenker(window: Window | None = None) -> FamilySpec:
        from .geometry import make_octagon_ab
        return FamilySpec("A", window=window or make_octagon_ab())

    @staticmethod
    def tuebingen(window: Window | None = None) -> FamilySpec:
        from .geometry import make_decagon_t
        return FamilySpec("T", window=window or make_decagon_t())

    @staticmethod
    def penrose(gamma: list[Fraction | int | str]) -> FamilySpec:
        g = tuple(Fraction(x) for x in gamma)
        if len(g) != 5:
            raise ValueError("gamma must have 5 entries")
        return FamilySpec("P", gamma=g)

    @property
    def cid(self) -> CycloId:
        return CYCLO8 if self.family == "A" else CYCLO5

    def epsilon(self) -> tuple[TowerReal, TowerReal]:
        if self.family != "P":
            raise ValueError("epsilon only applies to P-sets")
        return penrose_translate(list(self.gamma))

    def windows(self) -> dict[int, Window]:
        """Window per kappa class; A/T sets use the single class 0."""
        if self.family in ("A", "T"):
            if self.window is None:
                raise ValueError("A/T spec needs a window")
            return {0: self.window}
        ex, ey = self.epsilon()
        pen = make_pentagon_w1()
        tau = TowerReal(ZTAU, 0, 1)
        return {
            1: transform(pen, translate=(ex, ey), label="w1eps"),
            2: transform(pen, scale=tau, rotate180=True, translate=(ex, ey), label="w2eps"),
            3: transform(pen, scale=tau, translate=(ex, ey), label="w3eps"),
            4: transform(pen, rotate180=True, translate=(ex, ey), label="w4eps"),
        }

    def check_predicate_preconditions(self) -> None:
        """The visibility predicates are theorems with hypotheses; enforce them."""
        if self.family == "A":
            c = TowerReal(ZSQRT2, 0, 1)  # sqrt2
            if not star_check(self.window, c).ok():
                raise ValueError("A-visibility needs a window with -W inside sqrt2*W")
        elif self.family == "T":
            c = TowerReal(ZTAU, 0, 2)  # 2*tau
            if not star_check(self.window, c).ok():
                raise ValueError("T-visibility needs a window with -W inside 2*tau*W")
        else:
            ex, ey = self.epsilon()
            if not (ex * ex + ey * ey < Fraction(1, 100)):
                raise ValueError("P-visibility needs |epsilon| < 0.1")

    def describe(self) -> str:
        if self.family == "P":
            return "P[" + ",".join(str(g) for g in self.gamma) + "]"
        return f"{self.family}[{self.window.label or 'window'}]"


class PointSample:
    """All family points with |x| <= T, as coefficient arrays.

    coeffs[:, 0..3] are (a, b, c, d) with x1 = a + b*omega, x2 = c + d*omega,
    rows sorted lexicographically.  visible is the predicate bitmask;
    boundary_hits counts internal images that landed exactly on a window edge.
    """

    def __init__(self, spec: FamilySpec, T: Fraction, coeffs: np.ndarray,
                 visible: np.ndarray | None, boundary_hits: int) -> None:
        self.spec = spec
        self.T = T
        self.coeffs = coeffs
        self.visible = visible
        self.boundary_hits = boundary_hits

    def __len__(self) -> int:
        return len(self.coeffs)

    def visible_count(self) -> int:
        return int(self.visible.sum())

    def point(self, i: int) -> CycloPoint:
        a, b, c, d = (int(v) for v in self.coeffs[i])
        return CycloPoint.from_coeffs(self.spec.cid, a, b, c, d)

    def iter_points(self) -> Iterator[CycloPoint]:
        for i in range(len(self)):
            yield self.point(i)

    def physical_floats(self) -> tuple[np.ndarray, np.ndarray]:
        cid = self.spec.cid
        w = cid.ring.omega_float()
        a = self.coeffs[:, 0].astype(np.float64)
        b = self.coeffs[:, 1].astype(np.float64)
        c = self.coeffs[:, 2].astype(np.float64)
        d = self.coeffs[:, 3].astype(np.float64)
        x1 = a + b * w
        x2 = c + d * w
        ang = 2.0 * math.pi / cid.n
        return x1 + x2 * math.cos(ang), x2 * math.sin(ang)

    def kappa_array(self) -> np.ndarray:
        a, b, c, d = (self.coeffs[:, i] for i in range(4))
        return (a + 3 * b + c + 3 * d) % 5

    def to_csv(self, fh) -> None:
        re, im = self.physical_floats()
        fh.write("a,b,c,d,re,im,visible\n")
        vis = self.visible if self.visible is not None else np.zeros(len(self), dtype=bool)
        for i in range(len(self)):
            a, b, c, d = (int(v) for v in self.coeffs[i])
            fh.write(f"{a},{b},{c},{d},{re[i]:.17g},{im[i]:.17g},{int(vis[i])}\n")


def _t_squared(T) -> tuple[int, int]:
    tf = Fraction(T)
    if tf <= 0:
        raise ValueError("radius must be positive")
    sq = tf * tf
    return sq.numerator, sq.denominator


def _unit_inverse_map(ring) -> tuple[int, int]:
    # fundamental unit inverse: lambda^-1 = -1 + sqrt2, tau^-1 = -1 + tau
    return (-1, 1)


def _visible_chunk(spec: FamilySpec, coeffs: np.ndarray,
                   programs: dict[int, engine.MembershipProgram]) -> np.ndarray:
    cid = spec.cid
    ring = cid.ring
    a, b, c, d = (coeffs[:, i] for i in range(4))
    keep = np.ones(len(coeffs), dtype=bool)
    divisors = (1,) if spec.family in ("A", "T") else (1, 2)
    for power in divisors:
        e, f = _unit_inverse_map(ring)
        qa, qb = a, b
        qc, qd = c, d
        for _ in range(power):
            qa, qb = engine.mul_by(ring, qa, qb, e, f)
            qc, qd = engine.mul_by(ring, qc, qd, e, f)
        s1u, s1v = engine.conj_pairs(ring, qa, qb)
        s2u, s2v = engine.conj_pairs(ring, qc, qd)
        if spec.family in ("A", "T"):
            prog = programs[0]
            cls = prog.classify(s1u, s1v, s2u, s2v)
            keep &= ~prog.admits(cls)
        else:
            kap = (qa + 3 * qb + qc + 3 * qd) % 5
            inside = np.zeros(len(coeffs), dtype=bool)
            for k in (1, 2, 3, 4):
                sel = np.flatnonzero(kap == k)
                if len(sel) == 0:
                    continue
                prog = programs[k]
                cls = prog.classify(s1u[sel], s1v[sel], s2u[sel], s2v[sel])
                inside[sel] = prog.admits(cls)
            keep &= ~inside
    live = np.flatnonzero(keep)
    out = np.zeros(len(coeffs), dtype=bool)
    if len(live):
        ok = engine.gcd_is_unit(ring, a[live], b[live], c[live], d[live])
        out[live[ok]] = True
    return out


def _visible_mask(spec: FamilySpec, coeffs: np.ndarray,
                  programs: dict[int, engine.MembershipProgram],
                  threads: int | None = None,
                  chunk: int = 1_000_000) -> np.ndarray:
    """Arithmetic visibility predicate, vectorised over the sample."""
    n_pts = len(coeffs)
    spans = [(lo, min(lo + chunk, n_pts)) for lo in range(0, n_pts, chunk)]
    out = np.zeros(n_pts, dtype=bool)
    if threads and threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(
                lambda se: _visible_chunk(spec, coeffs[se[0]:se[1]], programs), spans)
            for (lo, hi), seg in zip(spans, results):
                out[lo:hi] = seg
    else:
        for lo, hi in spans:
            out[lo:hi] = _visible_chunk(spec, coeffs[lo:hi], programs)
    return out


def _filter_block(spec: FamilySpec, block, programs, tnum: int, tden: int):
    a, b, c, d = block
    cid = spec.cid
    mask = engine.radius_mask(cid, a, b, c, d, tnum, tden)
    a, b, c, d = a[mask], b[mask], c[mask], d[mask]
    if len(a) == 0:
        return None, 0
    s1u, s1v = engine.conj_pairs(cid.ring, a, b)
    s2u, s2v = engine.conj_pairs(cid.ring, c, d)
    boundary = 0
    if spec.family in ("A", "T"):
        prog = programs[0]
        cls = prog.classify(s1u, s1v, s2u, s2v)
        boundary = int((cls == 0).sum())
        keep = prog.admits(cls)
    else:
        kap = (a + 3 * b + c + 3 * d) % 5
        keep = np.zeros(len(a), dtype=bool)
        for k in (1, 2, 3, 4):
            sel = np.flatnonzero(kap == k)
            if len(sel) == 0:
                continue
            prog = programs[k]
            cls = prog.classify(s1u[sel], s1v[sel], s2u[sel], s2v[sel])
            boundary += int((cls == 0).sum())
            keep[sel[prog.admits(cls)]] = True
    if not keep.any():
        return None, boundary
    return np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1), boundary


def generate(spec: FamilySpec, T, threads: int | None = None,
             with_visibility: bool = True, block_x1: int = 3072) -> PointSample:
    """All points of the family with |x| <= T (closed ball), in deterministic
    lexicographic coefficient order, plus exact visibility flags."""
    tnum, tden = _t_squared(T)
    tf = float(Fraction(T))
    engine._assert_radius(tf)
    cid = spec.cid
    windows = spec.windows()
    programs = {k: engine.build_program(w, cid) for k, w in windows.items()}
    r_int = max(math.sqrt(float(w.outer_radius_sq())) for w in windows.values()) + 1e-9

    blocks = engine.enumerate_family(cid, tf, r_int, block_x1=block_x1)
    kept = []
    boundary_hits = 0
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = []
            for blk in blocks:
                futures.append(pool.submit(_filter_block, spec, blk, programs, tnum, tden))
                if len(futures) >= threads * 4:
                    arr, bh = futures.pop(0).result()
                    boundary_hits += bh
                    if arr is not None:
                        kept.append(arr)
            for fut in futures:
                arr, bh = fut.result()
                boundary_hits += bh
                if arr is not None:
                    kept.append(arr)
    else:
        for blk in blocks:
            arr, bh = _filter_block(spec, blk, programs, tnum, tden)
            boundary_hits += bh
            if arr is not None:
                kept.append(arr)

    if kept:
        coeffs = np.concatenate(kept, axis=0)
        order = np.lexsort((coeffs[:, 3], coeffs[:, 2], coeffs[:, 1], coeffs[:, 0]))
        coeffs = coeffs[order]
    else:
        coeffs = np.empty((0, 4), dtype=_I64)

    visible = None
    if with_visibility:
        spec.check_predicate_preconditions()
        visible = _visible_mask(spec, coeffs, programs, threads=threads)
    return PointSample(spec, Fraction(T), coeffs, visible, boundary_hits)


# -- scalar predicate and ray oracle -----------------------------------------


def _in_family(spec: FamilySpec, x: CycloPoint,
               windows: dict[int, Window] | None = None) -> bool:
    windows = windows or spec.windows()
    if spec.family in ("A", "T"):
        return windows[0].admits(x.embed_internal())
    k = x.kappa()
    if k == 0:
        return False
    return windows[k].admits(x.embed_internal())


def visible_predicate(spec: FamilySpec, x: CycloPoint) -> bool:
    """Exact single-point visibility via the family's arithmetic criterion."""
    spec.check_predicate_preconditions()
    windows = spec.windows()
    if not _in_family(spec, x, windows):
        raise ValueError("point is not in the family")
    if x.is_zero():
        return False
    if not is_coprime(x.x1, x.x2):
        return False
    if _in_family(spec, x.unit_divide(1), windows):
        return False
    if spec.family == "P" and _in_family(spec, x.unit_divide(2), windows):
        return False
    return True


def oracle_visible(sample: PointSample) -> np.ndarray:
    """Brute-force visibility: group points by exact ray through the origin,
    keep the smallest-modulus point per ray.

    Two points lie on the same line through 0 iff their primitive parts
    x/gcd(x1,x2) agree up to a unit (of either sign).  The key normalises
    the primitive part by unit powers into |key|^2 in [1, u^2), fixes its
    sign canonically, and carries the direction of x along that line, so
    opposite rays stay distinct.
    """
    cid = sample.spec.cid
    ring = cid.ring
    u = ring.fundamental_unit
    u2 = u * u
    one = QuadInt(ring, 1, 0)
    best: dict[tuple, tuple[QuadInt, int]] = {}
    for i in range(len(sample)):
        x = sample.point(i)
        if x.is_zero():
            continue
        g = gcd(x.x1, x.x2)
        xp = x.try_divide(g)
        assert xp is not None
        m2 = xp.modulus_sq_quad()
        while (m2 - one).sign() < 0:
            xp = xp.scale(u)
            m2 = xp.modulus_sq_quad()
        while (m2 - u2).sign() >= 0:
            xp = xp.scale(u.inverse_unit())
            m2 = xp.modulus_sq_quad()
        lead = xp.x1.sign() or xp.x2.sign()
        if lead < 0:
            xp = -xp
        # x = t*xp for real t in Q(omega); its sign separates the two rays
        if not xp.x1.is_zero():
            direction = x.x1.sign() * xp.x1.sign()
        else:
            direction = x.x2.sign() * xp.x2.sign()
        key = xp.coeffs() + (direction,)
        m2x = x.modulus_sq_quad()
        cur = best.get(key)
        if cur is None or (m2x - cur[0]).sign() < 0:
            best[key] = (m2x, i)
    out = np.zeros(len(sample), dtype=bool)
    for _, i in best.values():
        out[i] = True
    return out


# -- inclusion-exclusion counting ---------------------------------------------


def standard_occlusion(spec: FamilySpec, T) -> list[FieldFraction]:
    """The finite part of the family's occlusion set that can act within B_T.

    A quotient pi can occlude a point of B_T only if |N(pi)| <= T * r_int,
    so truncating the prime list there loses nothing.
    """
    cid = spec.cid
    ring = cid.ring
    windows = spec.windows()
    r_int = max(math.sqrt(float(w.outer_radius_sq())) for w in windows.values())
    bound = int(math.ceil(float(Fraction(T)) * r_int)) + 1
    primes = enum_primes(ring, bound)
    one = QuadInt(ring, 1, 0)
    u = ring.fundamental_unit
    if spec.family == "A":
        quots = [FieldFraction(u, one)]
        quots += [FieldFraction(p, one) for p in primes]
        return quots
    if spec.family == "T":
        return [FieldFraction(u, one)] + [FieldFraction(p, one) for p in primes]
    # P-sets: tau, tau^2, and all small primes except the one above 5
    five = QuadInt(ring, 3, -1)
    quots = [FieldFraction(u, one), FieldFraction(u * u, one)]
    quots += [FieldFraction(p, one) for p in primes if p != five]
    return quots


def _quotient_membership(spec: FamilySpec, coeffs: np.ndarray,
                         programs: dict[int, engine.MembershipProgram],
                         c: FieldFraction,
                         pre_idx: np.ndarray | None = None) -> np.ndarray:
    """Mask (over the full sample) of points x with x/c in the punctured family.

    pre_idx restricts the test to candidate rows (callers may prefilter by
    norm divisibility); rows outside pre_idx report False.
    """
    ring = spec.cid.ring
    if pre_idx is None:
        pre_idx = np.arange(len(coeffs))
    out = np.zeros(len(coeffs), dtype=bool)
    if len(pre_idx) == 0:
        return out
    sub = coeffs[pre_idx]
    a, b = sub[:, 0], sub[:, 1]
    cc, dd = sub[:, 2], sub[:, 3]
    den, num = c.den, c.num
    ya, yb = engine.mul_by(ring, a, b, den.a, den.b)
    yc, yd = engine.mul_by(ring, cc, dd, den.a, den.b)
    nn = num.norm()
    cu, cv = num.conj().a, num.conj().b
    pa, pb = engine.mul_by(ring, ya, yb, cu, cv)
    pc, pd = engine.mul_by(ring, yc, yd, cu, cv)
    ok = (pa % nn == 0) & (pb % nn == 0) & (pc % nn == 0) & (pd % nn == 0)
    if not ok.any():
        return out
    qa, qb = pa[ok] // nn, pb[ok] // nn
    qc, qd = pc[ok] // nn, pd[ok] // nn
    nonzero = (qa != 0) | (qb != 0) | (qc != 0) | (qd != 0)
    s1u, s1v = engine.conj_pairs(ring, qa, qb)
    s2u, s2v = engine.conj_pairs(ring, qc, qd)
    member = np.zeros(int(ok.sum()), dtype=bool)
    if spec.family in ("A", "T"):
        prog = programs[0]
        member = prog.admits(prog.classify(s1u, s1v, s2u, s2v))
    else:
        kap = (qa + 3 * qb + qc + 3 * qd) % 5
        for k in (1, 2, 3, 4):
            sel = np.flatnonzero(kap == k)
            if len(sel) == 0:
                continue
            prog = programs[k]
            cls = prog.classify(s1u[sel], s1v[sel], s2u[sel], s2v[sel])
            member[sel] = prog.admits(cls)
    out[pre_idx[np.flatnonzero(ok)[member & nonzero]]] = True
    return out


def visible_by_occlusion(spec: FamilySpec, sample: PointSample,
                         occlusion: list[FieldFraction]) -> np.ndarray:
    """Visibility from first principles: x is visible iff x != 0 and
    x/c stays outside the family for every occlusion quotient c.

    Valid whenever `occlusion` is a genuine occlusion set for the family
    (truncated to quotients that can act inside B_T); works for windows
    outside the simple predicate's hypotheses, e.g. large translates.
    """
    coeffs = sample.coeffs
    ring = spec.cid.ring
    windows = spec.windows()
    programs = {k: engine.build_program(w, spec.cid) for k, w in windows.items()}
    t, n = ring.trace, ring.norm_omega
    a, b, c_, d = (coeffs[:, i] for i in range(4))
    n1 = np.abs(a * a + t * a * b + n * b * b)
    n2 = np.abs(c_ * c_ + t * c_ * d + n * d * d)
    g = np.gcd(n1, n2)
    occluded = np.zeros(len(coeffs), dtype=bool)
    ordered = sorted(occlusion, key=lambda q: abs(q.num.norm()))
    for quot in ordered:
        assert float(quot) > 1.0, "occlusion quotients must exceed 1"
        nn = abs(quot.num.norm())
        if nn == 1:
            idx = np.flatnonzero(~occluded)
        else:
            idx = np.flatnonzero(~occluded & (g % nn == 0))
        if len(idx) == 0:
            continue
        occluded |= _quotient_membership(spec, coeffs, programs, quot, idx)
    nonzero = (coeffs != 0).any(axis=1)
    return nonzero & ~occluded


def translated_octagon_occlusion(spec: FamilySpec, T) -> list[FieldFraction]:
    """Occlusion set for A-windows like octagon + (457 - 323*sqrt2): the
    small-conjugate prime sqrt2 is exempted and replaced by the finite list
    M = {2, u, u^2, sqrt2, sqrt2*u, sqrt2*u^2, u/sqrt2, u^2/sqrt2}."""
    ring = spec.cid.ring
    if ring is not ZSQRT2:
        raise ValueError("only A-family windows supported")
    one = QuadInt(ring, 1, 0)
    sqrt2 = QuadInt(ring, 0, 1)
    u = ring.fundamental_unit
    u2 = u * u
    m_set = [
        FieldFraction(QuadInt(ring, 2, 0), one),
        FieldFraction(u, one),
        FieldFraction(u2, one),
        FieldFraction(sqrt2, one),
        FieldFraction(sqrt2 * u, one),
        FieldFraction(sqrt2 * u2, one),
        FieldFraction(u, sqrt2),
        FieldFraction(u2, sqrt2),
    ]
    windows = spec.windows()
    r_int = max(math.sqrt(float(w.outer_radius_sq())) for w in windows.values())
    bound = int(math.ceil(float(Fraction(T)) * r_int)) + 1
    primes = [p for p in enum_primes(ring, bound) if p != sqrt2]
    return m_set + [FieldFraction(p, one) for p in primes]


def count_inclusion_exclusion(spec: FamilySpec, T,
                              occlusion: list[FieldFraction] | None = None,
                              sample: PointSample | None = None) -> int:
    """#(visible points in B_T) via the alternating sum over finite subsets
    of the occlusion set; exact, for cross-validation against direct counts."""
    if sample is None:
        sample = generate(spec, T, with_visibility=False)
    if occlusion is None:
        occlusion = standard_occlusion(spec, T)
    windows = spec.windows()
    programs = {k: engine.build_program(w, spec.cid) for k, w in windows.items()}
    coeffs = sample.coeffs
    nonzero = (coeffs != 0).any(axis=1)
    masks = [_quotient_membership(spec, coeffs, programs, c) for c in occlusion]

    total = 0

    def dfs(start: int, mask: np.ndarray, size: int) -> None:
        nonlocal total
        cnt = int(mask.sum())
        if cnt == 0:
            return
        total += cnt if size % 2 == 0 else -cnt
        for j in range(start, len(masks)):
            dfs(j + 1, mask & masks[j], size + 1)

    dfs(0, nonzero, 0)
    return total
