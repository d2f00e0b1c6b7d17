"""Exact real numbers of the form (p + q*omega) + (r + s*omega)*rho.

p, q, r, s are rationals; omega is sqrt(2) or tau; rho is 1 or sqrt(tau+2)
(the latter only over Z[tau]).  The basis {1, omega, rho, omega*rho} is
linearly independent over Q, so a value is zero iff all four coefficients
vanish, and sign() is always exact.

These numbers carry every coordinate this library needs: window vertices,
embeddings of cyclotomic integers, areas, and the sup-triangle functionals.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .qfield import Ring, ZSQRT2, ZTAU, QuadInt

__all__ = ["TowerReal", "ExactArea"]

_F0 = Fraction(0)
_F1 = Fraction(1)

RationalLike = int | Fraction


def _sign_pair(p: Fraction, q: Fraction, m: int) -> int:
    """Exact sign of p + q*sqrt(m), m in {2, 5}."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    sp, sq = (1 if p > 0 else -1), (1 if q > 0 else -1)
    if sp == sq:
        return sp
    d = p * p - m * q * q
    s = (d > 0) - (d < 0)
    return s if sp > 0 else -s


def _sign_quad(p: Fraction, q: Fraction, ring: Ring) -> int:
    """Exact sign of p + q*omega."""
    if ring is ZSQRT2:
        return _sign_pair(p, q, 2)
    return _sign_pair(2 * p + q, q, 5)


class TowerReal:
    """Immutable exact real (p + q*omega) + (r + s*omega)*rho."""

    __slots__ = ("ring", "p", "q", "r", "s")

    def __init__(self, ring: Ring, p: RationalLike = 0, q: RationalLike = 0,
                 r: RationalLike = 0, s: RationalLike = 0) -> None:
        if (r or s) and ring is not ZTAU:
            raise ValueError("rho part requires the Z[tau] ring")
        self.ring = ring
        self.p = Fraction(p)
        self.q = Fraction(q)
        self.r = Fraction(r)
        self.s = Fraction(s)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_quadint(cls, x: QuadInt) -> TowerReal:
        return cls(x.ring, x.a, x.b)

    @classmethod
    def rational(cls, ring: Ring, v: RationalLike) -> TowerReal:
        return cls(ring, v)

    @classmethod
    def omega(cls, ring: Ring) -> TowerReal:
        return cls(ring, 0, 1)

    @classmethod
    def rho(cls, ring: Ring = ZTAU) -> TowerReal:
        return cls(ring, 0, 0, 1, 0)

    def __repr__(self) -> str:
        return f"TowerReal({self.ring.name}; {self.p}, {self.q}, {self.r}, {self.s})"

    # -- ring structure -----------------------------------------------

    def _check(self, other: TowerReal) -> None:
        if self.ring is not other.ring:
            raise ValueError("mixed-ring tower arithmetic")

    def _coerce(self, other: TowerReal | QuadInt | RationalLike) -> TowerReal:
        if isinstance(other, TowerReal):
            self._check(other)
            return other
        if isinstance(other, QuadInt):
            return TowerReal.from_quadint(other)
        return TowerReal(self.ring, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (TowerReal, QuadInt, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return (self.p, self.q, self.r, self.s) == (o.p, o.q, o.r, o.s)

    def __hash__(self) -> int:
        return hash((self.ring.name, self.p, self.q, self.r, self.s))

    def __add__(self, other: TowerReal | QuadInt | RationalLike) -> TowerReal:
        o = self._coerce(other)
        return TowerReal(self.ring, self.p + o.p, self.q + o.q,
                         self.r + o.r, self.s + o.s)

    __radd__ = __add__

    def __neg__(self) -> TowerReal:
        return TowerReal(self.ring, -self.p, -self.q, -self.r, -self.s)

    def __sub__(self, other: TowerReal | QuadInt | RationalLike) -> TowerReal:
        return self + (-self._coerce(other))

    def __rsub__(self, other: TowerReal | QuadInt | RationalLike) -> TowerReal:
        return (-self) + other

    def _mul_quad(self, ap: Fraction, aq: Fraction, bp: Fraction, bq: Fraction,
                  ) -> tuple[Fraction, Fraction]:
        # (ap + aq*omega)(bp + bq*omega) with omega^2 = t*omega - n
        t, n = self.ring.trace, self.ring.norm_omega
        qq = aq * bq
        return ap * bp - n * qq, ap * bq + aq * bp + t * qq

    def __mul__(self, other: TowerReal | QuadInt | RationalLike) -> TowerReal:
        o = self._coerce(other)
        # (A + B*rho)(C + D*rho) = AC + BD*rho^2 + (AD + BC)*rho
        ac = self._mul_quad(self.p, self.q, o.p, o.q)
        ad = self._mul_quad(self.p, self.q, o.r, o.s)
        bc = self._mul_quad(self.r, self.s, o.p, o.q)
        bd = self._mul_quad(self.r, self.s, o.r, o.s)
        if bd == (_F0, _F0):
            rho2 = (_F0, _F0)
        else:
            # rho^2 = tau + 2
            rho2 = self._mul_quad(bd[0], bd[1], Fraction(2), Fraction(1))
        return TowerReal(self.ring,
                         ac[0] + rho2[0], ac[1] + rho2[1],
                         ad[0] + bc[0], ad[1] + bc[1])

    __rmul__ = __mul__

    def _quad_inverse(self, p: Fraction, q: Fraction) -> tuple[Fraction, Fraction]:
        # 1/(p + q*omega) = (p + t*q - q*omega)/N
        t, n = self.ring.trace, self.ring.norm_omega
        nrm = p * p + t * p * q + n * q * q
        if nrm == 0:
            raise ZeroDivisionError
        return (p + t * q) / nrm, -q / nrm

    def inverse(self) -> TowerReal:
        if self.r == 0 and self.s == 0:
            ip, iq = self._quad_inverse(self.p, self.q)
            return TowerReal(self.ring, ip, iq)
        # 1/(A + B*rho) = (A - B*rho)/(A^2 - B^2*rho^2)
        a2 = self._mul_quad(self.p, self.q, self.p, self.q)
        b2 = self._mul_quad(self.r, self.s, self.r, self.s)
        b2r = self._mul_quad(b2[0], b2[1], Fraction(2), Fraction(1))
        dp, dq = a2[0] - b2r[0], a2[1] - b2r[1]
        ip, iq = self._quad_inverse(dp, dq)
        num = TowerReal(self.ring, self.p, self.q, -self.r, -self.s)
        return num * TowerReal(self.ring, ip, iq)

    def __truediv__(self, other: TowerReal | QuadInt | RationalLike) -> TowerReal:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: TowerReal | QuadInt | RationalLike) -> TowerReal:
        return self._coerce(other) * self.inverse()

    # -- order and conversion -------------------------------------------

    def is_zero(self) -> bool:
        return not (self.p or self.q or self.r or self.s)

    def sign(self) -> int:
        """Exact sign; rho is irrational over Q(omega), so the case split
        on the signs of the two Q(omega) parts is decisive."""
        alpha_zero = not (self.p or self.q)
        beta_zero = not (self.r or self.s)
        if beta_zero:
            return _sign_quad(self.p, self.q, self.ring)
        if alpha_zero:
            return _sign_quad(self.r, self.s, self.ring)
        sa = _sign_quad(self.p, self.q, self.ring)
        sb = _sign_quad(self.r, self.s, self.ring)
        if sa == sb:
            return sa
        # compare alpha^2 against beta^2 * (tau+2)
        a2 = self._mul_quad(self.p, self.q, self.p, self.q)
        b2 = self._mul_quad(self.r, self.s, self.r, self.s)
        b2r = self._mul_quad(b2[0], b2[1], Fraction(2), Fraction(1))
        d = _sign_quad(a2[0] - b2r[0], a2[1] - b2r[1], self.ring)
        assert d != 0, "tau+2 is not a square in Q(tau)"
        return d if sa > 0 else -d

    def __lt__(self, other: TowerReal | QuadInt | RationalLike) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: TowerReal | QuadInt | RationalLike) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: TowerReal | QuadInt | RationalLike) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: TowerReal | QuadInt | RationalLike) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> TowerReal:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        w = self.ring.omega_float()
        rho = math.sqrt((5.0 + math.sqrt(5.0)) / 2.0) if (self.r or self.s) else 0.0
        return float(self.p) + float(self.q) * w + (float(self.r) + float(self.s) * w) * rho

    def coeff_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.p, self.q, self.r, self.s


# Areas produced by the geometry operations are plain TowerReal values,
# guaranteed non-negative by construction.
ExactArea = TowerReal
