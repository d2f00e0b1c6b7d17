"""Points of Z[zeta_8] and Z[zeta_5] as pairs over the real quadratic subring.

A point x = x1 + x2*zeta is stored by its two QuadInt coordinates.  Both the
physical embedding (x as a complex number) and the internal embedding (the
Galois conjugate sigma(x1) + sigma(x2)*zeta^e) have coordinates that live in
the exact tower Q(omega)[rho], so membership and collinearity questions never
touch floating point.
"""

from __future__ import annotations

from fractions import Fraction

from .qfield import Ring, ZSQRT2, ZTAU, QuadInt
from .tower import TowerReal

__all__ = ["CycloId", "CYCLO8", "CYCLO5", "CycloPoint", "zeta_power", "from_zeta_coeffs"]

_HALF = Fraction(1, 2)


class CycloId:
    """n = 8 (ring Z[sqrt2], sigma: zeta -> zeta^3) or n = 5 (Z[tau], zeta -> zeta^2)."""

    __slots__ = ("n", "sigma_exponent", "ring")

    def __init__(self, n: int) -> None:
        if n not in (8, 5):
            raise ValueError("only the 8th and 5th cyclotomic settings are supported")
        self.n = n
        self.sigma_exponent = 3 if n == 8 else 2
        self.ring: Ring = ZSQRT2 if n == 8 else ZTAU

    def __repr__(self) -> str:
        return f"CycloId(n={self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycloId) and self.n == other.n

    def __hash__(self) -> int:
        return hash(("CycloId", self.n))


CYCLO8 = CycloId(8)
CYCLO5 = CycloId(5)


class CycloPoint:
    """x = x1 + x2*zeta with x1, x2 in the real quadratic subring."""

    __slots__ = ("id", "x1", "x2")

    def __init__(self, cid: CycloId, x1: QuadInt, x2: QuadInt) -> None:
        if x1.ring is not cid.ring or x2.ring is not cid.ring:
            raise ValueError("coordinate ring does not match cyclotomic id")
        self.id = cid
        self.x1 = x1
        self.x2 = x2

    @classmethod
    def from_coeffs(cls, cid: CycloId, a: int, b: int, c: int, d: int) -> CycloPoint:
        return cls(cid, QuadInt(cid.ring, a, b), QuadInt(cid.ring, c, d))

    def coeffs(self) -> tuple[int, int, int, int]:
        return self.x1.a, self.x1.b, self.x2.a, self.x2.b

    def __repr__(self) -> str:
        return f"CycloPoint(n={self.id.n}, {self.x1!r} + {self.x2!r}*zeta)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycloPoint):
            return NotImplemented
        return self.id == other.id and self.x1 == other.x1 and self.x2 == other.x2

    def __hash__(self) -> int:
        return hash((self.id.n, self.x1, self.x2))

    def __add__(self, other: CycloPoint) -> CycloPoint:
        if self.id != other.id:
            raise ValueError("mixed cyclotomic ids")
        return CycloPoint(self.id, self.x1 + other.x1, self.x2 + other.x2)

    def __neg__(self) -> CycloPoint:
        return CycloPoint(self.id, -self.x1, -self.x2)

    def __sub__(self, other: CycloPoint) -> CycloPoint:
        return self + (-other)

    def scale(self, k: QuadInt | int) -> CycloPoint:
        return CycloPoint(self.id, self.x1 * k, self.x2 * k)

    def mul_zeta(self) -> CycloPoint:
        """Multiply by zeta (an exact rotation of the physical plane)."""
        if self.id.n == 8:
            # zeta^2 = sqrt2*zeta - 1
            omega = QuadInt(ZSQRT2, 0, 1)
            return CycloPoint(self.id, -self.x2, self.x1 + omega * self.x2)
        # zeta^2 = (tau-1)*zeta - 1
        tm1 = QuadInt(ZTAU, -1, 1)
        return CycloPoint(self.id, -self.x2, self.x1 + tm1 * self.x2)

    def is_zero(self) -> bool:
        return self.x1.is_zero() and self.x2.is_zero()

    # -- embeddings ------------------------------------------------------

    def embed_physical(self) -> tuple[TowerReal, TowerReal]:
        """Coordinates of x in the physical plane (zeta = e^{2 pi i/n})."""
        ring = self.id.ring
        x1 = TowerReal.from_quadint(self.x1)
        x2 = TowerReal.from_quadint(self.x2)
        if self.id.n == 8:
            # zeta = (1+i)/sqrt2, so Re = x1 + x2/sqrt2 and Im = x2/sqrt2
            half_omega = TowerReal(ring, 0, _HALF)
            return x1 + x2 * half_omega, x2 * half_omega
        # cos 72 = (tau-1)/2, sin 72 = rho/2
        cos72 = TowerReal(ring, -_HALF, _HALF)
        sin72 = TowerReal(ring, 0, 0, _HALF, 0)
        return x1 + x2 * cos72, x2 * sin72

    def embed_internal(self) -> tuple[TowerReal, TowerReal]:
        """Coordinates of sigma(x) = sigma(x1) + sigma(x2)*zeta^sigma_exponent."""
        ring = self.id.ring
        s1 = TowerReal.from_quadint(self.x1.conj())
        s2 = TowerReal.from_quadint(self.x2.conj())
        if self.id.n == 8:
            # zeta^3 = (-1+i)/sqrt2
            half_omega = TowerReal(ring, 0, _HALF)
            return s1 - s2 * half_omega, s2 * half_omega
        # zeta^2: cos 144 = -tau/2, sin 144 = (tau-1)*rho/2
        cos144 = TowerReal(ring, 0, -_HALF)
        sin144 = TowerReal(ring, 0, 0, -_HALF, _HALF)
        return s1 + s2 * cos144, s2 * sin144

    def physical_floats(self) -> tuple[float, float]:
        re, im = self.embed_physical()
        return float(re), float(im)

    # -- exact scalar data -------------------------------------------------

    def kappa(self) -> int:
        """de Bruijn index: the ring map Z[zeta_5] -> Z/5Z with kappa(zeta) = 1.

        kappa(tau) = 3, so x1 = a + b*tau contributes a + 3b.
        """
        if self.id.n != 5:
            raise ValueError("kappa is defined for n = 5 only")
        return (self.x1.a + 3 * self.x1.b + self.x2.a + 3 * self.x2.b) % 5

    def modulus_sq(self) -> TowerReal:
        """Exact |x|^2; lies in Q(omega) (no rho part)."""
        mu = QuadInt(ZSQRT2, 0, 1) if self.id.n == 8 else QuadInt(ZTAU, -1, 1)
        m = self.x1 * self.x1 + mu * self.x1 * self.x2 + self.x2 * self.x2
        return TowerReal.from_quadint(m)

    def modulus_sq_quad(self) -> QuadInt:
        mu = QuadInt(ZSQRT2, 0, 1) if self.id.n == 8 else QuadInt(ZTAU, -1, 1)
        return self.x1 * self.x1 + mu * self.x1 * self.x2 + self.x2 * self.x2

    def cross_quad(self, other: CycloPoint) -> QuadInt:
        """x1*y2 - x2*y1, the exact cross determinant in lattice coordinates."""
        if self.id != other.id:
            raise ValueError("mixed cyclotomic ids")
        return self.x1 * other.x2 - self.x2 * other.x1

    def cross_area(self, other: CycloPoint) -> TowerReal:
        """Exact area of the triangle (0, x, y) in the physical plane.

        Equals |x1*y2 - x2*y1|/(2*sqrt2) for n = 8 and
        sqrt(tau+2)/4 * |x1*y2 - x2*y1| for n = 5.
        """
        w = abs(self.cross_quad(other))
        if self.id.n == 8:
            # w/(2*sqrt2) = w*sqrt2/4
            return TowerReal.from_quadint(w) * TowerReal(ZSQRT2, 0, Fraction(1, 4))
        return TowerReal.from_quadint(w) * TowerReal(ZTAU, 0, 0, Fraction(1, 4), 0)

    def unit_divide(self, k: int) -> CycloPoint:
        """Divide by (fundamental unit)^k; exact since units are invertible."""
        u = self.id.ring.fundamental_unit ** (-k)
        return CycloPoint(self.id, self.x1 * u, self.x2 * u)

    def try_divide(self, d: QuadInt) -> CycloPoint | None:
        """x/d when both coordinates are divisible in the subring, else None."""
        if d.is_zero():
            raise ZeroDivisionError
        y1 = d.try_divide_into(self.x1)
        if y1 is None:
            return None
        y2 = d.try_divide_into(self.x2)
        if y2 is None:
            return None
        return CycloPoint(self.id, y1, y2)


def zeta_power(cid: CycloId, j: int) -> CycloPoint:
    """zeta^j as a CycloPoint (reduced to the Z[omega] + Z[omega]*zeta basis)."""
    j %= cid.n
    p = CycloPoint.from_coeffs(cid, 1, 0, 0, 0)
    for _ in range(j):
        p = p.mul_zeta()
    return p


def from_zeta_coeffs(cid: CycloId, coeffs: list[QuadInt | int]) -> CycloPoint:
    """sum coeffs[j] * zeta^j."""
    total = CycloPoint.from_coeffs(cid, 0, 0, 0, 0)
    for j, c in enumerate(coeffs):
        total = total + zeta_power(cid, j).scale(c)
    return total
