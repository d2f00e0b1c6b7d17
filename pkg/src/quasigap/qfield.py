"""Exact arithmetic in the real quadratic rings Z[sqrt(2)] and Z[tau].

Both rings are norm-Euclidean PIDs.  Elements are stored as integer pairs
(a, b) meaning a + b*omega, where omega is sqrt(2) or the golden ratio
tau = (1+sqrt(5))/2.  All arithmetic uses unbounded Python integers, so
coefficient growth can never wrap silently.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

__all__ = [
    "Ring",
    "ZSQRT2",
    "ZTAU",
    "QuadInt",
    "FieldFraction",
    "ring_by_name",
    "euclid_divmod",
    "gcd",
    "is_coprime",
    "lcm",
    "canonical_associate",
    "fundamental_domain_rep",
    "enum_primes",
    "reduce_fraction",
    "trial_divisors",
]


class Ring:
    """One of the two real quadratic rings, fixed by omega's minimal polynomial.

    omega satisfies omega**2 = trace*omega - norm_omega, so multiplication,
    conjugation and norms are determined by (trace, norm_omega):
    sqrt(2) -> (0, -2), tau -> (1, -1).
    """

    __slots__ = ("name", "trace", "norm_omega", "disc", "_unit_coeffs")

    def __init__(self, name: str, trace: int, norm_omega: int, disc: int,
                 unit_coeffs: tuple[int, int]) -> None:
        self.name = name
        self.trace = trace
        self.norm_omega = norm_omega
        self.disc = disc
        self._unit_coeffs = unit_coeffs

    def __repr__(self) -> str:
        return f"Ring({self.name})"

    @property
    def fundamental_unit(self) -> QuadInt:
        return QuadInt(self, *self._unit_coeffs)

    def omega_float(self) -> float:
        return 2.0 ** 0.5 if self is ZSQRT2 else (1.0 + 5.0 ** 0.5) / 2.0

    def element(self, a: int, b: int = 0) -> QuadInt:
        return QuadInt(self, a, b)


# omega = sqrt(2): omega^2 = 2, fundamental unit lambda = 1 + sqrt(2)
ZSQRT2 = Ring("Zsqrt2", 0, -2, 8, (1, 1))
# omega = tau: tau^2 = tau + 1, fundamental unit tau itself
ZTAU = Ring("Ztau", 1, -1, 5, (0, 1))

_RINGS = {"Zsqrt2": ZSQRT2, "Ztau": ZTAU}


def ring_by_name(name: str) -> Ring:
    try:
        return _RINGS[name]
    except KeyError:
        raise ValueError(f"unknown ring {name!r}") from None


def _sign_p_q_sqrt_m(p: int, q: int, m: int) -> int:
    """Exact sign of p + q*sqrt(m) for integers p, q and squarefree m > 1."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    d = p * p - m * q * q
    s = (d > 0) - (d < 0)
    return s if p > 0 else -s


class QuadInt:
    """Element a + b*omega of a real quadratic ring."""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: Ring, a: int, b: int) -> None:
        self.ring = ring
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        omega = "sqrt2" if self.ring is ZSQRT2 else "tau"
        return f"QuadInt({self.a}{self.b:+}*{omega})"

    def _check(self, other: QuadInt) -> None:
        if self.ring is not other.ring:
            raise ValueError("mixed-ring arithmetic")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.a == other and self.b == 0
        if not isinstance(other, QuadInt):
            return NotImplemented
        return self.ring is other.ring and self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.ring.name, self.a, self.b))

    def __add__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.ring, self.a + other, self.b)
        self._check(other)
        return QuadInt(self.ring, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> QuadInt:
        return QuadInt(self.ring, -self.a, -self.b)

    def __sub__(self, other: QuadInt | int) -> QuadInt:
        return self + (-other)

    def __rsub__(self, other: int) -> QuadInt:
        return (-self) + other

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.ring, self.a * other, self.b * other)
        self._check(other)
        t, n = self.ring.trace, self.ring.norm_omega
        # omega^2 = t*omega - n
        bb = self.b * other.b
        return QuadInt(
            self.ring,
            self.a * other.a - n * bb,
            self.a * other.b + self.b * other.a + t * bb,
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QuadInt:
        if k < 0:
            return self.inverse_unit() ** (-k)
        result = QuadInt(self.ring, 1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> QuadInt:
        # sigma(omega) = trace - omega
        return QuadInt(self.ring, self.a + self.ring.trace * self.b, -self.b)

    def norm(self) -> int:
        t, n = self.ring.trace, self.ring.norm_omega
        return self.a * self.a + t * self.a * self.b + n * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse_unit(self) -> QuadInt:
        n = self.norm()
        if n == 1:
            return self.conj()
        if n == -1:
            return -self.conj()
        raise ZeroDivisionError("not a unit")

    def sign(self) -> int:
        """Exact sign in the real embedding omega > 0."""
        if self.ring is ZSQRT2:
            return _sign_p_q_sqrt_m(self.a, self.b, 2)
        # a + b*tau = (2a+b)/2 + (b/2)*sqrt(5)
        return _sign_p_q_sqrt_m(2 * self.a + self.b, self.b, 5)

    def __lt__(self, other: QuadInt | int) -> bool:
        diff = self - (other if isinstance(other, QuadInt) else QuadInt(self.ring, other, 0))
        return diff.sign() < 0

    def __le__(self, other: QuadInt | int) -> bool:
        diff = self - (other if isinstance(other, QuadInt) else QuadInt(self.ring, other, 0))
        return diff.sign() <= 0

    def __gt__(self, other: QuadInt | int) -> bool:
        return not self <= other

    def __ge__(self, other: QuadInt | int) -> bool:
        return not self < other

    def __abs__(self) -> QuadInt:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return self.a + self.b * self.ring.omega_float()

    def coeffs_fraction(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a), Fraction(self.b)

    def divides(self, other: QuadInt) -> bool:
        return self.try_divide_into(other) is not None

    def try_divide_into(self, other: QuadInt) -> QuadInt | None:
        """Return other/self when the quotient lies in the ring, else None."""
        self._check(other)
        if self.is_zero():
            raise ZeroDivisionError
        n = self.norm()
        p = other * self.conj()
        if p.a % n or p.b % n:
            return None
        return QuadInt(self.ring, p.a // n, p.b // n)

    def __divmod__(self, other: QuadInt) -> tuple[QuadInt, QuadInt]:
        return euclid_divmod(self, other)

    def __floordiv__(self, other: QuadInt) -> QuadInt:
        return euclid_divmod(self, other)[0]

    def __mod__(self, other: QuadInt) -> QuadInt:
        return euclid_divmod(self, other)[1]


def _round_ties_to_zero(num: int, den: int) -> int:
    # nearest integer to num/den, den > 0, ties toward zero
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and q < 0):
        q += 1
    return q


def euclid_divmod(x: QuadInt, y: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Division with remainder: x = q*y + r and |N(r)| < |N(y)|.

    The quotient rounds each rational coefficient of x/y to the nearest
    integer (ties toward zero).  In these two rings that always meets the
    remainder bound, but the contract is asserted, with a 3x3 neighbourhood
    search as fallback.
    """
    x._check(y)
    if y.is_zero():
        raise ZeroDivisionError("division by zero QuadInt")
    n = y.norm()
    p = x * y.conj()
    if n < 0:
        p, n = -p, -n
    qa = _round_ties_to_zero(p.a, n)
    qb = _round_ties_to_zero(p.b, n)
    ny = abs(y.norm())
    q = QuadInt(x.ring, qa, qb)
    r = x - q * y
    if abs(r.norm()) < ny:
        return q, r
    for da in (-1, 0, 1):
        for db in (-1, 0, 1):
            q2 = QuadInt(x.ring, qa + da, qb + db)
            r2 = x - q2 * y
            if abs(r2.norm()) < ny:
                return q2, r2
    raise AssertionError("euclidean remainder contract failed")


def gcd(x: QuadInt, y: QuadInt) -> QuadInt:
    """Greatest common divisor, returned as the canonical associate."""
    x._check(y)
    if x.is_zero() and y.is_zero():
        raise ValueError("gcd(0, 0) undefined")
    while not y.is_zero():
        prev = abs(y.norm())
        _, r = euclid_divmod(x, y)
        assert abs(r.norm()) < prev
        x, y = y, r
    return canonical_associate(x)


def is_coprime(x: QuadInt, y: QuadInt) -> bool:
    if x.is_zero() and y.is_zero():
        return False
    return gcd(x, y).is_unit()


def canonical_associate(x: QuadInt) -> QuadInt:
    """The unique associate y = u*x with y > 0 and y/|sigma(y)| in [1, u_f^2).

    Multiplying by the fundamental unit scales y/|sigma(y)| by u_f^2, so the
    orbit of associates meets the target interval exactly once.
    """
    if x.is_zero():
        raise ValueError("zero has no canonical associate")
    if x.sign() < 0:
        x = -x
    u = x.ring.fundamental_unit
    uinv = u.inverse_unit()
    # y/|sigma(y)| >= 1  <=>  y >= |sigma(y)|  (both sides positive)
    while (x - abs(x.conj())).sign() < 0:
        x = x * u
        if x.sign() < 0:
            x = -x
    # y/|sigma(y)| < u_f^2  <=>  y < u_f^2 * |sigma(y)|
    u2 = u * u
    while (x - u2 * abs(x.conj())).sign() >= 0:
        x = x * uinv
        if x.sign() < 0:
            x = -x
    return x


def fundamental_domain_rep(x: QuadInt) -> QuadInt:
    """The associate of x lying in the real interval (1, fundamental_unit).

    This is the normalisation used for prime enumeration; it exists and is
    unique for every non-unit, non-zero x (x can never equal a unit power).
    """
    if x.is_zero():
        raise ValueError("zero element")
    if x.sign() < 0:
        x = -x
    u = x.ring.fundamental_unit
    uinv = u.inverse_unit()
    one = QuadInt(x.ring, 1, 0)
    while (x - one).sign() <= 0:
        x = x * u
        if x.sign() < 0:
            x = -x
    while (x - u).sign() >= 0:
        x = x * uinv
        if x.sign() < 0:
            x = -x
    return x


def _prime_above(ring: Ring, p: int) -> list[QuadInt]:
    """Prime divisors of the rational prime p, one per prime ideal."""
    import sympy

    d = 2 if ring is ZSQRT2 else 5
    if p == d:
        # ramified: p = pi^2 up to a unit (pi = sqrt2 resp. sqrt5 = 2*tau - 1)
        pi = QuadInt(ring, 0, 1) if ring is ZSQRT2 else QuadInt(ring, -1, 2)
        return [fundamental_domain_rep(pi)]
    split = (d % 8 == 1) if p == 2 else sympy.legendre_symbol(d, p) == 1
    if not split:
        # inert: (p) stays prime, ideal norm p^2
        return [fundamental_domain_rep(QuadInt(ring, p, 0))]
    # split: two conjugate ideals; omega maps to a root of its minimal poly mod p
    r = sympy.sqrt_mod(d, p)
    if ring is ZTAU:
        r = (1 + r) * pow(2, -1, p) % p
    pi = gcd(QuadInt(ring, p, 0), QuadInt(ring, r, -1))
    assert abs(pi.norm()) == p
    return sorted(
        (fundamental_domain_rep(pi), fundamental_domain_rep(pi.conj())),
        key=lambda z: (z.a, z.b),
    )


def enum_primes(ring: Ring, norm_bound: int) -> list[QuadInt]:
    """All primes pi with 1 < pi < fundamental_unit and |N(pi)| <= norm_bound.

    One representative per prime ideal, sorted by |N| then coefficients.
    """
    import sympy

    if norm_bound < 2:
        return []
    out: list[QuadInt] = []
    for p in sympy.primerange(2, norm_bound + 1):
        for pi in _prime_above(ring, p):
            if abs(pi.norm()) <= norm_bound:
                out.append(pi)
    out.sort(key=lambda z: (abs(z.norm()), z.a, z.b))
    return out


class FieldFraction:
    """Reduced fraction num/den of ring elements, den a canonical associate."""

    __slots__ = ("num", "den")

    def __init__(self, num: QuadInt, den: QuadInt) -> None:
        self.num = num
        self.den = den

    def __repr__(self) -> str:
        return f"FieldFraction({self.num!r}, {self.den!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldFraction):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __float__(self) -> float:
        return float(self.num) / float(self.den)

    def conj_float(self) -> float:
        return float(self.num.conj()) / float(self.den.conj())


def reduce_fraction(num: QuadInt, den: QuadInt) -> FieldFraction:
    """Reduce num/den to lowest terms with a canonical-associate denominator."""
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return FieldFraction(QuadInt(num.ring, 0, 0), QuadInt(num.ring, 1, 0))
    g = gcd(num, den)
    num = g.try_divide_into(num)
    den = g.try_divide_into(den)
    assert num is not None and den is not None
    # scale so that den is its own canonical associate
    den_c = canonical_associate(den)
    u = den.try_divide_into(den_c)  # the unit den_c/den
    assert u is not None and u.is_unit()
    return FieldFraction(num * u, den_c)


def lcm(x: QuadInt, y: QuadInt) -> QuadInt:
    if x.is_zero() or y.is_zero():
        raise ValueError("lcm with zero")
    g = gcd(x, y)
    q = g.try_divide_into(y)
    assert q is not None
    return canonical_associate(x * q)


def trial_divisors(x: QuadInt, coeff_bound: int) -> Iterator[QuadInt]:
    """Brute-force non-unit divisors of x with small coefficients (test oracle)."""
    for a in range(-coeff_bound, coeff_bound + 1):
        for b in range(-coeff_bound, coeff_bound + 1):
            d = QuadInt(x.ring, a, b)
            if d.is_zero() or d.is_unit():
                continue
            if d.divides(x):
                yield d
