"""Exact convex polygon windows in internal space.

Vertices are TowerReal pairs, so every predicate (membership, clipping,
areas, sup-triangle functionals) is computed by exact sign tests; floats
appear only when a caller asks for them.

The three built-in windows:
  octagon_ab  - open regular octagon, side 1, sides perpendicularly bisected
                by the coordinate axes (coordinates in Q(sqrt2))
  decagon_t   - closed regular decagon, side sqrt((tau+2)/5), two vertices
                on the y-axis (coordinates in Q(tau)[rho])
  pentagon_w1 - open regular pentagon, the interior of the convex hull of
                the fifth roots of unity
"""

from __future__ import annotations

import json
from fractions import Fraction

from .qfield import Ring, ZSQRT2, ZTAU, QuadInt, ring_by_name
from .tower import TowerReal

__all__ = [
    "Window",
    "StarCheckReport",
    "make_octagon_ab",
    "make_decagon_t",
    "make_pentagon_w1",
    "transform",
    "intersect_convex",
    "sup_triangle_area",
    "star_check",
    "penrose_translate",
    "window_to_json",
    "window_from_json",
    "builtin_window",
]

INSIDE = 1
BOUNDARY = 0
OUTSIDE = -1

_H = Fraction(1, 2)

# exact cos/sin of 36*k degrees over Q(tau)[rho]; rho = sqrt(tau+2)
# cos36 = tau/2, sin36 = rho*(tau-1)/2, cos72 = (tau-1)/2, sin72 = rho/2
_COS36 = [
    (Fraction(1), Fraction(0)),     # k=0
    (Fraction(0), _H),              # 36
    (-_H, _H),                      # 72
    (_H, -_H),                      # 108
    (Fraction(0), -_H),             # 144
    (Fraction(-1), Fraction(0)),    # 180
    (Fraction(0), -_H),             # 216
    (_H, -_H),                      # 252
    (-_H, _H),                      # 288
    (Fraction(0), _H),              # 324
]
_SIN36 = [
    (Fraction(0), Fraction(0)),
    (-_H, _H),
    (_H, Fraction(0)),
    (_H, Fraction(0)),
    (-_H, _H),
    (Fraction(0), Fraction(0)),
    (_H, -_H),
    (-_H, Fraction(0)),
    (-_H, Fraction(0)),
    (_H, -_H),
]


def _cos_sin_36k(k: int) -> tuple[TowerReal, TowerReal]:
    k %= 10
    cp, cq = _COS36[k]
    sp, sq = _SIN36[k]
    return TowerReal(ZTAU, cp, cq), TowerReal(ZTAU, 0, 0, sp, sq)


def _cross(o: tuple[TowerReal, TowerReal], a: tuple[TowerReal, TowerReal],
           b: tuple[TowerReal, TowerReal]) -> TowerReal:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class Window:
    """Convex polygon with exact vertices in CCW order."""

    __slots__ = ("vertices", "open_boundary", "label", "ring")

    def __init__(self, vertices: list[tuple[TowerReal, TowerReal]],
                 open_boundary: bool = True, label: str = "") -> None:
        if len(vertices) < 3:
            raise ValueError("window needs at least 3 vertices")
        self.ring: Ring = vertices[0][0].ring
        self.vertices = list(vertices)
        self.open_boundary = open_boundary
        self.label = label
        self._validate()

    def _validate(self) -> None:
        n = len(self.vertices)
        for i in range(n):
            o = self.vertices[i]
            a = self.vertices[(i + 1) % n]
            b = self.vertices[(i + 2) % n]
            if _cross(o, a, b).sign() <= 0:
                raise ValueError("window vertices must be strictly convex CCW")

    def __repr__(self) -> str:
        kind = "open" if self.open_boundary else "closed"
        return f"Window({self.label or len(self.vertices)}-gon, {kind})"

    def edges(self) -> list[tuple[tuple[TowerReal, TowerReal], tuple[TowerReal, TowerReal]]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def area(self) -> TowerReal:
        """Exact shoelace area."""
        total = TowerReal(self.ring)
        n = len(self.vertices)
        for i in range(n):
            x0, y0 = self.vertices[i]
            x1, y1 = self.vertices[(i + 1) % n]
            total = total + (x0 * y1 - x1 * y0)
        half = total * Fraction(1, 2)
        assert half.sign() > 0
        return half

    def contains(self, p: tuple[TowerReal, TowerReal]) -> int:
        """INSIDE, BOUNDARY or OUTSIDE, by exact half-plane signs."""
        on_edge = False
        for a, b in self.edges():
            s = _cross(a, b, p).sign()
            if s < 0:
                return OUTSIDE
            if s == 0:
                on_edge = True
        return BOUNDARY if on_edge else INSIDE

    def admits(self, p: tuple[TowerReal, TowerReal]) -> bool:
        """Set membership honouring the open/closed flag."""
        c = self.contains(p)
        return c == INSIDE or (c == BOUNDARY and not self.open_boundary)

    def contains_origin(self) -> bool:
        zero = TowerReal(self.ring)
        return self.contains((zero, zero)) == INSIDE

    def outer_radius_sq(self) -> TowerReal:
        """Exact max |v|^2 over vertices."""
        best = None
        for x, y in self.vertices:
            m = x * x + y * y
            if best is None or m > best:
                best = m
        return best

    def vertex_floats(self) -> list[tuple[float, float]]:
        return [(float(x), float(y)) for x, y in self.vertices]

    def with_boundary(self, open_boundary: bool) -> Window:
        return Window(self.vertices, open_boundary=open_boundary, label=self.label)

    def halfplane_forms(self) -> list[tuple[tuple[Fraction, Fraction],
                                            tuple[Fraction, Fraction],
                                            tuple[Fraction, Fraction]]]:
        """Per-edge (A, B, C) as Q(omega) pairs with interior = {A x + B y' + C > 0}.

        Coordinates are 'reduced': a point (x, y) is handled as (x, y') with
        y = y'*rho for Z[tau] windows (rho = sqrt(tau+2)) and y' = y for
        Z[sqrt2] windows.  Requires vertex x-parts free of rho and, over
        Z[tau], vertex y-parts pure rho multiples; all built-in windows and
        their field-scalar transforms have this shape.
        """
        tau_like = self.ring is ZTAU
        forms = []
        for (px, py), (qx, qy) in self.edges():
            if px.r or px.s or qx.r or qx.s:
                raise ValueError("vertex x-coordinate has a rho part")
            if tau_like:
                if py.p or py.q or qy.p or qy.q:
                    raise ValueError("vertex y-coordinate must be a pure rho multiple")
                pyr, qyr = (py.r, py.s), (qy.r, qy.s)
            else:
                pyr, qyr = (py.p, py.q), (qy.p, qy.q)
            dx = (qx.p - px.p, qx.q - px.q)
            dy = (qyr[0] - pyr[0], qyr[1] - pyr[1])
            a = (-dy[0], -dy[1])
            b = dx
            # C = dy·Px - dx·Py' using Q(omega) multiplication
            t, n = self.ring.trace, self.ring.norm_omega

            def _mul(u, v):
                return (u[0] * v[0] - n * u[1] * v[1],
                        u[0] * v[1] + u[1] * v[0] + t * u[1] * v[1])

            c1 = _mul(dy, (px.p, px.q))
            c2 = _mul(dx, pyr)
            forms.append((a, b, (c1[0] - c2[0], c1[1] - c2[1])))
        return forms


class StarCheckReport:
    __slots__ = ("is_star_shaped_origin", "satisfies_minusw_in_cw")

    def __init__(self, star: bool, refl: bool) -> None:
        self.is_star_shaped_origin = star
        self.satisfies_minusw_in_cw = refl

    def ok(self) -> bool:
        return self.is_star_shaped_origin and self.satisfies_minusw_in_cw


def make_octagon_ab() -> Window:
    """Open regular octagon, side 1, sides perpendicularly bisected by the axes."""
    # apothem (1+sqrt2)/2 on both axes; vertices (+-(1+sqrt2)/2, +-1/2) etc.
    big = TowerReal(ZSQRT2, _H, _H)
    half = TowerReal(ZSQRT2, _H)
    verts = [
        (big, half), (half, big), (-half, big), (-big, half),
        (-big, -half), (-half, -big), (half, -big), (big, -half),
    ]
    return Window(verts, open_boundary=True, label="octagon_ab")


def make_decagon_t() -> Window:
    """Closed regular decagon, side sqrt((tau+2)/5), two vertices on the y-axis."""
    # circumradius R = tau*side = (tau+2)*rho/5
    r_scale = TowerReal(ZTAU, 0, 0, Fraction(2, 5), Fraction(1, 5))
    verts = []
    for k in range(10):
        c, s = _cos_sin_36k(k)
        # vertex at angle 90 + 36k degrees: (-R sin, R cos)
        verts.append((-(r_scale * s), r_scale * c))
    return Window(verts, open_boundary=False, label="decagon_t")


def make_pentagon_w1() -> Window:
    """Open regular pentagon: interior of the convex hull of the 5th roots of unity."""
    verts = []
    for j in range(5):
        c, s = _cos_sin_36k(2 * j)
        verts.append((c, s))
    return Window(verts, open_boundary=True, label="pentagon_w1")


def transform(w: Window, scale: TowerReal | QuadInt | Fraction | int = 1,
              rotate180: bool = False,
              translate: tuple[TowerReal, TowerReal] | None = None,
              label: str = "") -> Window:
    """Exact affine image scale*(+-v) + translate; orientation stays CCW
    because the linear part has determinant scale^2 > 0."""
    if isinstance(scale, QuadInt):
        scale = TowerReal.from_quadint(scale)
    elif not isinstance(scale, TowerReal):
        scale = TowerReal(w.ring, scale)
    if scale.is_zero():
        raise ValueError("zero scale")
    if translate is None:
        zero = TowerReal(w.ring)
        translate = (zero, zero)
    sgn = -1 if rotate180 else 1
    verts = []
    for x, y in w.vertices:
        vx = scale * x * sgn + translate[0]
        vy = scale * y * sgn + translate[1]
        verts.append((vx, vy))
    # the linear part has determinant scale^2 > 0, so CCW order survives
    return Window(verts, open_boundary=w.open_boundary, label=label or w.label)


def intersect_convex(w1: Window, w2: Window) -> Window | None:
    """Exact convex intersection by half-plane clipping; None when empty
    or degenerate (a point or segment, which has zero area)."""
    if w1.ring is not w2.ring:
        raise ValueError("mixed-ring windows")
    poly = list(w1.vertices)
    for a, b in w2.edges():
        if not poly:
            return None
        out: list[tuple[TowerReal, TowerReal]] = []
        signs = [_cross(a, b, p).sign() for p in poly]
        n = len(poly)
        for i in range(n):
            p, sp = poly[i], signs[i]
            q, sq = poly[(i + 1) % n], signs[(i + 1) % n]
            if sp >= 0:
                out.append(p)
            if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
                # edge p->q crosses the clip line at p + t*(q-p)
                fp = _cross(a, b, p)
                fq = _cross(a, b, q)
                t = fp / (fp - fq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        poly = out
    poly = _clean_polygon(poly)
    if poly is None:
        return None
    open_flag = w1.open_boundary or w2.open_boundary
    return Window(poly, open_boundary=open_flag,
                  label=f"{w1.label}&{w2.label}" if w1.label or w2.label else "")


def _clean_polygon(poly: list[tuple[TowerReal, TowerReal]]
                   ) -> list[tuple[TowerReal, TowerReal]] | None:
    if len(poly) < 3:
        return None
    dedup: list[tuple[TowerReal, TowerReal]] = []
    for p in poly:
        if not dedup or not (p[0] == dedup[-1][0] and p[1] == dedup[-1][1]):
            dedup.append(p)
    while len(dedup) > 1 and dedup[0][0] == dedup[-1][0] and dedup[0][1] == dedup[-1][1]:
        dedup.pop()
    if len(dedup) < 3:
        return None
    # drop collinear middle vertices
    out = []
    n = len(dedup)
    for i in range(n):
        o, a, b = dedup[(i - 1) % n], dedup[i], dedup[(i + 1) % n]
        if _cross(o, a, b).sign() != 0:
            out.append(a)
    if len(out) < 3:
        return None
    return out


def area_or_zero(w: Window | None, ring: Ring) -> TowerReal:
    return TowerReal(ring) if w is None else w.area()


def sup_triangle_area(w1: Window, w2: Window) -> TowerReal:
    """sup of the area of triangle (0, x, y) over x in w1, y in w2.

    The objective is convex in each argument, so the sup over the closures
    is attained at a vertex pair.
    """
    half = Fraction(1, 2)
    best: TowerReal | None = None
    for x1, y1 in w1.vertices:
        for x2, y2 in w2.vertices:
            v = abs(x1 * y2 - y1 * x2) * half
            if best is None or v > best:
                best = v
    assert best is not None
    return best


def star_check(w: Window, c: TowerReal | Fraction | int) -> StarCheckReport:
    """Verify 0 in W (so convex W is star-shaped about 0) and -W subset c*W.

    For convex bodies -W subset c*W holds iff every vertex of -closure(W)
    lies in closure(c*W).
    """
    if not isinstance(c, TowerReal):
        c = TowerReal(w.ring, c)
    star = w.contains_origin()
    scaled = transform(w, scale=c)
    refl = all(scaled.contains((-x, -y)) != OUTSIDE for x, y in w.vertices)
    return StarCheckReport(star, refl)


def penrose_translate(gamma: list[Fraction]) -> tuple[TowerReal, TowerReal]:
    """epsilon = sum gamma_j * zeta_5^{2j} as exact internal-plane coordinates."""
    if len(gamma) != 5:
        raise ValueError("gamma must have 5 entries")
    re = TowerReal(ZTAU)
    im = TowerReal(ZTAU)
    for j, g in enumerate(gamma):
        c, s = _cos_sin_36k(4 * j)  # angle 144*j degrees
        re = re + c * Fraction(g)
        im = im + s * Fraction(g)
    return re, im


# -- JSON window description ------------------------------------------------

def _frac_str(f: Fraction) -> str:
    return str(f)


def window_to_json(w: Window) -> str:
    has_rho = any(x.r or x.s or y.r or y.s for x, y in w.vertices)
    doc = {
        "ring": w.ring.name,
        "rho": "sqrt(tau+2)" if has_rho else "1",
        "vertices": [
            [[_frac_str(t) for t in v[0].coeff_tuple()],
             [_frac_str(t) for t in v[1].coeff_tuple()]]
            for v in w.vertices
        ],
        "boundary": "open" if w.open_boundary else "closed",
    }
    return json.dumps(doc, indent=2)


def window_from_json(text: str) -> Window:
    doc = json.loads(text)
    ring = ring_by_name(doc["ring"])
    verts = []
    for vx, vy in doc["vertices"]:
        x = TowerReal(ring, *(Fraction(t) for t in vx))
        y = TowerReal(ring, *(Fraction(t) for t in vy))
        verts.append((x, y))
    return Window(verts, open_boundary=(doc["boundary"] == "open"))


_BUILTINS = {
    "octagon_ab": make_octagon_ab,
    "decagon_t": make_decagon_t,
    "pentagon_w1": make_pentagon_w1,
}


def builtin_window(name: str) -> Window:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown window {name!r}; "
                         f"choose from {sorted(_BUILTINS)}") from None
