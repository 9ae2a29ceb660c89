"""Newton polygons of polynomials in M, L and their side slopes.

Exponent vectors are read as (M-exponent, L-exponent). A side with
primitive direction (a, b) has boundary slope ``-a/b`` (``inf`` when
``b == 0``). With this reading the trefoil factor ``L*M^6 + 1`` has slope
-6 and ``L - 1`` has slope 0.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from aknot.core.errors import ZeroPolynomial
from aknot.core.formatter import format_rational

INFINITY = float("inf")


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points):
    """Counterclockwise hull vertices, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class NewtonPolygon:
    """Hull of a support set.

    Attributes:
        vertices: counterclockwise lattice points.
        sides: ((a, b), lattice length) per edge, (a, b) primitive.
    """

    vertices: tuple
    sides: tuple

    def contains(self, point):
        """Exact membership of a lattice point in the closed hull."""
        vs = self.vertices
        if len(vs) == 1:
            return tuple(point) == vs[0]
        if len(vs) == 2:
            a, b = vs
            if _cross(a, b, point):
                return False
            return min(a[0], b[0]) <= point[0] <= max(a[0], b[0]) and min(
                a[1], b[1]
            ) <= point[1] <= max(a[1], b[1])
        return all(
            _cross(vs[i], vs[(i + 1) % len(vs)], point) >= 0 for i in range(len(vs))
        )


def _side(a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = gcd(dx, dy)
    return (dx // g, dy // g), g


def newton_polygon(p):
    """Newton polygon of a nonzero polynomial in ``M, L``.

    Raises:
        ZeroPolynomial: If ``p`` is zero.
    """
    if p.is_zero():
        raise ZeroPolynomial("The zero polynomial has no Newton polygon")
    p = p.with_names(("M", "L"))
    vertices = tuple(convex_hull(m for m, _ in p.terms()))
    if len(vertices) == 1:
        sides = ()
    elif len(vertices) == 2:
        sides = (_side(*vertices),)
    else:
        sides = tuple(
            _side(vertices[i], vertices[(i + 1) % len(vertices)])
            for i in range(len(vertices))
        )
    return NewtonPolygon(vertices, sides)


def boundary_slopes(polygon):
    """Set of side slopes ``-a/b``; sides with ``b == 0`` give ``inf``."""
    slopes = set()
    for (a, b), _ in polygon.sides:
        slopes.add(INFINITY if b == 0 else Fraction(-a, b))
    return slopes


def _slope_key(s):
    return (s == INFINITY, s if s != INFINITY else 0)


def slopes_to_json(slopes):
    return [format_rational(s) for s in sorted(slopes, key=_slope_key)]


def polygon_to_json(polygon):
    return {
        "vertices": [list(v) for v in polygon.vertices],
        "sides": [
            {"direction": list(direction), "length": length}
            for direction, length in polygon.sides
        ],
        "slopes": slopes_to_json(boundary_slopes(polygon)),
    }
