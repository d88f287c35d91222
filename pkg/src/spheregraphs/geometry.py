"""Vectors over F_q, the sum-of-squares form, unit spheres and line sets.

Points are tuples of element codes.  The "distance" between x and y is
Q(x - y) with Q(x) = x_1^2 + ... + x_d^2; it is a field value, not a
metric.  A line [x] is represented by its canonical unit vector: of the
two unit points {U, -U} on the line, the one whose first nonzero
coordinate comes earlier in enumeration order (equivalently the
code-tuple minimum).  Omega is the set of all square-type non-isotropic
lines; exactly those lines meet the unit sphere, in two antipodal points.
"""

from __future__ import annotations

import itertools

from .ffield import Field

__all__ = [
    "quad_form",
    "dot",
    "dist",
    "Sphere",
    "enumerate_sphere",
    "line_of",
    "Omega",
    "build_omega",
    "lift",
    "distance_set",
]

Point = tuple[int, ...]


def _check_dims(x, y):
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")


def quad_form(field: Field, x: Point) -> int:
    """Q(x) = sum of squared coordinates."""
    acc = 0
    for c in x:
        acc = field.add(acc, field.mul(c, c))
    return acc


def dot(field: Field, x: Point, y: Point) -> int:
    _check_dims(x, y)
    acc = 0
    for a, b in zip(x, y):
        acc = field.add(acc, field.mul(a, b))
    return acc


def dist(field: Field, x: Point, y: Point) -> int:
    """Q(x - y); symmetric, zero on the diagonal."""
    _check_dims(x, y)
    acc = 0
    for a, b in zip(x, y):
        c = field.sub(a, b)
        acc = field.add(acc, field.mul(c, c))
    return acc


class Sphere:
    """All points with Q(x) = 1, in d-fold enumeration order."""

    __slots__ = ("field", "d", "points", "index")

    def __init__(self, field: Field, d: int, points: list[Point]):
        self.field = field
        self.d = d
        self.points = tuple(points)
        self.index = {pt: k for k, pt in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, pt):
        return pt in self.index

    def __repr__(self):
        return f"Sphere(q={self.field.q}, d={self.d}, n={len(self.points)})"


def enumerate_sphere(field: Field, d: int) -> Sphere:
    """Solve Q(x) = 1 by iterating prefixes and finishing with a root table.

    The last coordinate is resolved by square-root lookup, so the scan is
    O(q^{d-1}) prefixes instead of q^d vectors, while producing the exact
    order of the full lexicographic iteration (last coordinate fastest).
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    points: list[Point] = []
    one = 1
    for prefix in itertools.product(field.elements(), repeat=d - 1):
        s = field.sub(one, quad_form(field, prefix))
        for t in field.sqrts(s):
            points.append(prefix + (t,))
    return Sphere(field, d, points)


def line_of(field: Field, x: Point) -> Point:
    """Canonical unit representative of the line [x].

    Requires Q(x) to be a nonzero square: scaling by t with t^2 Q(x) = 1
    lands on the sphere, and of the two unit points the code-tuple minimum
    is returned (its first nonzero coordinate is the earlier element).
    """
    qx = quad_form(field, x)
    if qx == 0:
        raise ValueError("isotropic vector: Q(x) = 0 spans no unit line")
    if not field.is_square(qx):
        raise ValueError("non-square type: Q(x) is not a square, line misses the sphere")
    t = field.sqrts(field.inv(qx))[0]
    u = tuple(field.mul(t, c) for c in x)
    v = tuple(field.neg(c) for c in u)
    return min(u, v)


class Omega:
    """All square-type non-isotropic lines, as canonical unit representatives.

    Representatives are stored in first-occurrence order over the sphere
    enumeration, which coincides with sorted code-tuple order.
    """

    __slots__ = ("field", "d", "lines", "index")

    def __init__(self, field: Field, d: int, lines: list[Point]):
        self.field = field
        self.d = d
        self.lines = tuple(lines)
        self.index = {rep: k for k, rep in enumerate(self.lines)}

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __repr__(self):
        return f"Omega(q={self.field.q}, d={self.d}, n={len(self.lines)})"


def build_omega(field: Field, d: int) -> Omega:
    sphere = enumerate_sphere(field, d)
    lines: list[Point] = []
    seen = set()
    for pt in sphere.points:
        rep = line_of(field, pt)
        if rep not in seen:
            seen.add(rep)
            lines.append(rep)
    if 2 * len(lines) != len(sphere):
        raise RuntimeError(
            f"line count {len(lines)} is not half the sphere size {len(sphere)}"
        )
    return Omega(field, d, lines)


def lift(field: Field, points, omega: Omega) -> tuple[list[int], dict[int, int]]:
    """Image of a sphere subset under x -> [x], as omega indices.

    Returns the sorted index list and the per-line point multiplicity
    (1 or 2; antipodal pairs collapse).  Every input point must lie on
    the unit sphere.
    """
    mult: dict[int, int] = {}
    for pt in points:
        if quad_form(field, pt) != 1:
            raise ValueError(f"point {pt} is not on the unit sphere")
        idx = omega.index[line_of(field, pt)]
        mult[idx] = mult.get(idx, 0) + 1
    return sorted(mult), mult


def distance_set(field: Field, points) -> set[int]:
    """All pairwise distances of a nonempty point set, 0 included."""
    pts = list(points)
    if not pts:
        raise ValueError("distance set of an empty point set")
    values = {0}
    for i, x in enumerate(pts):
        for y in pts[i + 1 :]:
            values.add(dist(field, x, y))
    return values
