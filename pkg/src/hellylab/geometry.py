"""Geometric objects with exact rational coordinates and their stabbing predicates.

Boxes, V-polytopes and axis-parallel flats are decided exactly. Ball
predicates that involve non-axis-parallel directions (a common point of
several balls, a line through three disks) are numeric and three-valued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import minimize

from hellylab import limits, lp
from hellylab.errors import PreconditionError, SchemaError
from hellylab.rational import as_rational, as_vector, render, render_vector

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Box:
    """Closed axis-parallel box ``[lo_1, hi_1] x ... x [lo_d, hi_d]``; may be degenerate."""

    lo: Vector
    hi: Vector

    def __post_init__(self):
        lo, hi = as_vector(self.lo), as_vector(self.hi)
        if len(lo) != len(hi) or not lo:
            raise SchemaError("box corners must have the same positive dimension")
        if any(a > b for a, b in zip(lo, hi)):
            raise SchemaError(f"box has lo > hi: {lo} / {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def d(self) -> int:
        return len(self.lo)

    def contains(self, point: Sequence) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, point, self.hi))

    def corners(self) -> list[Vector]:
        return [tuple(c) for c in product(*zip(self.lo, self.hi))]

    def to_json(self) -> dict:
        return {"type": "box", "lo": render_vector(self.lo), "hi": render_vector(self.hi)}


def interval(a, b) -> Box:
    """One-dimensional box."""
    return Box((a,), (b,))


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of finitely many rational points."""

    points: tuple[Vector, ...]

    def __post_init__(self):
        pts = tuple(as_vector(p) for p in self.points)
        if not pts:
            raise SchemaError("polytope needs at least one point")
        if len({len(p) for p in pts}) != 1 or not pts[0]:
            raise SchemaError("polytope points must share one positive dimension")
        object.__setattr__(self, "points", pts)

    @property
    def d(self) -> int:
        return len(self.points[0])

    def bounding_box(self) -> Box:
        return Box(tuple(map(min, zip(*self.points))), tuple(map(max, zip(*self.points))))

    def contains(self, point: Sequence) -> bool:
        return point_in_polytope(point, self)

    def to_json(self) -> dict:
        return {"type": "polytope", "points": [render_vector(p) for p in self.points]}


@dataclass(frozen=True)
class Ball:
    center: Vector
    radius: Fraction

    def __post_init__(self):
        c = as_vector(self.center)
        r = as_rational(self.radius)
        if not c:
            raise SchemaError("ball center must be nonempty")
        if r < 0:
            raise SchemaError("ball radius must be nonnegative")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)

    @property
    def d(self) -> int:
        return len(self.center)

    def to_json(self) -> dict:
        return {"type": "ball", "center": render_vector(self.center), "radius": render(self.radius)}


@dataclass(frozen=True)
class AxisFlat:
    """Axis-parallel flat in R^d fixing coordinates ``j`` to ``value``; k = d - |fixed|."""

    d: int
    fixed: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        items = self.fixed.items() if isinstance(self.fixed, dict) else self.fixed
        fixed = tuple(sorted((int(j), as_rational(v)) for j, v in items))
        idx = [j for j, _ in fixed]
        if len(set(idx)) != len(idx) or any(not 0 <= j < self.d for j in idx):
            raise SchemaError(f"fixed coordinates {idx} invalid for d={self.d}")
        object.__setattr__(self, "fixed", fixed)

    @property
    def k(self) -> int:
        return self.d - len(self.fixed)

    @property
    def free(self) -> tuple[int, ...]:
        fixed = {j for j, _ in self.fixed}
        return tuple(j for j in range(self.d) if j not in fixed)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.fixed)

    def to_json(self) -> dict:
        return {"type": "axisflat", "d": self.d, "fixed": {str(j): render(v) for j, v in self.fixed}}


GeomObject = Union[Box, VPolytope, Ball]


def from_json(doc: dict) -> GeomObject:
    try:
        kind = doc["type"]
        if kind == "box":
            return Box(doc["lo"], doc["hi"])
        if kind == "interval":
            return interval(doc["lo"], doc["hi"])
        if kind == "polytope":
            return VPolytope(doc["points"])
        if kind == "ball":
            return Ball(doc["center"], doc["radius"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad geometry record {doc!r}: {exc}") from None
    raise SchemaError(f"unknown geometry type {doc.get('type')!r}")


def _same_dim(objs: Sequence) -> int:
    dims = {o.d for o in objs}
    if len(dims) > 1:
        raise PreconditionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop() if dims else 0


def as_polytope(obj: Box | VPolytope) -> VPolytope:
    if isinstance(obj, VPolytope):
        return obj
    if isinstance(obj, Box):
        return VPolytope(tuple(obj.corners()))
    raise PreconditionError(f"cannot view {type(obj).__name__} as a polytope")


def bounding_box(obj: Box | VPolytope) -> Box:
    return obj if isinstance(obj, Box) else obj.bounding_box()


# -- boxes and axis-parallel flats ---------------------------------------------


def boxes_intersect(boxes: Sequence[Box]) -> bool:
    d = _same_dim(boxes)
    return all(max(b.lo[j] for b in boxes) <= min(b.hi[j] for b in boxes) for j in range(d))


def common_point(boxes: Sequence[Box]) -> Vector | None:
    """Coordinatewise max of lower corners, if it lies in every box."""
    if not boxes:
        return None
    d = _same_dim(boxes)
    pt = tuple(max(b.lo[j] for b in boxes) for j in range(d))
    return pt if all(b.contains(pt) for b in boxes) else None


def box_intersection(boxes: Sequence[Box]) -> Box | None:
    if not boxes_intersect(boxes):
        return None
    d = boxes[0].d
    return Box(tuple(max(b.lo[j] for b in boxes) for j in range(d)),
               tuple(min(b.hi[j] for b in boxes) for j in range(d)))


def axisflat_stabs_box(f: AxisFlat, b: Box) -> bool:
    if f.d != b.d:
        raise PreconditionError(f"dimension mismatch: flat {f.d}, box {b.d}")
    return all(b.lo[j] <= v <= b.hi[j] for j, v in f.fixed)


def axisflat_transversal(boxes: Sequence[Box], k: int) -> AxisFlat | None:
    """An axis-parallel k-flat meeting every box, or None.

    Tries fixed-coordinate sets in lexicographic order; the first set whose
    projections all overlap gives the flat through the maximal lower bounds.
    """
    d = _same_dim(boxes)
    if not 0 <= k < d:
        raise PreconditionError(f"need 0 <= k < d, got k={k}, d={d}")
    for fixed in combinations(range(d), d - k):
        if all(max(b.lo[j] for b in boxes) <= min(b.hi[j] for b in boxes) for j in fixed):
            return AxisFlat(d, tuple((j, max(b.lo[j] for b in boxes)) for j in fixed))
    return None


# -- V-polytopes -----------------------------------------------------------------


def _convex_combination_system(polys: Sequence[VPolytope]):
    """Equality system in the convex weights of every polytope:
    weights of each polytope sum to 1, and all polytopes map to one point."""
    d = polys[0].d
    offsets = []
    n = 0
    for P in polys:
        offsets.append(n)
        n += len(P.points)
    A, b = [], []
    for i, P in enumerate(polys):
        row = [0] * n
        for k in range(len(P.points)):
            row[offsets[i] + k] = 1
        A.append(row)
        b.append(1)
    P0 = polys[0]
    for i in range(1, len(polys)):
        P = polys[i]
        for c in range(d):
            row = [Fraction(0)] * n
            for k, p in enumerate(P0.points):
                row[offsets[0] + k] += p[c]
            for k, p in enumerate(P.points):
                row[offsets[i] + k] -= p[c]
            A.append(row)
            b.append(0)
    return A, b, offsets


def polytopes_common_point(polys: Sequence[VPolytope], limit: int | None = None) -> Vector | None:
    """A point in the intersection of the hulls, by exact LP feasibility."""
    if not polys:
        return None
    polys = [as_polytope(P) for P in polys]
    d = _same_dim(polys)
    total = sum(len(P.points) for P in polys)
    limits.check("lp_variables", total, limit, what="polytope LP variables")
    A, b, offsets = _convex_combination_system(polys)
    x = lp.feasible_point(A, b, limit)
    if x is None:
        return None
    P0 = polys[0]
    return tuple(sum((x[k] * p[c] for k, p in enumerate(P0.points)), Fraction(0)) for c in range(d))


def polytopes_intersect(polys: Sequence[VPolytope], limit: int | None = None) -> bool:
    polys = [as_polytope(P) for P in polys]
    # cheap exact reject on bounding boxes first
    if not boxes_intersect([P.bounding_box() for P in polys]):
        return False
    return polytopes_common_point(polys, limit) is not None


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Iterable[Vector]) -> list[Vector]:
    """Counter-clockwise hull without collinear points (monotone chain)."""
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


def point_in_polytope(point: Sequence, P: VPolytope) -> bool:
    """Exact membership; closed-form for d <= 2, LP otherwise."""
    point = as_vector(point)
    if len(point) != P.d:
        raise PreconditionError("dimension mismatch")
    if not P.bounding_box().contains(point):
        return False
    if P.d == 1:
        return True
    if P.d == 2:
        hull = convex_hull_2d(P.points)
        if len(hull) == 1:
            return hull[0] == point
        if len(hull) == 2:
            a, b = hull
            return _cross(a, b, point) == 0
        return all(_cross(hull[i], hull[(i + 1) % len(hull)], point) >= 0 for i in range(len(hull)))
    single = VPolytope((point,))
    return polytopes_common_point([P, single]) is not None


def contains(obj: Box | VPolytope, point: Sequence) -> bool:
    if isinstance(obj, Box):
        return obj.contains(point)
    return point_in_polytope(point, obj)


# -- lattice points ------------------------------------------------------------------


def integer_points(box: Box, limit: int | None = None):
    """Integer points of a box in lexicographic order (count checked first)."""
    ranges = [range(math.ceil(a), math.floor(b) + 1) for a, b in zip(box.lo, box.hi)]
    count = math.prod(len(r) for r in ranges)
    limits.check("lattice", count, limit, what="lattice enumeration")
    return (tuple(Fraction(v) for v in p) for p in product(*ranges))


def lattice_point_in_intersection(objs: Sequence[Box | VPolytope], limit: int | None = None) -> Vector | None:
    """An integer point lying in every set, found by scanning the bounding box of
    the intersection; None if there is none."""
    if not objs:
        return None
    _same_dim(objs)
    bb = box_intersection([bounding_box(o) for o in objs])
    if bb is None:
        return None
    boxes = [o for o in objs if isinstance(o, Box)]
    polys = [o for o in objs if not isinstance(o, Box)]
    for pt in integer_points(bb, limit):
        if all(b.contains(pt) for b in boxes) and all(point_in_polytope(pt, P) for P in polys):
            return pt
    return None


# -- line transversals in the plane ------------------------------------------------


Line = tuple[tuple[Fraction, Fraction], Fraction]


def line_meets(line: Line, P: VPolytope) -> bool:
    (a1, a2), b = line
    vals = [a1 * p[0] + a2 * p[1] for p in P.points]
    return min(vals) <= b <= max(vals)


def candidate_lines(polys: Sequence[VPolytope]) -> list[Line]:
    """Lines through every pair of distinct vertices, then verticals through each vertex.

    If some line meets every compact convex polygon, translating it until it
    touches a vertex and rotating about that vertex until it touches a second
    one keeps it a transversal, so one of these candidates is a transversal
    (a vertical line covers the case where every direction through the pivot works).
    """
    pts = sorted({p for P in polys for p in P.points})
    out: list[Line] = []
    seen = set()
    for p, q in combinations(pts, 2):
        a = (p[1] - q[1], q[0] - p[0])
        g = a[0] if a[0] != 0 else a[1]
        a = (a[0] / g, a[1] / g)
        b = a[0] * p[0] + a[1] * p[1]
        if (a, b) not in seen:
            seen.add((a, b))
            out.append((a, b))
    for p in pts:
        line = ((Fraction(1), Fraction(0)), p[0])
        if line not in seen:
            seen.add(line)
            out.append(line)
    return out


def line_transversal_polygons(polys: Sequence[VPolytope]) -> Line | None:
    """A line ``a.x = b`` meeting every polygon (exact), or None."""
    polys = [as_polytope(P) for P in polys]
    d = _same_dim(polys)
    if d != 2:
        raise PreconditionError(f"line transversals are implemented for d = 2 only, got d={d}")
    cands = candidate_lines(polys)
    limits.check("enumeration", len(cands) * len(polys), what="line candidates")
    for line in cands:
        if all(line_meets(line, P) for P in polys):
            return line
    return None


# -- balls -------------------------------------------------------------------------------

WITNESS = "witness"
INCONCLUSIVE = "inconclusive"
NONE = "none"
NUMERIC_TOL = 1e-9


def kflat_stabs_ball(f: AxisFlat, ball: Ball) -> bool:
    """Exact: the squared distance from the center to the flat is at most r^2."""
    if f.d != ball.d:
        raise PreconditionError(f"dimension mismatch: flat {f.d}, ball {ball.d}")
    return sum((v - ball.center[j]) ** 2 for j, v in f.fixed) <= ball.radius ** 2


def balls_pairwise_meet(a: Ball, b: Ball) -> bool:
    """Exact test |c_a - c_b|^2 <= (r_a + r_b)^2."""
    _same_dim([a, b])
    return sum((x - y) ** 2 for x, y in zip(a.center, b.center)) <= (a.radius + b.radius) ** 2


@dataclass(frozen=True)
class NumericResult:
    """Outcome of a tolerance-based predicate.

    ``status`` is ``witness`` (clearly feasible), ``inconclusive`` (within the
    tolerance band, accepted) or ``none``; ``gap`` is the objective at the
    returned point (negative means slack).
    """

    status: str
    point: tuple[float, ...] | None
    gap: float
    tol: float

    @property
    def found(self) -> bool:
        return self.status != NONE


def _scale(balls: Sequence[Ball]) -> float:
    vals = [abs(float(c)) for b in balls for c in b.center] + [float(b.radius) for b in balls]
    return max([1.0] + vals)


def _classify(gap: float, tol: float) -> str:
    if gap <= -tol:
        return WITNESS
    if gap < tol:
        return INCONCLUSIVE
    return NONE


def ball_point_transversal(balls: Sequence[Ball]) -> NumericResult:
    """Decide whether the balls share a point by minimizing
    ``g(x) = max_i (|x - c_i| - r_i)``.

    Exact pairwise rejection runs first; the convex minimax is then solved as
    a smooth constrained problem and polished, and the final gap is evaluated
    directly at the returned point.
    """
    d = _same_dim(balls)
    if d > 3:
        raise PreconditionError(f"ball transversal implemented for d <= 3, got {d}")
    if not balls:
        return NumericResult(WITNESS, None, float("-inf"), 0.0)
    tol = NUMERIC_TOL * _scale(balls)
    C = np.array([[float(c) for c in b.center] for b in balls])
    R = np.array([float(b.radius) for b in balls])

    def g(x):
        return float(np.max(np.linalg.norm(C - x, axis=1) - R))

    for a, b in combinations(balls, 2):
        if not balls_pairwise_meet(a, b):
            x = np.mean(C, axis=0)
            return NumericResult(NONE, tuple(float(v) for v in x), max(g(x), tol), tol)
    if len(balls) == 1:
        return NumericResult(_classify(-float(R[0]), tol), tuple(float(v) for v in C[0]), -float(R[0]), tol)

    # minimize s subject to |x - c_i|^2 <= (r_i + s)^2 and r_i + s >= 0,
    # warm-started at the best center
    best = min(range(len(balls)), key=lambda i: g(C[i]))
    x0 = np.append(C[best], g(C[best]))
    cons = [
        {"type": "ineq", "fun": lambda z, i=i: (R[i] + z[-1]) ** 2 - np.sum((z[:-1] - C[i]) ** 2)}
        for i in range(len(balls))
    ] + [{"type": "ineq", "fun": lambda z, i=i: R[i] + z[-1]} for i in range(len(balls))]
    res = minimize(lambda z: z[-1], x0, constraints=cons, method="SLSQP",
                   options={"ftol": 1e-15, "maxiter": 500})
    candidates = [C[best], res.x[:-1]]
    polish = minimize(g, res.x[:-1], method="Nelder-Mead",
                      options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 4000})
    candidates.append(polish.x)
    x = min(candidates, key=g)
    gap = g(x)
    return NumericResult(_classify(gap, tol), tuple(float(v) for v in x), gap, tol)


def line_transversal_disks(balls: Sequence[Ball]) -> NumericResult:
    """Is there a line in the plane meeting every disk?

    For unit normal ``n`` the disks admit a common line with normal ``n`` iff
    ``|n.(c_i - c_j)| <= r_i + r_j`` for all pairs. Each pair allows a closed
    set of angles bounded by arcs; a nonempty intersection contains an arc
    endpoint, so only endpoints (and one default angle) need checking. Returns
    the best slack found as ``-gap``; ``point`` holds ``(angle, offset)``.
    """
    d = _same_dim(balls)
    if d != 2:
        raise PreconditionError("disk line transversals need d = 2")
    tol = NUMERIC_TOL * _scale(balls)
    C = [(float(b.center[0]), float(b.center[1])) for b in balls]
    R = [float(b.radius) for b in balls]
    angles = [0.0]
    for i, j in combinations(range(len(balls)), 2):
        wx, wy = C[i][0] - C[j][0], C[i][1] - C[j][1]
        w = math.hypot(wx, wy)
        rr = R[i] + R[j]
        if w <= rr or w == 0:
            continue
        phi = math.atan2(wy, wx)
        delta = math.acos(rr / w)
        # |cos(theta - phi)| <= rr / w holds at phi +- delta and phi + pi +- delta
        angles += [phi + delta, phi - delta, phi + math.pi + delta, phi + math.pi - delta]

    def slack(theta):
        nx, ny = math.cos(theta), math.sin(theta)
        lo = max(nx * c[0] + ny * c[1] - r for c, r in zip(C, R))
        hi = min(nx * c[0] + ny * c[1] + r for c, r in zip(C, R))
        return hi - lo, (lo + hi) / 2

    best_theta, best = None, None
    for th in angles:
        s, off = slack(th)
        if best is None or s > best[0]:
            best_theta, best = th, (s, off)
    gap = -best[0]
    return NumericResult(_classify(gap, tol), (best_theta, best[1]), gap, tol)
