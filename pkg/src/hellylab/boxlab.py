"""Procedures specific to axis-parallel boxes.

Depth-based clique numbers, the fractional Helly bound for boxes, the
cross-intersecting families experiment, consistently ordered triples,
private intersection points and the reduction from k-flats to points by
deleting coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from hellylab import geometry, limits
from hellylab.errors import HellyLabError, PreconditionError
from hellylab.geometry import Box
from hellylab.hypergraph import Hypergraph, clique_number


def _max_depth(boxes: list[tuple[int, Box]], dim: int, d: int, point: list) -> tuple[int, list, list[int]]:
    if dim == d:
        return len(boxes), list(point), [i for i, _ in boxes]
    best = (0, None, [])
    for v in sorted({b.lo[dim] for _, b in boxes}):
        sub = [(i, b) for i, b in boxes if b.lo[dim] <= v <= b.hi[dim]]
        if len(sub) <= best[0]:
            continue
        point.append(v)
        res = _max_depth(sub, dim + 1, d, point)
        point.pop()
        if res[0] > best[0]:
            best = res
    return best


def box_clique_number(boxes: Sequence[Box], limit: int | None = None) -> tuple[int, tuple[Fraction, ...] | None, list[int]]:
    """Largest number of boxes sharing a point, the point, and those boxes.

    Depth is maximized over the grid of lower bounds, one coordinate at a time.
    Boxes intersect pairwise iff they share a point, so this is also the
    clique number of the intersection graph.
    """
    if not boxes:
        return 0, None, []
    d = geometry._same_dim(boxes)
    limits.check("enumeration", len(boxes) ** d, limit, what="depth grid")
    n, pt, members = _max_depth(list(enumerate(boxes)), 0, d, [])
    return n, tuple(pt), members


def intersection_graph(boxes: Sequence[Box]) -> Hypergraph:
    n = len(boxes)
    edges = [(str(i), str(j)) for i, j in combinations(range(n), 2) if geometry.boxes_intersect([boxes[i], boxes[j]])]
    return Hypergraph(2, [str(i) for i in range(n)], edges)


def intersecting_pair_density(boxes: Sequence[Box]) -> Fraction:
    n = len(boxes)
    count = sum(1 for a, b in combinations(boxes, 2) if geometry.boxes_intersect([a, b]))
    return Fraction(count, comb(n, 2))


def bound_holds(alpha: Fraction, omega: int, n: int, d: int) -> bool:
    """Exact test of  omega/n >= 1 - d*sqrt(1 - alpha)."""
    gap = 1 - Fraction(omega, n)
    return gap <= 0 or d * d * (1 - alpha) >= gap * gap


@dataclass(frozen=True)
class FracHellyReport:
    n: int
    d: int
    alpha: Fraction
    omega: int
    applicable: bool
    bound_holds: bool | None

    def to_json(self) -> dict:
        from hellylab.rational import render
        return {"n": self.n, "d": self.d, "alpha": render(self.alpha), "omega": self.omega,
                "applicable": self.applicable, "bound_holds": self.bound_holds}


def frac_helly_box_check(boxes: Sequence[Box]) -> FracHellyReport:
    """Density of intersecting pairs, largest common-point family, and, when
    alpha > 1 - 1/d^2, whether omega/n >= 1 - d*sqrt(1 - alpha)."""
    n = len(boxes)
    if n < 2:
        raise PreconditionError("need at least two boxes")
    d = geometry._same_dim(boxes)
    alpha = intersecting_pair_density(boxes)
    omega = box_clique_number(boxes)[0]
    applicable = alpha > 1 - Fraction(1, d * d)
    holds = bound_holds(alpha, omega, n, d) if applicable else None
    return FracHellyReport(n, d, alpha, omega, applicable, holds)


def random_dense_boxes(rng: random.Random, n: int, d: int, spread: int = 100) -> list[Box]:
    """Boxes with integer corners, most of them around a common core, the rest scattered."""
    boxes = []
    core = spread // 2
    outliers = rng.randint(0, max(1, n // 6))
    for i in range(n):
        lo, hi = [], []
        for _ in range(d):
            if i < outliers:
                a = rng.randint(0, spread)
                b = a + rng.randint(0, spread // 5)
            else:
                a = rng.randint(0, core)
                b = rng.randint(core - rng.randint(0, spread // 8), spread)
                a, b = min(a, b), max(a, b)
            lo.append(a)
            hi.append(b)
        boxes.append(Box(tuple(lo), tuple(hi)))
    rng.shuffle(boxes)
    return boxes


# -- cross-intersecting families ---------------------------------------------------------------


def cross_intersecting_families(s: int, t: int, d: int, rng: random.Random, adversarial: bool = False) -> list[list[Box]]:
    """s families of t boxes in which every two boxes from different families intersect.

    Boxes start small and scattered (far apart along the diagonal per family
    member when ``adversarial``); every disjoint cross-family pair is then
    repaired by growing both boxes until they meet in the separating
    coordinates. Boxes only grow, so repaired pairs stay repaired.
    """
    size = 10 * s * t
    fams: list[list[list[list[Fraction]]]] = []
    for f in range(s):
        fam = []
        for m in range(t):
            if adversarial:
                base = [Fraction(size * m + rng.randint(0, size // 2)) for _ in range(d)]
            else:
                base = [Fraction(rng.randint(0, size)) for _ in range(d)]
            lo = base
            hi = [x + rng.randint(0, 3) for x in base]
            fam.append([lo, hi])
        fams.append(fam)

    flat = [(f, m) for f in range(s) for m in range(t)]
    changed = True
    while changed:
        changed = False
        for (f1, m1), (f2, m2) in combinations(flat, 2):
            if f1 == f2:
                continue
            A, B = fams[f1][m1], fams[f2][m2]
            for j in range(d):
                if A[0][j] > B[1][j]:
                    A, B = B, A
                if A[1][j] < B[0][j]:
                    mid = (A[1][j] + B[0][j]) / 2
                    A[1][j] = mid
                    B[0][j] = mid
                    changed = True
    return [[Box(tuple(lo), tuple(hi)) for lo, hi in fam] for fam in fams]


def claim17_alpha_floor(s: int, t: int) -> Fraction:
    """Fraction of intersecting pairs forced by cross-intersection alone: (s-1)/(s-1/t)."""
    return Fraction(s - 1) / (s - Fraction(1, t))


def clique_bound_exceeds_s(alpha: Fraction, s: int, t: int, d: int) -> bool:
    """Exact test of (1 - d*sqrt(1 - alpha)) * s * t > s."""
    lhs = 1 - Fraction(1, t)
    return lhs > 0 and lhs * lhs > d * d * (1 - alpha)


@dataclass
class Claim17Report:
    s: int
    t: int
    d: int
    seed: int
    alpha: Fraction
    alpha_floor: Fraction
    alpha_ok: bool
    omega: int
    bound_exceeds_s: bool
    witness_pair: tuple[tuple[int, int], tuple[int, int]] | None
    clique_witness_pair: tuple[tuple[int, int], tuple[int, int]] | None

    @property
    def ok(self) -> bool:
        if not self.alpha_ok:
            return False
        if self.bound_exceeds_s:
            return self.witness_pair is not None and self.clique_witness_pair is not None
        return True

    def to_json(self) -> dict:
        from hellylab.rational import render
        return {
            "s": self.s, "t": self.t, "d": self.d, "seed": self.seed,
            "alpha": render(self.alpha), "alpha_floor": render(self.alpha_floor),
            "alpha_ok": self.alpha_ok, "omega": self.omega,
            "bound_exceeds_s": self.bound_exceeds_s,
            "witness_pair": [list(p) for p in self.witness_pair] if self.witness_pair else None,
            "ok": self.ok,
        }


def claim17_experiment(s: int, t: int, d: int, seed: int, adversarial: bool = False) -> Claim17Report:
    """Generate cross-intersecting families and look for two intersecting boxes
    from the same family.

    Reports the exact pair density against (s-1)/(s-1/t), the largest
    common-point family, whether the fractional Helly bound forces a clique
    larger than s, the first same-family intersecting pair by scan, and a
    same-family pair taken from the maximum clique.
    """
    limits.check("enumeration", (s * t) ** 2, what="claim17 boxes")
    rng = random.Random(seed)
    fams = cross_intersecting_families(s, t, d, rng, adversarial)
    boxes = [b for fam in fams for b in fam]
    owner = [(f, m) for f in range(s) for m in range(t)]
    alpha = intersecting_pair_density(boxes)
    floor = claim17_alpha_floor(s, t)
    omega, _, members = box_clique_number(boxes)
    exceeds = clique_bound_exceeds_s(alpha, s, t, d)

    pair = None
    for f in range(s):
        for a, b in combinations(range(t), 2):
            if geometry.boxes_intersect([fams[f][a], fams[f][b]]):
                pair = ((f, a), (f, b))
                break
        if pair:
            break

    clique_pair = None
    by_family: dict[int, tuple[int, int]] = {}
    for i in members:
        f, m = owner[i]
        if f in by_family:
            clique_pair = (by_family[f], (f, m))
            break
        by_family[f] = (f, m)
    return Claim17Report(s, t, d, seed, alpha, floor, alpha >= floor, omega, exceeds, pair, clique_pair)


# -- consistently ordered triples --------------------------------------------------------------------


@dataclass(frozen=True)
class BoxOrderings:
    """For every coordinate j: boxes ranked by lower bound (sign +) and by
    upper bound (sign -), ties broken by index. ``rank[(j, sign)][i]`` is the
    position of box i."""

    d: int
    rank: dict

    @classmethod
    def of(cls, boxes: Sequence[Box]) -> "BoxOrderings":
        d = geometry._same_dim(boxes)
        rank = {}
        for j in range(d):
            for sign, key in (("+", lambda i: (boxes[i].lo[j], i)), ("-", lambda i: (boxes[i].hi[j], i))):
                order = sorted(range(len(boxes)), key=key)
                rank[(j, sign)] = {i: pos for pos, i in enumerate(order)}
        return cls(d, rank)

    def middle(self, triple: Sequence[int], j: int, sign: str) -> int:
        r = self.rank[(j, sign)]
        return sorted(triple, key=r.__getitem__)[1]


def containment_certificate(first: Box, middle: Box, last: Box) -> bool:
    """Exact check that first ∩ last ⊆ middle."""
    inter = geometry.box_intersection([first, last])
    if inter is None:
        return True
    return all(middle.lo[j] <= inter.lo[j] and inter.hi[j] <= middle.hi[j] for j in range(first.d))


@dataclass(frozen=True)
class ConsistentTriple:
    first: int
    middle: int
    last: int
    certified: bool


def is_consistent(orders: BoxOrderings, triple: Sequence[int]) -> int | None:
    """The common middle box if the same box sits in the middle of all 2d orders."""
    mids = {orders.middle(triple, j, s) for j in range(orders.d) for s in "+-"}
    return mids.pop() if len(mids) == 1 else None


def consistent_triple(boxes: Sequence[Box], limit: int | None = None) -> ConsistentTriple | None:
    """First triple (lexicographic) whose middle box is the same in every
    coordinate ordering, with the containment first ∩ last ⊆ middle checked.

    Middle in every order means each lower and upper bound of the middle box
    lies between those of the other two, which is what the containment needs;
    both nested and staircase triples qualify.
    """
    n = len(boxes)
    if n < 3:
        raise PreconditionError("need at least three boxes")
    limits.check("enumeration", comb(n, 3), limit, what="triple scan")
    orders = BoxOrderings.of(boxes)
    for triple in combinations(range(n), 3):
        mid = is_consistent(orders, triple)
        if mid is None:
            continue
        a, c = sorted((i for i in triple if i != mid), key=orders.rank[(0, "+")].__getitem__)
        cert = containment_certificate(boxes[a], boxes[mid], boxes[c])
        if not cert:
            raise AssertionError(f"consistent triple {triple} failed its containment certificate")
        return ConsistentTriple(a, mid, c, cert)
    return None


# -- private intersection points ------------------------------------------------------------------------


def _cell_points(values: list[Fraction]) -> list[Fraction]:
    """One representative per elementary piece of the line: each breakpoint
    and the midpoint of each gap (closed boxes are constant on these)."""
    vs = sorted(set(values))
    out = []
    for i, v in enumerate(vs):
        out.append(v)
        if i + 1 < len(vs):
            out.append((v + vs[i + 1]) / 2)
    return out


def private_point_matrix(boxes: Sequence[Box], limit: int | None = None) -> list[list[bool]]:
    """``M[i][j]`` (i != j): B_i ∩ B_j has a point in no other box.
    ``M[i][i]``: B_i has a point in no other box.

    Decided exactly over the cell decomposition induced by all box bounds.
    """
    n = len(boxes)
    if n == 0:
        return []
    d = geometry._same_dim(boxes)
    axes = [_cell_points([b.lo[j] for b in boxes] + [b.hi[j] for b in boxes]) for j in range(d)]
    total = 1
    for a in axes:
        total *= len(a)
    limits.check("enumeration", total, limit, what="private-point cells")
    M = [[False] * n for _ in range(n)]

    def walk(dim: int, inside: list[int]) -> None:
        if not inside:
            return
        if dim == d:
            if len(inside) == 1:
                M[inside[0]][inside[0]] = True
            elif len(inside) == 2:
                i, j = inside
                M[i][j] = M[j][i] = True
            return
        for v in axes[dim]:
            walk(dim + 1, [i for i in inside if boxes[i].lo[dim] <= v <= boxes[i].hi[dim]])

    walk(0, list(range(n)))
    return M


# -- reduction from flats to points ------------------------------------------------------------------


@dataclass
class DirectionReduction:
    free: tuple[int, ...]
    members: list[int]
    projected: list[Box] = field(default_factory=list)


def project_out(box: Box, free: Sequence[int]) -> Box:
    keep = [j for j in range(box.d) if j not in set(free)]
    return Box(tuple(box.lo[j] for j in keep), tuple(box.hi[j] for j in keep))


def direction_reduction(boxes: Sequence[Box], k: int, min_size: int | None = None,
                        limit: int | None = None) -> DirectionReduction:
    """Largest subfamily whose pairs are all met by translates of one
    axis-parallel k-flat direction, found exhaustively.

    A direction is a set W of k free coordinates; two boxes are met by a
    translate of it iff they overlap in every other coordinate. For each W the
    largest such subfamily is a maximum clique of the overlap graph; ties go
    to the first W. Members are projected by deleting the coordinates in W.
    """
    d = geometry._same_dim(boxes)
    if not 0 <= k < d:
        raise PreconditionError(f"need 0 <= k < d, got k={k}, d={d}")
    n = len(boxes)
    best: DirectionReduction | None = None
    for free in combinations(range(d), k):
        fixed = [j for j in range(d) if j not in free]
        edges = []
        for a, b in combinations(range(n), 2):
            if all(max(boxes[a].lo[j], boxes[b].lo[j]) <= min(boxes[a].hi[j], boxes[b].hi[j]) for j in fixed):
                edges.append((str(a), str(b)))
        g = Hypergraph(2, [str(i) for i in range(n)], edges)
        size, members = clique_number(g, limit)
        if best is None or size > len(best.members):
            best = DirectionReduction(free, [int(v) for v in members])
    if min_size is not None and len(best.members) < min_size:
        raise HellyLabError(f"largest single-direction subfamily has {len(best.members)} boxes, {min_size} requested")
    best.projected = [project_out(boxes[i], best.free) for i in best.members]
    return best
