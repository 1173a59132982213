"""q-uniform nerves of finite geometric families and (p,q)-condition checks."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb
from typing import Sequence

from hellylab import geometry, limits, transversal
from hellylab.errors import PreconditionError
from hellylab.geometry import Ball, Box, VPolytope
from hellylab.hypergraph import Hypergraph, independence_number


class NerveKind(str, Enum):
    CONVEX_POINT = "convex"
    BOX_AXISFLAT = "boxflat"
    BALL_KFLAT = "ballflat"
    LATTICE = "lattice"
    POLYGON_LINE = "polyline"


@dataclass(frozen=True)
class NerveSpec:
    """Which nerve to build.

    ``q`` defaults to the uniformity the kind calls for: d+1 for common points
    and lattice points, 2 for boxes vs axis-parallel k-flats, k+2 for balls vs
    k-flats. Line transversals of planar polygons take any q >= 2 (default 3).
    """

    kind: NerveKind
    d: int
    k: int | None = None
    q: int | None = None

    def __post_init__(self):
        kind = NerveKind(self.kind)
        object.__setattr__(self, "kind", kind)
        d, k, q = self.d, self.k, self.q
        if d < 1:
            raise PreconditionError("dimension must be positive")
        if kind in (NerveKind.CONVEX_POINT, NerveKind.LATTICE):
            want = d + 1
        elif kind is NerveKind.BOX_AXISFLAT:
            if k is None or not 0 <= k < d:
                raise PreconditionError(f"boxflat needs 0 <= k < d, got k={k}")
            want = 2
        elif kind is NerveKind.BALL_KFLAT:
            if k is None or not (k == 0 or (d == 2 and k == 1)):
                raise PreconditionError("ballflat supports k = 0 (any d <= 3) or d = 2, k = 1")
            want = k + 2
        else:
            if d != 2:
                raise PreconditionError("polyline nerves are planar (d = 2)")
            want = q if q is not None else 3
        if q is None:
            object.__setattr__(self, "q", want)
        elif q != want:
            raise PreconditionError(f"{kind.value} with d={d}, k={k} has q={want}, got q={q}")
        if self.q < 2:
            raise PreconditionError("q must be at least 2")


@dataclass
class NerveReport:
    """A nerve together with the q-subsets whose numeric predicate fell in the
    tolerance band (accepted as edges)."""

    hypergraph: Hypergraph
    inconclusive: list[tuple[int, ...]]


def _check_kind(obj, spec: NerveSpec) -> None:
    ok = {
        NerveKind.CONVEX_POINT: (Box, VPolytope, Ball),
        NerveKind.BOX_AXISFLAT: (Box,),
        NerveKind.BALL_KFLAT: (Ball,),
        NerveKind.LATTICE: (Box, VPolytope),
        NerveKind.POLYGON_LINE: (Box, VPolytope),
    }[spec.kind]
    if not isinstance(obj, ok):
        raise PreconditionError(f"{type(obj).__name__} does not fit a {spec.kind.value} nerve")
    if obj.d != spec.d:
        raise PreconditionError(f"object of dimension {obj.d} in a d={spec.d} nerve")


def _predicate(objs: Sequence, spec: NerveSpec) -> tuple[bool, bool]:
    """(is_edge, inconclusive) for one q-subset."""
    kind = spec.kind
    if kind is NerveKind.CONVEX_POINT:
        if all(isinstance(o, Box) for o in objs):
            return geometry.boxes_intersect(objs), False
        if any(isinstance(o, Ball) for o in objs):
            if not all(isinstance(o, Ball) for o in objs):
                raise PreconditionError("cannot mix balls with polytopes")
            r = geometry.ball_point_transversal(objs)
            return r.found, r.status == geometry.INCONCLUSIVE
        return geometry.polytopes_intersect(objs), False
    if kind is NerveKind.BOX_AXISFLAT:
        return geometry.axisflat_transversal(objs, spec.k) is not None, False
    if kind is NerveKind.BALL_KFLAT:
        if spec.k == 0:
            return geometry.balls_pairwise_meet(*objs), False
        r = geometry.line_transversal_disks(objs)
        return r.found, r.status == geometry.INCONCLUSIVE
    if kind is NerveKind.LATTICE:
        return geometry.lattice_point_in_intersection(objs) is not None, False
    return geometry.line_transversal_polygons(objs) is not None, False


def nerve_report(family: Sequence, spec: NerveSpec, limit: int | None = None) -> NerveReport:
    """Build the q-uniform nerve, tracking tolerance-band decisions.

    q-subsets are visited in lexicographic order and each predicate is
    evaluated once.
    """
    for o in family:
        _check_kind(o, spec)
    n, q = len(family), spec.q
    limits.check("enumeration", comb(n, q), limit, what="nerve q-subsets")
    edges, flagged = [], []
    for sub in combinations(range(n), q):
        is_edge, unsure = _predicate([family[i] for i in sub], spec)
        if is_edge:
            edges.append(sub)
        if unsure:
            flagged.append(sub)
    labels = tuple(str(i) for i in range(n))
    return NerveReport(Hypergraph._from_indices(q, labels, edges), flagged)


def build_nerve(family: Sequence, spec: NerveSpec, limit: int | None = None) -> Hypergraph:
    """Vertex ``str(i)`` per object; a q-subset is an edge iff the kind's
    transversal predicate holds for it."""
    return nerve_report(family, spec, limit).hypergraph


def pq_condition(h: Hypergraph, p: int, limit: int | None = None) -> tuple[bool, tuple[str, ...] | None]:
    """True iff every p vertices span an edge (independence number < p).

    When false, returns an independent set of size p.
    """
    alpha, witness = independence_number(h, limit)
    if alpha < p:
        return True, None
    return False, witness[:p]


@dataclass(frozen=True)
class GrowthRow:
    size: int
    independence: int
    tau: int | None


def piercing_number(family: Sequence, spec: NerveSpec) -> int | None:
    """tau of the family by the spec's transversal objects, where a candidate
    set is available (boxes by points or flats, lattice points, lines)."""
    if not family:
        return 0
    kind = spec.kind
    if kind is NerveKind.CONVEX_POINT and all(isinstance(o, Box) for o in family):
        inst = transversal.point_cover(family)
    elif kind is NerveKind.BOX_AXISFLAT:
        inst = transversal.axisflat_cover(family, spec.k)
    elif kind is NerveKind.LATTICE:
        inst = transversal.lattice_cover(family)
    elif kind is NerveKind.POLYGON_LINE:
        inst = transversal.line_cover(family)
    else:
        return None
    return transversal.min_hitting_set(inst).value


def truncation_growth_report(family: Sequence, spec: NerveSpec, prefixes: Sequence[int],
                             with_tau: bool = True) -> list[GrowthRow]:
    """Independence number (and piercing number) of the nerve of each prefix."""
    rows = []
    for size in prefixes:
        sub = list(family[:size])
        h = build_nerve(sub, spec)
        alpha = independence_number(h)[0] if h.n else 0
        tau = piercing_number(sub, spec) if with_tau else None
        rows.append(GrowthRow(size, alpha, tau))
    return rows
