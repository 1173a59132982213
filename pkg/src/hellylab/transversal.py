"""Piercing (tau), matching (nu), fractional transversal (tau*) and the
paired-intersection parameter lambda of set systems, with certificates.

Candidate transversals for boxes are canonical grids. Any point piercing a
set of boxes can slide down, coordinate by coordinate, to the largest lower
bound among those boxes without leaving any of them; so the grid of lower
bounds contains an optimal piercing set. The same argument applies to each
fixed coordinate of an axis-parallel flat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from hellylab import geometry, limits, lp
from hellylab.errors import InfeasibleError, SchemaError
from hellylab.geometry import AxisFlat, Box, VPolytope
from hellylab.hypergraph import Hypergraph, max_independent_in_graph


@dataclass(frozen=True)
class SetSystem:
    """Hypergraph with arbitrary edge sizes; edges are a list, so repeats are kept."""

    n_vertices: int
    edges: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class CoverInstance:
    """Targets to hit, candidate transversals, and ``hits[c][t]`` incidence."""

    targets: tuple
    candidates: tuple
    hits: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        hits = tuple(tuple(bool(x) for x in row) for row in self.hits)
        if len(hits) != len(self.candidates):
            raise SchemaError("hits needs one row per candidate")
        if any(len(row) != len(self.targets) for row in hits):
            raise SchemaError("hits rows need one entry per target")
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "hits", hits)
        unhit = [t for t in range(len(self.targets)) if not any(row[t] for row in hits)]
        if unhit:
            raise InfeasibleError(f"targets {unhit} are hit by no candidate")

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    @property
    def n_candidates(self) -> int:
        return len(self.candidates)

    def hit_sets(self) -> list[frozenset[int]]:
        """Targets hit by each candidate."""
        return [frozenset(t for t, h in enumerate(row) if h) for row in self.hits]

    def hitter_sets(self) -> list[frozenset[int]]:
        """Candidates hitting each target."""
        return [frozenset(c for c in range(self.n_candidates) if self.hits[c][t])
                for t in range(self.n_targets)]

    def dual(self) -> SetSystem:
        """Vertices are candidates; one edge per target, its hitter set."""
        return SetSystem(self.n_candidates, tuple(self.hitter_sets()))

    def to_json(self) -> dict:
        return {
            "targets": [_jsonable(t) for t in self.targets],
            "candidates": [_jsonable(c) for c in self.candidates],
            "hits": [list(row) for row in self.hits],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CoverInstance":
        try:
            return cls(doc["targets"], doc["candidates"], doc["hits"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad cover instance: {exc}") from None


def _jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, tuple) and x and isinstance(x[0], Fraction):
        from hellylab.rational import render_vector
        return render_vector(x)
    if isinstance(x, Fraction):
        from hellylab.rational import render
        return render(x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def cover_instance(targets: Sequence, candidates: Sequence, hits_fn) -> CoverInstance:
    limits.check("candidates", len(candidates))
    limits.check("targets", len(targets))
    hits = [[hits_fn(c, t) for t in targets] for c in candidates]
    return CoverInstance(tuple(targets), tuple(candidates), hits)


@dataclass(frozen=True)
class PiercingCertificate:
    chosen: tuple[int, ...]
    value: int

    def to_json(self) -> dict:
        return {"value": self.value, "chosen": list(self.chosen)}


def verify_certificate(inst: CoverInstance, cert: PiercingCertificate) -> bool:
    if len(cert.chosen) != cert.value or len(set(cert.chosen)) != cert.value:
        return False
    if any(not 0 <= c < inst.n_candidates for c in cert.chosen):
        return False
    return all(any(inst.hits[c][t] for c in cert.chosen) for t in range(inst.n_targets))


# -- candidate generators ------------------------------------------------------------


def candidate_points_boxes(boxes: Sequence[Box], limit: int | None = None) -> list[tuple[Fraction, ...]]:
    """The grid of lower-bound values, coordinate by coordinate."""
    if not boxes:
        return []
    d = geometry._same_dim(boxes)
    axes = [sorted({b.lo[j] for b in boxes}) for j in range(d)]
    limits.check("candidates", math.prod(len(a) for a in axes), limit, what="point candidates")
    return [tuple(p) for p in product(*axes)]


def candidate_axisflats(boxes: Sequence[Box], k: int, limit: int | None = None) -> list[AxisFlat]:
    """For every set of d-k fixed coordinates, the grid of lower-bound values on them."""
    if not boxes:
        return []
    d = geometry._same_dim(boxes)
    if not 0 <= k < d:
        raise geometry.PreconditionError(f"need 0 <= k < d, got k={k}, d={d}")
    axes = [sorted({b.lo[j] for b in boxes}) for j in range(d)]
    total = sum(math.prod(len(axes[j]) for j in D) for D in combinations(range(d), d - k))
    limits.check("candidates", total, limit, what="flat candidates")
    out = []
    for D in combinations(range(d), d - k):
        for vals in product(*(axes[j] for j in D)):
            out.append(AxisFlat(d, tuple(zip(D, vals))))
    return out


def candidate_lattice_points(objs: Sequence[Box | VPolytope], limit: int | None = None) -> list[tuple[Fraction, ...]]:
    """Every integer point lying in at least one of the sets."""
    seen = set()
    out = []
    for o in objs:
        for pt in geometry.integer_points(geometry.bounding_box(o), limit):
            if pt not in seen and geometry.contains(o, pt):
                seen.add(pt)
                out.append(pt)
    out.sort()
    limits.check("candidates", len(out), limit, what="lattice candidates")
    return out


def point_cover(boxes: Sequence[Box]) -> CoverInstance:
    pts = candidate_points_boxes(boxes)
    pts = [p for p in pts if any(b.contains(p) for b in boxes)]
    return cover_instance(boxes, pts, lambda p, b: b.contains(p))


def axisflat_cover(boxes: Sequence[Box], k: int) -> CoverInstance:
    flats = [f for f in candidate_axisflats(boxes, k) if any(geometry.axisflat_stabs_box(f, b) for b in boxes)]
    return cover_instance(boxes, flats, geometry.axisflat_stabs_box)


def lattice_cover(objs: Sequence[Box | VPolytope]) -> CoverInstance:
    pts = candidate_lattice_points(objs)
    return cover_instance(objs, pts, lambda p, o: geometry.contains(o, p))


def line_cover(polys: Sequence[VPolytope]) -> CoverInstance:
    polys = [geometry.as_polytope(P) for P in polys]
    lines = geometry.candidate_lines(polys)
    return cover_instance(polys, lines, geometry.line_meets)


# -- exact minimum hitting set -------------------------------------------------------------


def _reduce(hitters: list[frozenset[int]]) -> list[frozenset[int]]:
    """Drop targets implied by others: if hitters(a) <= hitters(b), covering a covers b."""
    uniq = sorted(set(hitters), key=lambda s: (len(s), sorted(s)))
    keep: list[frozenset[int]] = []
    for s in uniq:
        if not any(k <= s for k in keep):
            keep.append(s)
    return keep


def _packing_bound(sets: list[frozenset[int]]) -> int:
    """Greedy number of pairwise-disjoint hitter sets: a lower bound on tau."""
    used: set[int] = set()
    count = 0
    for s in sorted(sets, key=len):
        if used.isdisjoint(s):
            used |= s
            count += 1
    return count


def min_hitting_set(inst: CoverInstance, lp_root_bound: bool = True) -> PiercingCertificate:
    """Exact minimum number of candidates hitting every target.

    Branch and bound: branch on the unresolved target with the fewest hitters,
    trying its hitters in index order; bound by a greedy disjoint packing and,
    at the root, by the ceiling of the exact fractional optimum. The returned
    certificate is re-verified against the incidence matrix.
    """
    limits.check("candidates", inst.n_candidates)
    limits.check("targets", inst.n_targets)
    hitters = _reduce(inst.hitter_sets())
    budget = limits.NodeBudget("hitting set")

    # greedy upper bound
    greedy: list[int] = []
    left = list(hitters)
    while left:
        counts: dict[int, int] = {}
        for s in left:
            for c in s:
                counts[c] = counts.get(c, 0) + 1
        c = min(counts, key=lambda c: (-counts[c], c))
        greedy.append(c)
        left = [s for s in left if c not in s]
    best = [sorted(greedy)]

    root_lb = _packing_bound(hitters)
    if lp_root_bound and len(hitters) * len({c for s in hitters for c in s}) <= 40000:
        cols = sorted({c for s in hitters for c in s})
        M = [[int(c in s) for c in cols] for s in hitters]
        frac = lp.solve_covering(M).value
        root_lb = max(root_lb, math.ceil(frac))

    def search(chosen: list[int], open_sets: list[frozenset[int]]) -> None:
        budget.tick()
        if len(best[0]) <= root_lb:
            return
        if not open_sets:
            if len(chosen) < len(best[0]):
                best[0] = sorted(chosen)
            return
        if len(chosen) + _packing_bound(open_sets) >= len(best[0]):
            return
        target = min(open_sets, key=lambda s: (len(s), sorted(s)))
        for c in sorted(target):
            chosen.append(c)
            search(chosen, [s for s in open_sets if c not in s])
            chosen.pop()

    search([], hitters)
    cert = PiercingCertificate(tuple(best[0]), len(best[0]))
    if not verify_certificate(inst, cert):
        raise AssertionError("hitting-set certificate failed verification")
    return cert


def brute_force_tau(inst: CoverInstance) -> int:
    """Smallest k such that some k candidates hit everything (oracle, small instances only)."""
    for k in range(inst.n_candidates + 1):
        for combo in combinations(range(inst.n_candidates), k):
            if all(any(inst.hits[c][t] for c in combo) for t in range(inst.n_targets)):
                return k
    raise InfeasibleError("no cover exists")


# -- fractional transversal ------------------------------------------------------------------


@dataclass(frozen=True)
class FractionalTransversal:
    value: Fraction
    weights: tuple[Fraction, ...]
    packing: tuple[Fraction, ...]
    packing_value: Fraction


def fractional_transversal(inst: CoverInstance, limit: int | None = None) -> FractionalTransversal:
    """tau* by exact LP, with the optimal fractional packing of targets (nu*).

    Primal and dual are solved separately and checked for feasibility and equal
    optima.
    """
    M = [[int(inst.hits[c][t]) for c in range(inst.n_candidates)] for t in range(inst.n_targets)]
    sol = lp.solve_covering(M, limit)
    lp.check_covering_certificate(M, sol)
    return FractionalTransversal(sol.value, tuple(sol.primal), tuple(sol.dual), sol.dual_value)


# -- matching number and lambda ----------------------------------------------------------------


def _as_edges(obj) -> list[frozenset]:
    if isinstance(obj, CoverInstance):
        return list(obj.hitter_sets())
    if isinstance(obj, SetSystem):
        return list(obj.edges)
    if isinstance(obj, Hypergraph):
        return [frozenset(e) for e in sorted(obj.edge_indices)]
    return [frozenset(e) for e in obj]


def matching_number(obj, limit: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Maximum number of pairwise-disjoint edges, with the edge indices.

    For a cover instance the edges are the targets' hitter sets (the dual
    hypergraph), so this is the largest set of targets no candidate hits twice.
    """
    edges = _as_edges(obj)
    conflicts = [(i, j) for i, j in combinations(range(len(edges)), 2) if edges[i] & edges[j]]
    cap = limit if limit is not None else max(limits.get_limit("vertices"), 200)
    chosen = max_independent_in_graph(len(edges), conflicts, cap)
    return len(chosen), chosen


def private_pairs_ok(edges: Sequence[frozenset], chosen: Sequence[int]) -> bool:
    """Every two chosen edges share a vertex lying in no other chosen edge."""
    for a, b in combinations(chosen, 2):
        others = set().union(*(edges[l] for l in chosen if l != a and l != b))
        if not (edges[a] & edges[b]) - others:
            return False
    return True


def lambda_dsw(obj, limit: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Largest family of edges in which every pair has a private common vertex.

    The property is inherited by subfamilies, so the search grows families in
    index order, keeps only candidates meeting every chosen edge, and re-checks
    the private condition after each addition.
    """
    edges = _as_edges(obj)
    m = len(edges)
    limits.check("lambda", m, limit, what="lambda edges")
    if m == 0:
        return 0, ()
    budget = limits.NodeBudget("lambda")
    best: list[tuple[int, ...]] = [(0,)]

    def extend(chosen: list[int], cand: list[int]) -> None:
        budget.tick()
        if len(chosen) > len(best[0]):
            best[0] = tuple(chosen)
        for pos, v in enumerate(cand):
            if len(chosen) + len(cand) - pos <= len(best[0]):
                return
            chosen.append(v)
            if private_pairs_ok(edges, chosen):
                extend(chosen, [u for u in cand[pos + 1:] if edges[u] & edges[v]])
            chosen.pop()

    extend([], list(range(m)))
    return len(best[0]), best[0]


def lambda_bruteforce(obj) -> int:
    """All-subsets oracle for lambda."""
    edges = _as_edges(obj)
    best = 0
    for r in range(1, len(edges) + 1):
        if any(private_pairs_ok(edges, c) for c in combinations(range(len(edges)), r)):
            best = r
    return best


def dual_box_flat_hypergraph(boxes: Sequence[Box], k: int) -> tuple[list[AxisFlat], SetSystem]:
    """Vertices are candidate axis-parallel k-flats; one edge per box, the flats meeting it."""
    flats = candidate_axisflats(boxes, k)
    edges = tuple(frozenset(i for i, f in enumerate(flats) if geometry.axisflat_stabs_box(f, b)) for b in boxes)
    return flats, SetSystem(len(flats), edges)


def dual_cover(boxes: Sequence[Box], k: int) -> CoverInstance:
    flats = candidate_axisflats(boxes, k)
    return cover_instance(boxes, flats, geometry.axisflat_stabs_box)
