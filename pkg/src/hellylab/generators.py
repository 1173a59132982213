"""Seeded instance generators.

Every generator takes an explicit seed and draws from ``random.Random(seed)``
(Mersenne Twister), so output is reproducible byte for byte.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from hellylab import boxlab, geometry
from hellylab.errors import PreconditionError
from hellylab.geometry import Box, VPolytope, interval
from hellylab.hypergraph import Hypergraph

RNG_ALGORITHM = "python-random-mt19937"
FORMAT_VERSION = "1"


def _frac(rng: random.Random, lo: int, hi: int, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def disjoint_intervals(n: int, seed: int) -> list[Box]:
    """n pairwise disjoint closed intervals, left to right, with random gaps."""
    rng = random.Random(seed)
    out, x = [], Fraction(0)
    for _ in range(n):
        a = x + _frac(rng, 1, 3)
        b = a + _frac(rng, 0, 4)
        out.append(interval(a, b))
        x = b
    return out


def nested(n: int, seed: int, d: int = 1) -> list[Box]:
    """A chain B_0 ⊇ B_1 ⊇ ... of n boxes, each shrinking by random margins."""
    rng = random.Random(seed)
    lo = [Fraction(0)] * d
    hi = [Fraction(8 * n)] * d
    out = []
    for _ in range(n):
        out.append(Box(tuple(lo), tuple(hi)))
        lo = [a + _frac(rng, 0, 2) for a in lo]
        hi = [max(b - _frac(rng, 0, 2), a) for a, b in zip(lo, hi)]
    return out


def counterexample_1d(n: int, m: int, seed: int) -> tuple[list[Box], list[list[int]]]:
    """Family F_0 of n disjoint intervals B_i, then families F_1..F_n where
    F_{i+1} holds m disjoint intervals inside B_i.

    Returns all intervals and the index lists of the n + 1 families.
    """
    if n < 1 or m < 1:
        raise PreconditionError("counterexample needs n, m >= 1")
    rng = random.Random(seed)
    objs: list[Box] = []
    families: list[list[int]] = [list(range(n))]
    for i in range(n):
        objs.append(interval(10 * i, 10 * i + 8))
    for i in range(n):
        fam = []
        cuts = sorted(rng.sample(range(1, 8 * 4 * m), 2 * m))
        for a, b in zip(cuts[::2], cuts[1::2]):
            fam.append(len(objs))
            objs.append(interval(10 * i + Fraction(a, 4 * m), 10 * i + Fraction(b, 4 * m)))
        families.append(fam)
    return objs, families


def claim17_boxes(s: int, t: int, d: int, seed: int, adversarial: bool = False) -> tuple[list[Box], list[list[int]]]:
    fams = boxlab.cross_intersecting_families(s, t, d, random.Random(seed), adversarial)
    objs, idx = [], []
    for fam in fams:
        idx.append(list(range(len(objs), len(objs) + len(fam))))
        objs.extend(fam)
    return objs, idx


def matching_complement(n: int) -> Hypergraph:
    """Graph on n vertices with every pair an edge except {2i, 2i+1}."""
    labels = [str(i) for i in range(n)]
    edges = [(a, b) for a, b in combinations(range(n), 2) if not (a // 2 == b // 2 and a % 2 == 0 and b == a + 1)]
    return Hypergraph._from_indices(2, tuple(labels), edges)


def random_boxes(n: int, d: int, seed: int, spread: int = 20) -> list[Box]:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        lo = [_frac(rng, 0, spread) for _ in range(d)]
        hi = [a + _frac(rng, 0, spread // 2) for a in lo]
        out.append(Box(tuple(lo), tuple(hi)))
    return out


def random_polytopes(n: int, d: int, seed: int, spread: int = 20, points: int = 4) -> list[VPolytope]:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        base = [rng.randint(0, spread) for _ in range(d)]
        pts = [tuple(Fraction(b + rng.randint(0, spread // 2)) for b in base) for _ in range(points)]
        out.append(VPolytope(tuple(pts)))
    return out


def lattice_triple_boxes(n: int, seed: int, size: int = 6, tries: int = 2000) -> list[Box]:
    """n planar boxes in which every three share a lattice point.

    Boxes with quarter-integer corners are drawn at random and kept only when
    every triple they complete has a common lattice point.
    """
    rng = random.Random(seed)
    out: list[Box] = []
    for _ in range(tries):
        if len(out) == n:
            return out
        lo = [_frac(rng, 0, size) for _ in range(2)]
        hi = [a + _frac(rng, 1, size) for a in lo]
        b = Box(tuple(lo), tuple(hi))
        if geometry.lattice_point_in_intersection([b]) is None:
            continue
        if all(geometry.lattice_point_in_intersection([b, x]) is not None for x in out) and \
                all(geometry.lattice_point_in_intersection([b, x, y]) is not None for x, y in combinations(out, 2)):
            out.append(b)
    raise PreconditionError(f"could not place {n} boxes within {tries} draws")


GENERATORS = ("disjoint-intervals", "nested", "counterexample-1d", "claim17-boxes",
              "matching-complement", "random-boxes", "random-polytopes", "lattice-boxes")


def generate(kind: str, n: int = 5, seed: int = 0, d: int = 1, s: int = 9, t: int = 2,
             m: int = 3) -> dict:
    """Instance-file document for a named generator."""
    header = {"kind": kind, "seed": seed, "rng": RNG_ALGORITHM}
    doc: dict = {"version": FORMAT_VERSION, "generator": header}
    if kind == "disjoint-intervals":
        objs = disjoint_intervals(n, seed)
        doc["spec"] = {"kind": "convex", "d": 1}
    elif kind == "nested":
        objs = nested(n, seed, d)
        doc["spec"] = {"kind": "convex", "d": d}
    elif kind == "counterexample-1d":
        objs, fams = counterexample_1d(n, m, seed)
        doc["spec"] = {"kind": "convex", "d": 1}
        doc["families"] = fams
    elif kind == "claim17-boxes":
        objs, fams = claim17_boxes(s, t, d, seed)
        doc["spec"] = {"kind": "convex", "d": d}
        doc["families"] = fams
    elif kind == "matching-complement":
        doc["hypergraph"] = matching_complement(n).to_json()
        return doc
    elif kind == "random-boxes":
        objs = random_boxes(n, d, seed)
        doc["spec"] = {"kind": "convex", "d": d}
    elif kind == "random-polytopes":
        objs = random_polytopes(n, d, seed)
        doc["spec"] = {"kind": "convex", "d": d}
    elif kind == "lattice-boxes":
        objs = lattice_triple_boxes(n, seed)
        doc["spec"] = {"kind": "lattice", "d": 2}
    else:
        raise PreconditionError(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")
    doc["objects"] = [o.to_json() for o in objs]
    return doc
