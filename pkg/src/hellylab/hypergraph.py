"""Finite q-uniform hypergraphs.

Vertices carry opaque string labels and are mapped to dense indices at
construction; edges are stored as sorted index tuples, so iteration order is
reproducible. Exhaustive searches are branch-and-bound with hard caps (see
:mod:`hellylab.limits`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from hellylab import limits
from hellylab.errors import PreconditionError, SchemaError


class Hypergraph:
    """Immutable q-uniform hypergraph with labelled vertices."""

    __slots__ = ("q", "vertices", "_index", "_edges")

    def __init__(self, q: int, vertices: Iterable, edges: Iterable[Iterable] = ()):
        if not isinstance(q, int) or q < 1:
            raise SchemaError(f"uniformity must be a positive integer, got {q!r}")
        self.q = q
        self.vertices = tuple(str(v) for v in vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise SchemaError("duplicate vertex labels")
        es = set()
        for e in edges:
            idx = self._indices(e)
            if len(set(idx)) != q or len(idx) != q:
                raise SchemaError(f"edge {list(e)!r} does not have exactly {q} distinct vertices")
            es.add(tuple(sorted(idx)))
        self._edges = frozenset(es)

    @classmethod
    def _from_indices(cls, q: int, vertices: tuple[str, ...], edges: Iterable[tuple[int, ...]]):
        h = cls.__new__(cls)
        h.q = q
        h.vertices = vertices
        h._index = {v: i for i, v in enumerate(vertices)}
        h._edges = frozenset(edges)
        return h

    def _indices(self, labels: Iterable) -> tuple[int, ...]:
        try:
            return tuple(self._index[str(v)] for v in labels)
        except KeyError as exc:
            raise SchemaError(f"unknown vertex {exc.args[0]!r}") from None

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def edge_indices(self) -> frozenset[tuple[int, ...]]:
        return self._edges

    @property
    def edges(self) -> list[tuple[str, ...]]:
        """Edges as label tuples, in sorted index order."""
        return [tuple(self.vertices[i] for i in e) for e in sorted(self._edges)]

    def num_edges(self) -> int:
        return len(self._edges)

    def index(self, label) -> int:
        return self._indices([label])[0]

    def has_edge(self, labels: Iterable) -> bool:
        return tuple(sorted(self._indices(labels))) in self._edges

    def spans_edge(self, labels: Iterable) -> bool:
        """True iff some edge lies inside the given vertex set."""
        idx = sorted(set(self._indices(labels)))
        if len(idx) < self.q:
            return False
        if comb(len(idx), self.q) <= len(self._edges):
            return any(c in self._edges for c in combinations(idx, self.q))
        s = set(idx)
        return any(s.issuperset(e) for e in self._edges)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.q == other.q and self.vertices == other.vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self.q, self.vertices, self._edges))

    def __repr__(self):
        return f"Hypergraph(q={self.q}, n={self.n}, e={len(self._edges)})"

    def to_json(self) -> dict:
        return {"q": self.q, "vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, doc: dict) -> "Hypergraph":
        try:
            return cls(int(doc["q"]), doc["vertices"], doc["edges"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad hypergraph record: {exc}") from None

    def complement(self) -> "Hypergraph":
        """All q-subsets that are not edges."""
        limits.check("enumeration", comb(self.n, self.q), what="complement q-subsets")
        es = (c for c in combinations(range(self.n), self.q) if c not in self._edges)
        return Hypergraph._from_indices(self.q, self.vertices, es)


def complete(q: int, labels: Iterable) -> Hypergraph:
    labels = tuple(str(v) for v in labels)
    return Hypergraph._from_indices(q, labels, combinations(range(len(labels)), q))


def induced_sub(h: Hypergraph, subset: Iterable) -> Hypergraph:
    """Subhypergraph spanned by ``subset``: the edges lying entirely inside it.

    Vertex order follows ``h``.
    """
    keep = set(h._indices(subset))
    order = [i for i in range(h.n) if i in keep]
    remap = {old: new for new, old in enumerate(order)}
    es = (tuple(remap[i] for i in e) for e in h.edge_indices if keep.issuperset(e))
    return Hypergraph._from_indices(h.q, tuple(h.vertices[i] for i in order), es)


def edge_density(h: Hypergraph) -> Fraction:
    if h.n < h.q:
        raise PreconditionError(f"edge density needs at least q={h.q} vertices, got {h.n}")
    return Fraction(h.num_edges(), comb(h.n, h.q))


# -- maximum independent set / clique ---------------------------------------


def _max_uniform_set(h: Hypergraph, want_edges: bool, limit: int | None) -> tuple[int, ...]:
    """Largest S whose q-subsets are all edges (clique) or all non-edges.

    Include-first depth-first search in index order, so the first maximum found
    is the lexicographically least one; candidates are forward-checked.
    """
    n, q, E = h.n, h.q, h.edge_indices
    limits.check("vertices", n, limit, what="exhaustive set search")
    budget = limits.NodeBudget("clique/independence")
    best: list[tuple[int, ...]] = [()]

    if q == 2:
        adj = [set() for _ in range(n)]
        for a, b in E:
            adj[a].add(b)
            adj[b].add(a)
        if want_edges:
            compat = adj
        else:
            compat = [set(range(n)) - adj[v] - {v} for v in range(n)]

        def extend(chosen: list[int], cand: list[int]) -> None:
            budget.tick()
            if len(chosen) > len(best[0]):
                best[0] = tuple(chosen)
            for pos, v in enumerate(cand):
                if len(chosen) + len(cand) - pos <= len(best[0]):
                    return
                nv = compat[v]
                chosen.append(v)
                extend(chosen, [u for u in cand[pos + 1:] if u in nv])
                chosen.pop()

        extend([], list(range(n)))
        return best[0]

    def ok(chosen: list[int], v: int, u: int) -> bool:
        for rest in combinations(chosen, q - 2):
            if (tuple(sorted(rest + (v, u))) in E) != want_edges:
                return False
        return True

    def extend_q(chosen: list[int], cand: list[int]) -> None:
        budget.tick()
        if len(chosen) > len(best[0]):
            best[0] = tuple(chosen)
        for pos, v in enumerate(cand):
            if len(chosen) + len(cand) - pos <= len(best[0]):
                return
            chosen.append(v)
            extend_q(chosen, [u for u in cand[pos + 1:] if ok(chosen[:-1], v, u)])
            chosen.pop()

    extend_q([], list(range(n)))
    return best[0]


def independence_number(h: Hypergraph, limit: int | None = None) -> tuple[int, tuple[str, ...]]:
    """Maximum size of a vertex set spanning no edge, with a witness."""
    s = _max_uniform_set(h, False, limit)
    return len(s), tuple(h.vertices[i] for i in s)


def clique_number(h: Hypergraph, limit: int | None = None) -> tuple[int, tuple[str, ...]]:
    """Maximum size of a vertex set all of whose q-subsets are edges, with a witness.

    Sets smaller than q are cliques vacuously.
    """
    s = _max_uniform_set(h, True, limit)
    return len(s), tuple(h.vertices[i] for i in s)


def max_independent_in_graph(n: int, conflicts: Iterable[tuple[int, int]], limit: int | None = None):
    """Largest set of indices with no conflicting pair; plumbing for packing searches."""
    labels = tuple(str(i) for i in range(n))
    g = Hypergraph._from_indices(2, labels, (tuple(sorted(c)) for c in conflicts))
    return tuple(int(v) for v in independence_number(g, limit)[1])


# -- forbidden pattern M_s^(q)(t) --------------------------------------------


@dataclass(frozen=True)
class MPatternWitness:
    """s pairwise disjoint parts of size t: each part spans no edge and every
    q-tuple with its vertices in q distinct parts is an edge."""

    parts: tuple[tuple[str, ...], ...]
    s: int
    t: int

    def vertices(self) -> tuple[str, ...]:
        return tuple(v for part in self.parts for v in part)


def is_m_pattern(h: Hypergraph, parts: Sequence[Sequence]) -> bool:
    """Oracle check of the pattern conditions on explicit parts."""
    idx_parts = [h._indices(p) for p in parts]
    flat = [v for p in idx_parts for v in p]
    if len(set(flat)) != len(flat):
        return False
    for p in idx_parts:
        if any(tuple(sorted(c)) in h.edge_indices for c in combinations(p, h.q)):
            return False
    for chosen in combinations(idx_parts, h.q):
        for tup in product(*chosen):
            if tuple(sorted(tup)) not in h.edge_indices:
                return False
    return True


def find_m_pattern(h: Hypergraph, s: int, t: int, limit: int | None = None) -> MPatternWitness | None:
    """Search for a member of M_s^(q)(t) in ``h``.

    Only intra-part independence and transversal completeness are checked;
    edges meeting between 2 and q-1 parts are unconstrained. Parts are filled
    one after another with increasing first vertices (parts are unordered),
    vertices inside a part increasing.
    """
    q, n, E = h.q, h.n, h.edge_indices
    if s < q or t < 1:
        raise PreconditionError(f"need s >= q and t >= 1, got s={s}, t={t}, q={q}")
    limits.check("pattern", s * t, limit, what="pattern size s*t")
    if s * t > n:
        return None
    budget = limits.NodeBudget("pattern")

    parts: list[list[int]] = [[] for _ in range(s)]
    used = [False] * n

    def fits(j: int, u: int) -> bool:
        part = parts[j]
        if len(part) >= q - 1:
            for c in combinations(part, q - 1):
                if tuple(sorted(c + (u,))) in E:
                    return False
        others = [parts[i] for i in range(j)]
        if len(others) >= q - 1:
            for group in combinations(others, q - 1):
                for tup in product(*group):
                    if tuple(sorted(tup + (u,))) not in E:
                        return False
        return True

    def place(j: int) -> bool:
        budget.tick()
        if j == s:
            return True
        part = parts[j]
        if len(part) == t:
            return place(j + 1)
        if part:
            lo = part[-1] + 1
            floor = part[0]
        else:
            lo = parts[j - 1][0] + 1 if j else 0
            floor = lo - 1
        need = (s - j) * t - len(part)
        if sum(1 for w in range(floor + 1, n) if not used[w]) < need:
            return False
        for u in range(lo, n):
            if used[u] or not fits(j, u):
                continue
            part.append(u)
            used[u] = True
            if place(j):
                return True
            part.pop()
            used[u] = False
        return False

    if not place(0):
        return None
    labelled = tuple(tuple(h.vertices[i] for i in p) for p in parts)
    return MPatternWitness(labelled, s, t)


def largest_m_pattern_s(h: Hypergraph, t: int, limit: int | None = None) -> int:
    """Largest s (>= q) for which an M_s^(q)(t) pattern is found; q - 1 if none."""
    best = h.q - 1
    s = h.q
    cap = limits.get_limit("pattern", limit)
    while s * t <= min(cap, h.n):
        if find_m_pattern(h, s, t, limit) is None:
            break
        best = s
        s += 1
    return best


# -- heterochromatic condition -------------------------------------------------


@dataclass(frozen=True)
class HeterochromaticResult:
    holds: bool
    witness: tuple[str, ...] | None = None
    family_indices: tuple[int, ...] | None = None


def heterochromatic_check(
    h: Hypergraph,
    families: Sequence[Sequence],
    p: int,
    semantics: str = "subsequence",
    limit: int | None = None,
) -> HeterochromaticResult:
    """Does every heterochromatic sequence span an edge of ``h``?

    ``semantics="subsequence"``: sequences of length ``p`` taking exactly one
    vertex from each of ``p`` families with strictly increasing family
    indices (families may be skipped).

    ``semantics="all-families"``: sequences taking exactly one vertex from
    every family, in family order; ``p`` is ignored. This is the weakened
    hypothesis that the one-dimensional counterexample defeats.

    When the condition fails, a sequence spanning no edge is returned.
    Searches for such a sequence with forward checking instead of listing
    every sequence.
    """
    fams = [h._indices(f) for f in families]
    seen: set[int] = set()
    for f in fams:
        if seen.intersection(f):
            raise PreconditionError("families must be pairwise disjoint")
        seen.update(f)
    if semantics == "all-families":
        p = len(fams)
        skip = False
    elif semantics == "subsequence":
        skip = True
    else:
        raise ValueError(f"unknown semantics {semantics!r}")
    if p < 1:
        raise PreconditionError("p must be positive")
    if p > len(fams):
        # no sequence of that length exists
        return HeterochromaticResult(True)
    E, q = h.edge_indices, h.q
    budget = limits.NodeBudget("heterochromatic", limit)

    def closes_edge(chosen: list[int], u: int) -> bool:
        if len(chosen) < q - 1:
            return False
        return any(tuple(sorted(c + (u,))) in E for c in combinations(chosen, q - 1))

    chosen: list[int] = []
    which: list[int] = []

    def search(fi: int) -> bool:
        budget.tick()
        if len(chosen) == p:
            return True
        remaining = p - len(chosen)
        last = len(fams) - remaining if skip else fi
        for i in range(fi, last + 1):
            for u in fams[i]:
                if closes_edge(chosen, u):
                    continue
                chosen.append(u)
                which.append(i)
                if search(i + 1):
                    return True
                chosen.pop()
                which.pop()
        return False

    if search(0):
        return HeterochromaticResult(False, tuple(h.vertices[i] for i in chosen), tuple(which))
    return HeterochromaticResult(True)
