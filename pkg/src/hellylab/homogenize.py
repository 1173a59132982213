"""Finite Ramsey homogenization of block sequences and rainbow independent sets.

A block sequence is an ordered list of pairwise disjoint vertex blocks of a
q-uniform host. An *increasing p-tuple* takes one vertex from each of p
blocks with strictly increasing block indices (levels). The host is
*homogeneous* with respect to such a tuple when either every increasing
q-tuple starting with it is an edge or none is; *p-homogeneous* when that
holds for every increasing p-tuple.

The step rule keeps, among the blocks past the tuple's last level, the
majority class (heavy or light, ties light) and filters each kept block to the
matching half. Infinite sequences have an infinite class to keep; for finite
ones the majority rule is the substitute, and every decision is recorded in
the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

from hellylab import limits
from hellylab.errors import PreconditionError, SchemaError, ShortfallError
from hellylab.hypergraph import Hypergraph

HEAVY = "HEAVY"
LIGHT = "LIGHT"


@dataclass(frozen=True)
class BlockSeq:
    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(str(v) for v in b) for b in self.blocks)
        seen: set[str] = set()
        for i, b in enumerate(blocks):
            if not b:
                raise SchemaError(f"block {i} is empty")
            if seen.intersection(b) or len(set(b)) != len(b):
                raise SchemaError(f"block {i} overlaps an earlier block or repeats a vertex")
            seen.update(b)
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def to_json(self) -> list[list[str]]:
        return [list(b) for b in self.blocks]


@dataclass(frozen=True)
class IncreasingTuple:
    vertices: tuple[str, ...]
    levels: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.levels):
            raise SchemaError("one level per vertex")
        if any(a >= b for a, b in zip(self.levels, self.levels[1:])):
            raise SchemaError(f"levels must increase strictly: {self.levels}")

    @property
    def last_level(self) -> int:
        return self.levels[-1] if self.levels else -1

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "levels": list(self.levels)}


@dataclass
class TraceStep:
    stage: int
    tuple: IncreasingTuple
    decision: str
    kept_blocks: list[int]
    prior_sizes: list[int]
    sizes: list[int]

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "tuple": list(self.tuple.vertices),
            "levels": list(self.tuple.levels),
            "decision": self.decision,
            "kept_blocks": self.kept_blocks,
            "prior_sizes": self.prior_sizes,
            "sizes": self.sizes,
        }


@dataclass
class HomogenizationTrace:
    steps: list[TraceStep] = field(default_factory=list)
    final: BlockSeq | None = None

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def check_tuple(bs: BlockSeq, T: IncreasingTuple) -> None:
    for v, lvl in zip(T.vertices, T.levels):
        if not 0 <= lvl < len(bs) or v not in bs.blocks[lvl]:
            raise PreconditionError(f"{T} is not an increasing tuple of the block sequence", T)


def increasing_tuples(bs: BlockSeq, p: int) -> Iterator[IncreasingTuple]:
    """All increasing p-tuples in the well-order used for homogenization: by
    last level, then by the level sequence, then by positions within blocks."""
    m = len(bs)
    if p == 0:
        yield IncreasingTuple((), ())
        return
    for last in range(p - 1, m):
        for prefix in combinations(range(last), p - 1):
            levels = prefix + (last,)
            for verts in product(*(bs.blocks[l] for l in levels)):
                yield IncreasingTuple(tuple(verts), levels)


def count_increasing(sizes: Sequence[int], p: int) -> int:
    """Number of increasing p-tuples of blocks with the given sizes: the p-th
    elementary symmetric polynomial of the sizes."""
    e = [1] + [0] * p
    for n in sizes:
        for j in range(p, 0, -1):
            e[j] += e[j - 1] * n
    return e[p]


def tuple_order(bs: BlockSeq, p: int, limit: int | None = None) -> list[IncreasingTuple]:
    if p < 1:
        raise PreconditionError("p must be at least 1")
    limits.check("enumeration", count_increasing(bs.sizes(), p), limit, what="increasing tuples")
    return list(increasing_tuples(bs, p))


def _extensions(bs: BlockSeq, after: int, k: int) -> Iterator[tuple[str, ...]]:
    """Tuples of k vertices from k distinct blocks past level ``after``, in increasing order."""
    for levels in combinations(range(after + 1, len(bs)), k):
        yield from product(*(bs.blocks[l] for l in levels))


def tuple_homogeneity(h: Hypergraph, bs: BlockSeq, T: IncreasingTuple) -> bool | None:
    """True if all increasing q-extensions of T are edges, False if none is,
    None if mixed. Vacuous (no extensions) counts as False."""
    k = h.q - len(T.vertices)
    seen_edge = seen_non = False
    for ext in _extensions(bs, T.last_level, k):
        if h.has_edge(T.vertices + ext):
            seen_edge = True
        else:
            seen_non = True
        if seen_edge and seen_non:
            return None
    return seen_edge


@dataclass(frozen=True)
class HomogeneityCheck:
    holds: bool
    violation: IncreasingTuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_homogeneous(h: Hypergraph, bs: BlockSeq, p: int, limit: int | None = None) -> HomogeneityCheck:
    """Brute-force check of p-homogeneity; returns the least violating tuple."""
    if not 1 <= p < h.q:
        raise PreconditionError(f"need 1 <= p < q, got p={p}, q={h.q}")
    total = count_increasing(bs.sizes(), h.q)
    limits.check("enumeration", total, limit, what="increasing q-tuples")
    for T in increasing_tuples(bs, p):
        if tuple_homogeneity(h, bs, T) is None:
            return HomogeneityCheck(False, T)
    return HomogeneityCheck(True)


def _step(h: Hypergraph, bs: BlockSeq, T: IncreasingTuple, stage: int) -> tuple[BlockSeq, TraceStep]:
    if len(T.vertices) != h.q - 1:
        raise PreconditionError(f"step tuples have q-1 = {h.q - 1} vertices, got {len(T.vertices)}", T)
    check_tuple(bs, T)
    ell = T.last_level
    heavy, light = [], []
    for i in range(ell + 1, len(bs)):
        block = bs.blocks[i]
        ext = [v for v in block if h.has_edge(T.vertices + (v,))]
        if 2 * len(ext) >= len(block):
            heavy.append((i, tuple(ext)))
        else:
            ext_set = set(ext)
            light.append((i, tuple(v for v in block if v not in ext_set)))
    if len(heavy) > len(light):
        decision, kept = HEAVY, heavy
    else:
        decision, kept = LIGHT, light
    new_blocks = list(bs.blocks[: ell + 1]) + [b for _, b in kept]
    kept_idx = list(range(ell + 1)) + [i for i, _ in kept]
    new = BlockSeq(tuple(new_blocks))
    rec = TraceStep(stage, T, decision, kept_idx, [len(bs.blocks[i]) for i in kept_idx], new.sizes())
    return new, rec


def homogenize_step(h: Hypergraph, bs: BlockSeq, T: IncreasingTuple) -> BlockSeq:
    """One homogenization step with respect to the increasing (q-1)-tuple T.

    Blocks up to T's last level are untouched. Each later block is heavy when
    at least half of its vertices extend T to an edge; the majority class is
    kept (ties light) and filtered to its edge-extensions (heavy) or
    non-edge-extensions (light); the other class is dropped.
    """
    return _step(h, bs, T, h.q)[0]


def _lemma(g: Hypergraph, bs: BlockSeq, trace: HomogenizationTrace) -> BlockSeq:
    """Make ``bs`` (q-1)-homogeneous in ``g``, always fixing the least
    non-homogeneous tuple next. A step at last level l only alters blocks past
    l, so tuples ending at l are scanned once, in order."""
    p = g.q - 1
    ell = p - 1
    while ell < len(bs) - 1:
        prefixes = list(combinations(range(ell), p - 1))
        for prefix in prefixes:
            levels = prefix + (ell,)
            for verts in product(*(bs.blocks[l] for l in levels)):
                T = IncreasingTuple(tuple(verts), levels)
                if tuple_homogeneity(g, bs, T) is None:
                    bs, rec = _step(g, bs, T, g.q)
                    trace.steps.append(rec)
        ell += 1
    return bs


def derived_hypergraph(h: Hypergraph, bs: BlockSeq, p: int) -> Hypergraph:
    """The p-uniform hypergraph on the blocks whose edges are the increasing
    p-tuples all of whose increasing q-extensions are edges of h (vacuously
    so when there are none)."""
    verts = tuple(v for b in bs.blocks for v in b)
    edges = []
    for T in increasing_tuples(bs, p):
        k = h.q - p
        if all(h.has_edge(T.vertices + ext) for ext in _extensions(bs, T.last_level, k)):
            edges.append(T.vertices)
    return Hypergraph(p, verts, edges)


def _shortfall(bs: BlockSeq, targets: Sequence[int]) -> str | None:
    if len(bs) < len(targets):
        return f"{len(bs)} blocks left, {len(targets)} required"
    for i, (have, want) in enumerate(zip(bs.sizes(), targets)):
        if have < want:
            return f"block {i} has {have} vertices, {want} required"
    return None


def homogenize_full(h: Hypergraph, bs: BlockSeq, p: int, targets: Sequence[int] | None = None,
                    limit: int | None = None) -> tuple[BlockSeq, HomogenizationTrace]:
    """Refine ``bs`` until the host is p-homogeneous on it.

    First every increasing (q-1)-tuple is homogenized in order; then, for
    p' = q-1 down to p+1, the p'-uniform derived hypergraph is formed on the
    current blocks and the same procedure makes the sequence (p'-1)-homogeneous
    in it, hence in the host. The result is re-checked by brute force.

    With ``targets`` (required sizes of the leading blocks), a shortfall raises
    :class:`ShortfallError` whose report names the first step after which the
    requirement failed; the partial result rides along on the exception.
    """
    q = h.q
    if not 1 <= p < q:
        raise PreconditionError(f"need 1 <= p < q, got p={p}, q={q}")
    for b in bs.blocks:
        for v in b:
            h.index(v)
    limits.check("enumeration", count_increasing(bs.sizes(), q), limit, what="increasing q-tuples")
    trace = HomogenizationTrace()
    bs = _lemma(h, bs, trace)
    for stage in range(q - 1, p, -1):
        down = derived_hypergraph(h, bs, stage)
        bs = _lemma(down, bs, trace)
    trace.final = bs
    check = is_homogeneous(h, bs, p, limit)
    if not check:
        raise AssertionError(f"homogenization left a non-homogeneous tuple {check.violation}")
    if targets is not None:
        reason = _shortfall(bs, targets)
        if reason is not None:
            failing = None
            cur_sizes = None
            for idx, step in enumerate(trace.steps):
                cur_sizes = step.sizes
                if len(cur_sizes) < len(targets) or any(a < b for a, b in zip(cur_sizes, targets)):
                    failing = idx
                    break
            report = {
                "reason": reason,
                "failing_step": failing,
                "achieved_sizes": bs.sizes(),
                "targets": list(targets),
                "plan": [_plan_json(v) for v in plan_block_sizes(targets, q)],
            }
            raise ShortfallError(f"homogenization shortfall: {reason}", report, (bs, trace))
    return bs, trace


def _plan_json(v):
    return v if isinstance(v, int) else "unbounded"


def plan_block_sizes(targets: Sequence[int], q: int, max_bits: int | None = None) -> list[int | float]:
    """Block sizes that guarantee the target sizes after homogenization.

    ``n_i = n'_i`` for ``i < q``; afterwards
    ``n_{s+1} = 2 ** N(n_1..n_s) * max(n'_1..n'_{s+1})`` where N counts the
    increasing (q-1)-tuples of blocks of sizes n_1..n_s. Values whose exponent
    exceeds ``max_bits`` (cap ``plan_bits``) are reported as ``math.inf``,
    and so is everything after them.
    """
    if not targets:
        raise PreconditionError("need at least one target")
    if q < 2:
        raise PreconditionError("q must be at least 2")
    cap = limits.get_limit("plan_bits", max_bits)
    out: list[int | float] = []
    for i, want in enumerate(targets):
        if i < q - 1:
            out.append(int(want))
            continue
        if out and out[-1] == float("inf"):
            out.append(float("inf"))
            continue
        N = count_increasing(out, q - 1)
        m = max(targets[: i + 1])
        out.append(float("inf") if N > cap else (2 ** N) * m)
    return out


# -- rainbow independent set ------------------------------------------------------------------


FOUND = "found"
FLAGGED = "flagged"
VACUOUS = "vacuous"


@dataclass
class RainbowResult:
    vertices: tuple[str, ...]
    status: list[str]
    violations: list[dict]

    @property
    def flagged(self) -> list[int]:
        return [i for i, s in enumerate(self.status) if s == FLAGGED]

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "status": self.status, "violations": self.violations}


def _starts_edge(h: Hypergraph, bs: BlockSeq, level: int, v: str) -> bool:
    return any(h.has_edge((v,) + ext) for ext in _extensions(bs, level, h.q - 1))


def extract_rainbow_independent(h: Hypergraph, bs: BlockSeq, t: int, strict: bool = False) -> RainbowResult:
    """Pick from each block a vertex that starts no edge among its increasing q-tuples.

    Blocks too close to the end of the sequence to start any q-tuple are
    ``vacuous`` and contribute their first vertex; blocks where every vertex
    starts an edge are ``flagged``. Precondition failures (small or
    non-independent block, non-1-homogeneous host) are listed with witnesses,
    or raised when ``strict``. The returned set is checked independent in
    every case.
    """
    q = h.q
    violations: list[dict] = []
    for i, b in enumerate(bs.blocks):
        if len(b) < t:
            violations.append({"kind": "small-block", "block": i, "size": len(b)})
        inner = next((c for c in combinations(b, q) if h.has_edge(c)), None)
        if inner is not None:
            violations.append({"kind": "block-not-independent", "block": i, "edge": list(inner)})
    if q >= 2 and len(bs) > 0:
        chk = is_homogeneous(h, bs, 1)
        if not chk:
            violations.append({"kind": "not-1-homogeneous", "tuple": chk.violation.to_json()})
    if strict and violations:
        raise PreconditionError(f"rainbow extraction preconditions fail: {violations[0]}", violations)

    chosen: list[str] = []
    status: list[str] = []
    m = len(bs)
    for i, b in enumerate(bs.blocks):
        if m - i - 1 < q - 1:
            status.append(VACUOUS)
            chosen.append(b[0])
            continue
        v = next((v for v in b if not _starts_edge(h, bs, i, v)), None)
        if v is None:
            status.append(FLAGGED)
        else:
            status.append(FOUND)
            chosen.append(v)
    if h.spans_edge(chosen):
        raise AssertionError("rainbow set spans an edge")
    return RainbowResult(tuple(chosen), status, violations)
