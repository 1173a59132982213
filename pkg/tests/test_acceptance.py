"""Acceptance criteria 1-11.

Each test prints one PASS/FAIL line (also collected into the terminal summary)
and fails if its check or its runtime budget fails.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations, product
from math import factorial

from hellylab import boxlab, experiments, generators, transversal
from hellylab.errors import ShortfallError
from hellylab.geometry import Box
from hellylab.homogenize import (BlockSeq, extract_rainbow_independent, homogenize_full, is_homogeneous,
                                 plan_block_sizes)
from hellylab.hypergraph import (Hypergraph, clique_number, edge_density, find_m_pattern, heterochromatic_check,
                                 induced_sub, is_m_pattern)
from hellylab.nerve import NerveSpec, build_nerve, truncation_growth_report

import oracles
from acceptance_log import LINES


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"FAIL criterion {number:2d} ({title}) after {elapsed:.2f}s: {type(exc).__name__}: {exc}"
        LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} ({title}) in {elapsed:.2f}s (budget {budget:.0f}s)"
    LINES.append(line)
    print(line)
    assert ok, line


def pattern_host(q: int, t: int, rng: random.Random, extra: int = 3) -> Hypergraph:
    """A host containing an M_q^(q)(t) pattern: q independent parts of size t,
    all transversal q-tuples present, random mixed edges, and a few noise
    vertices with random edges."""
    parts = [[f"p{i}.{j}" for j in range(t)] for i in range(q)]
    noise = [f"x{i}" for i in range(extra)]
    verts = [v for p in parts for v in p] + noise
    owner = {v: i for i, p in enumerate(parts) for v in p}
    edges = []
    for e in combinations(verts, q):
        owners = [owner.get(v) for v in e]
        if None not in owners and len(set(owners)) == q:
            edges.append(e)
        elif None not in owners and len(set(owners)) == 1:
            continue
        elif rng.random() < 0.4:
            edges.append(e)
    rng.shuffle(verts)
    return Hypergraph(q, verts, edges)


def test_criterion_01_pattern_density():
    with criterion(1, "pattern witnesses have density >= q!/q^q", 1.0):
        rng = random.Random(1)
        for q in (2, 3):
            floor = Fraction(factorial(q), q ** q)
            for t in range(q, 6):
                h = pattern_host(q, t, rng)
                w = find_m_pattern(h, q, t)
                assert w is not None, (q, t)
                assert is_m_pattern(h, w.parts)
                dens = edge_density(induced_sub(h, w.vertices()))
                assert dens >= floor, (q, t, dens)


def test_criterion_02_matching_complement_clique():
    with criterion(2, "matching complement clique number m", 5.0):
        for m in range(1, 9):
            n = 2 * m
            h = generators.matching_complement(n)
            omega, witness = clique_number(h)
            adj = [0] * n
            for a, b in h.edges:
                adj[int(a)] |= 1 << int(b)
                adj[int(b)] |= 1 << int(a)
            assert omega == m == oracles.graph_clique_bitmask(n, adj) == Fraction(1, 2) * n
            assert len(witness) == m


def test_criterion_03_fractional_helly_campaign():
    with criterion(3, "fractional Helly bound over 1000 dense d=2 families", 60.0):
        rep = experiments.frac_helly_campaign(1000, seed=2024, d=2, n_max=30)
        assert rep["trials"] == 1000
        assert rep["violations"] == 0, rep["violation_details"][:3]
        assert Fraction(rep["alpha_min"]) > Fraction(3, 4)


def test_criterion_04_cross_intersecting_families():
    with criterion(4, "cross-intersecting families force a same-family pair", 60.0):
        for s, t, d in [(9, 2, 2), (16, 2, 2), (25, 3, 2)]:
            floor = Fraction(s - 1) / (s - Fraction(1, t))
            for seed in range(100):
                rep = boxlab.claim17_experiment(s, t, d, seed)
                assert rep.alpha_floor == floor
                assert rep.alpha >= floor, (s, t, seed)
                assert rep.witness_pair is not None, (s, t, seed)
                (f1, a), (f2, b) = rep.witness_pair
                assert f1 == f2 and a != b
                assert rep.ok


def test_criterion_05_consistent_triples():
    with criterion(5, "consistent triples in 200 interval families", 30.0):
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randint(5, 12)
            ivs = []
            for _ in range(n):
                a = Fraction(rng.randint(0, 40), 2)
                ivs.append(Box((a,), (a + Fraction(rng.randint(0, 20), 2),)))
            ct = boxlab.consistent_triple(ivs)
            assert ct is not None and ct.certified
            first, mid, last = ivs[ct.first], ivs[ct.middle], ivs[ct.last]
            lo, hi = max(first.lo[0], last.lo[0]), min(first.hi[0], last.hi[0])
            assert lo > hi or (mid.lo[0] <= lo and hi <= mid.hi[0])
            assert not boxlab.private_point_matrix(ivs)[ct.first][ct.last]


def test_criterion_06_optimization_chain():
    with criterion(6, "nu <= tau* <= tau, LP duality, exact tau on 100 instances", 120.0):
        rng = random.Random(6)
        for _ in range(100):
            nt, nc = rng.randint(2, 10), rng.randint(2, 12)
            hits = [[rng.random() < 0.35 for _ in range(nt)] for _ in range(nc)]
            for t in range(nt):
                if not any(row[t] for row in hits):
                    hits[rng.randrange(nc)][t] = True
            inst = transversal.CoverInstance(tuple(range(nt)), tuple(range(nc)), hits)
            cert = transversal.min_hitting_set(inst)
            frac = transversal.fractional_transversal(inst)
            nu = transversal.matching_number(inst)[0]
            assert transversal.verify_certificate(inst, cert)
            assert nu <= frac.value <= cert.value
            assert frac.value == frac.packing_value
            assert cert.value == oracles.tau_bruteforce(hits)
            assert nu == oracles.nu_bruteforce(hits)


def test_criterion_07_lambda():
    with criterion(7, "lambda matches oracle; nested boxes give lambda <= 2", 60.0):
        for seed in range(100):
            rng = random.Random(seed)
            edges = [frozenset(rng.sample(range(8), rng.randint(1, 4))) for _ in range(rng.randint(1, 10))]
            assert transversal.lambda_dsw(edges)[0] == oracles.lambda_all_subsets(edges), seed
        sizes = random.Random(70)
        for seed in range(20):
            for k in (0, 1):
                boxes = generators.nested(sizes.randint(3, 8), seed, d=2)
                _, dual = transversal.dual_box_flat_hypergraph(boxes, k)
                assert transversal.lambda_dsw(dual)[0] <= 2


def _random_blocks(sizes, q, rng):
    blocks, k = [], 0
    for s in sizes:
        blocks.append([f"v{k + i}" for i in range(s)])
        k += s
    verts = [v for b in blocks for v in b]
    density = rng.random()
    h = Hypergraph(q, verts, [e for e in combinations(verts, q) if rng.random() < density])
    return h, BlockSeq(blocks)


def test_criterion_08_homogenization():
    with criterion(8, "homogenization soundness on 100 instances", 120.0):
        assert plan_block_sizes([2, 2], 2) == [2, 8]
        rng = random.Random(8)
        plans = {2: [[2, 2], [1, 1, 1]], 3: [[1, 1, 1, 1]]}
        for trial in range(100):
            q = 2 if trial % 2 == 0 else 3
            targets = rng.choice(plans[q])
            h, bs = _random_blocks(plan_block_sizes(targets, q), q, rng)
            for p in sorted({1, q - 1}):
                try:
                    final, trace = homogenize_full(h, bs, p, targets=targets)
                except ShortfallError as exc:
                    final, trace = exc.result
                assert is_homogeneous(h, final, p)
                assert is_homogeneous(h, final, q - 1)
                for step in trace.steps:
                    assert all(2 * now >= before for now, before in zip(step.sizes, step.prior_sizes))


def loud_quiet_host(q: int, t: int, m: int, rng: random.Random):
    """Blocks of t vertices; some blocks get a loud vertex whose increasing
    q-tuples are all edges, every other vertex starts no edge."""
    blocks = [[f"b{i}.{j}" for j in range(t)] for i in range(m)]
    loud = {i: rng.choice(blocks[i]) for i in range(m) if rng.random() < 0.8}
    verts = [v for b in blocks for v in b]
    edges = []
    for levels in combinations(range(m), q):
        first = levels[0]
        if first not in loud:
            continue
        for rest in product(*(blocks[l] for l in levels[1:])):
            edges.append((loud[first],) + rest)
    return Hypergraph(q, verts, edges), BlockSeq(blocks)


def test_criterion_09_rainbow_extraction():
    with criterion(9, "rainbow independent sets over pattern-free hosts", 60.0):
        rng = random.Random(9)
        for trial in range(40):
            q = 2 if trial % 2 == 0 else 3
            t = rng.randint(q, 4 if q == 2 else 3)
            m = rng.randint(q, 5)
            h, bs = loud_quiet_host(q, t, m, rng)
            assert find_m_pattern(h, q, t) is None
            assert is_homogeneous(h, bs, 1)
            res = extract_rainbow_independent(h, bs, t, strict=True)
            assert res.flagged == []
            assert len(res.vertices) >= len(bs) - len(res.flagged)
            assert not oracles.spans_edge(oracles.edge_set(h), q, res.vertices)


def test_criterion_10_one_dimensional_counterexample():
    with criterion(10, "1-d counterexample: heterochromatic check fails, tau grows", 30.0):
        objs, fams = generators.counterexample_1d(10, 4, seed=10)
        h = build_nerve(objs, NerveSpec("convex", 1))
        labels = [[h.vertices[i] for i in f] for f in fams]
        for p in range(1, 11):
            res = heterochromatic_check(h, labels, p)
            assert not res.holds, p
            assert not oracles.spans_edge(oracles.edge_set(h), 2, res.witness)
        assert heterochromatic_check(h, labels, 0, semantics="all-families").holds
        for f in fams:
            fam = [objs[i] for i in f]
            rows = truncation_growth_report(fam, NerveSpec("convex", 1), range(1, len(fam) + 1))
            taus = [r.tau for r in rows]
            assert all(a < b for a, b in zip(taus, taus[1:])), taus


def test_criterion_11_lattice_piercing():
    with criterion(11, "lattice piercing of 3-wise lattice-intersecting boxes", 60.0):
        for seed in range(100):
            rng = random.Random(seed)
            boxes = generators.lattice_triple_boxes(rng.randint(4, 9), seed)
            for a, b, c in combinations(boxes, 3):
                assert any(oracles.box_point_in_all([a, b, c], (x, y))
                           for x in range(-1, 14) for y in range(-1, 14))
            lat = transversal.lattice_cover(boxes)
            pts = transversal.point_cover(boxes)
            lat_cert = transversal.min_hitting_set(lat)
            pt_cert = transversal.min_hitting_set(pts)
            assert transversal.verify_certificate(lat, lat_cert)
            assert transversal.verify_certificate(pts, pt_cert)
            assert all(all(v.denominator == 1 for v in lat.candidates[c]) for c in lat_cert.chosen)
            assert lat_cert.value <= pt_cert.value
