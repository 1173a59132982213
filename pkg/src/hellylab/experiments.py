"""Seeded experiment campaigns over the box procedures.

Each campaign returns a JSON-ready dict with the trial count, the number of
violations (nonzero means a checked inequality failed) and value
distributions. Trial ``i`` uses seed ``seed + i``.
"""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

from hellylab import boxlab, generators, transversal
from hellylab.nerve import NerveKind, NerveSpec, truncation_growth_report
from hellylab.rational import render


def _dist(values) -> dict:
    return {render(k) if isinstance(k, Fraction) else str(k): v for k, v in sorted(Counter(values).items())}


def _header(name: str, seed: int, trials: int) -> dict:
    return {"experiment": name, "rng": generators.RNG_ALGORITHM, "seed": seed, "trials": trials}


def frac_helly_campaign(trials: int, seed: int, d: int = 2, n_max: int = 30) -> dict:
    """Random dense box families; checks omega/n >= 1 - d*sqrt(1 - alpha) whenever
    alpha > 1 - 1/d^2. Families below the density gate are redrawn."""
    out = _header("frac-helly-boxes", seed, trials)
    violations, ratios, alphas, redraws = [], [], [], 0
    for i in range(trials):
        rng = random.Random(seed + i)
        while True:
            boxes = boxlab.random_dense_boxes(rng, rng.randint(2, n_max), d)
            rep = boxlab.frac_helly_box_check(boxes)
            if rep.applicable:
                break
            redraws += 1
        alphas.append(rep.alpha)
        ratios.append(Fraction(rep.omega, rep.n))
        if not rep.bound_holds:
            violations.append({"seed": seed + i, **rep.to_json()})
    out.update(violations=len(violations), violation_details=violations, redraws=redraws,
               alpha_min=render(min(alphas)) if alphas else None,
               omega_ratio=_dist(ratios))
    return out


def claim17_campaign(trials: int, seed: int, s: int = 9, t: int = 2, d: int = 2,
                     adversarial: bool = False) -> dict:
    """Cross-intersecting families; a trial fails if the pair density is below
    (s-1)/(s-1/t) or if no same-family intersecting pair is found although the
    clique bound exceeds s."""
    out = _header("claim17", seed, trials)
    out.update(s=s, t=t, d=d)
    bad, omegas, found = [], [], 0
    for i in range(trials):
        rep = boxlab.claim17_experiment(s, t, d, seed + i, adversarial)
        omegas.append(rep.omega)
        found += rep.witness_pair is not None
        if not rep.ok:
            bad.append(rep.to_json())
    out.update(violations=len(bad), violation_details=bad, pairs_found=found, omega=_dist(omegas))
    return out


def claim18_campaign(trials: int, seed: int, d: int = 2, k: int = 0, n: int = 7) -> dict:
    """Random boxes with their dual hypergraph over candidate axis-parallel
    k-flats. Checks that every consistent triple certifies containment, that
    its outer pair has no private point, and that no triple inside a maximum
    private-intersection family is consistent."""
    out = _header("claim18", seed, trials)
    out.update(d=d, k=k, n=n)
    bad, lams, nus, taus, triples = [], [], [], [], 0
    for i in range(trials):
        boxes = generators.random_boxes(n, d, seed + i, spread=10)
        flats, dual = transversal.dual_box_flat_hypergraph(boxes, k)
        lam, fam = transversal.lambda_dsw(dual)
        inst = transversal.dual_cover(boxes, k)
        lams.append(lam)
        nus.append(transversal.matching_number(dual)[0])
        taus.append(transversal.min_hitting_set(inst).value)
        problems = []
        reduced = [boxlab.project_out(b, range(k)) for b in boxes] if k else list(boxes)
        ct = boxlab.consistent_triple(reduced) if n >= 3 else None
        if ct is not None:
            triples += 1
            if not ct.certified:
                problems.append("uncertified triple")
            if boxlab.private_point_matrix(reduced)[ct.first][ct.last]:
                problems.append("outer pair of consistent triple has a private point")
        if len(fam) >= 3:
            orders = boxlab.BoxOrderings.of([reduced[j] for j in fam])
            for tri in combinations(range(len(fam)), 3):
                if boxlab.is_consistent(orders, tri) is not None:
                    problems.append(f"consistent triple inside private family {[fam[x] for x in tri]}")
                    break
        if problems:
            bad.append({"seed": seed + i, "problems": problems})
    out.update(violations=len(bad), violation_details=bad, triples_found=triples,
               **{"lambda": _dist(lams)}, nu=_dist(nus), tau=_dist(taus),
               lambda_max=max(lams) if lams else None)
    return out


def growth_report(family, spec: NerveSpec, prefixes, with_tau: bool = True) -> dict:
    rows = truncation_growth_report(family, spec, prefixes, with_tau)
    return {"experiment": "growth", "rows": [
        {"size": r.size, "independence": r.independence, "tau": r.tau} for r in rows]}


def growth_campaign(generator: str, n: int, seed: int, d: int = 1) -> dict:
    if generator == "nested":
        family = generators.nested(n, seed, d)
    elif generator == "disjoint-intervals":
        family = generators.disjoint_intervals(n, seed)
        d = 1
    else:
        family = generators.random_boxes(n, d, seed)
    spec = NerveSpec(NerveKind.CONVEX_POINT, d)
    out = growth_report(family, spec, range(1, n + 1))
    out.update(generator=generator, seed=seed, rng=generators.RNG_ALGORITHM)
    return out
