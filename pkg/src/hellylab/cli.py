"""Command-line front end.

Exit codes: 0 ok, 1 a checked inequality was violated, 2 malformed input,
3 size limit exceeded, 4 infeasible cover, 5 homogenization shortfall.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from hellylab import experiments, generators, geometry, homogenize, transversal
from hellylab.errors import HellyLabError, PreconditionError, SchemaError, ShortfallError, SizeLimitError
from hellylab.geometry import Box
from hellylab.hypergraph import heterochromatic_check
from hellylab.instance import load_instance, validate
from hellylab.nerve import NerveKind, NerveSpec, nerve_report, pq_condition
from hellylab.rational import render


def _emit(doc, fmt: str, out) -> None:
    if fmt == "markdown":
        out.write(_markdown(doc))
    else:
        json.dump(doc, out, indent=2, sort_keys=False)
        out.write("\n")


def _markdown(doc, title: str = "report") -> str:
    if not isinstance(doc, dict):
        return "```json\n" + json.dumps(doc, indent=2) + "\n```\n"
    lines = [f"## {title}", "", "| key | value |", "| --- | --- |"]
    for k, v in doc.items():
        cell = json.dumps(v) if isinstance(v, (dict, list)) else str(v)
        lines.append(f"| {k} | {cell.replace('|', '/')} |")
    return "\n".join(lines) + "\n"


def _spec(args, inst) -> NerveSpec:
    base = dict(inst.spec) if inst is not None else {}
    for key in ("kind", "d", "k", "q"):
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    if "kind" not in base or "d" not in base:
        raise SchemaError("nerve spec needs --kind and --d (or a spec record in the instance)")
    return NerveSpec(NerveKind(base["kind"]), int(base["d"]), base.get("k"), base.get("q"))


def _apply_limits(pairs) -> None:
    if not pairs:
        return
    current = os.environ.get("HELLYLAB_LIMIT", "")
    os.environ["HELLYLAB_LIMIT"] = ",".join(p for p in [current, *pairs] if p)


# -- commands ----------------------------------------------------------------------------------


def cmd_nerve(args, out) -> int:
    inst = load_instance(args.input)
    spec = _spec(args, inst)
    rep = nerve_report(inst.objects, spec)
    doc = rep.hypergraph.to_json()
    validate(doc, "hypergraph")
    if rep.inconclusive:
        print(f"note: {len(rep.inconclusive)} q-subsets decided inside the numeric tolerance band",
              file=sys.stderr)
    _emit(doc, args.format, out)
    return 0


def _cover(objs, candidates: str, k: int | None) -> transversal.CoverInstance:
    if candidates == "points":
        if not all(isinstance(o, Box) for o in objs):
            raise PreconditionError("point candidates need boxes")
        return transversal.point_cover(objs)
    if candidates == "axisflats":
        if k is None:
            raise PreconditionError("axisflat candidates need --k")
        return transversal.axisflat_cover(objs, k)
    if candidates == "lattice":
        return transversal.lattice_cover(objs)
    if candidates == "lines":
        return transversal.line_cover([geometry.as_polytope(o) for o in objs])
    raise PreconditionError(f"unknown candidate kind {candidates!r}")


def pierce_report(objs, candidates: str, k: int | None = None) -> dict:
    inst = _cover(objs, candidates, k)
    cert = transversal.min_hitting_set(inst)
    if not transversal.verify_certificate(inst, cert):
        raise AssertionError("piercing certificate failed re-verification")
    frac = transversal.fractional_transversal(inst)
    nu, matching = transversal.matching_number(inst)
    doc = {
        "candidates": candidates,
        "n_targets": inst.n_targets,
        "n_candidates": inst.n_candidates,
        "tau": cert.value,
        "certificate": cert.to_json(),
        "chosen_transversals": [transversal._jsonable(inst.candidates[c]) for c in cert.chosen],
        "tau_star": render(frac.value),
        "weights": {str(i): render(w) for i, w in enumerate(frac.weights) if w},
        "nu": nu,
        "matching": list(matching),
    }
    try:
        lam, fam = transversal.lambda_dsw(inst)
        doc["lambda"], doc["lambda_family"] = lam, list(fam)
    except SizeLimitError as exc:
        doc["lambda"], doc["lambda_skipped"] = None, str(exc)
    if not nu <= frac.value <= cert.value:
        raise AssertionError(f"nu={nu}, tau*={frac.value}, tau={cert.value} out of order")
    validate(doc["certificate"], "certificate")
    return doc


def cmd_pierce(args, out) -> int:
    inst = load_instance(args.input)
    k = args.k if args.k is not None else inst.spec.get("k")
    _emit(pierce_report(inst.objects, args.candidates, k), args.format, out)
    return 0


def _targets(raw: str | None) -> list[int] | None:
    if raw is None:
        return None
    try:
        return [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise SchemaError(f"--targets must be comma-separated integers, got {raw!r}") from None


def cmd_homogenize(args, out) -> int:
    targets = _targets(args.targets)
    if args.plan_only:
        if targets is None:
            raise SchemaError("--plan-only needs --targets")
        q = args.q
        if q is None and args.input:
            inst = load_instance(args.input)
            q = inst.hypergraph.q if inst.hypergraph else None
        if q is None:
            raise SchemaError("--plan-only needs --q or an input hypergraph")
        plan = homogenize.plan_block_sizes(targets, q)
        _emit({"q": q, "targets": targets, "plan": [homogenize._plan_json(v) for v in plan]}, args.format, out)
        return 0
    if not args.input:
        raise SchemaError("homogenize needs an input file with a hypergraph and blocks")
    inst = load_instance(args.input)
    if inst.hypergraph is None or inst.blocks is None:
        raise SchemaError("homogenize input needs 'hypergraph' and 'blocks'")
    h = inst.hypergraph
    bs = homogenize.BlockSeq(inst.blocks)
    p = args.p if args.p is not None else h.q - 1
    try:
        final, trace = homogenize.homogenize_full(h, bs, p, targets)
    except ShortfallError as exc:
        _emit({"status": "shortfall", **exc.report}, args.format, out)
        return exc.exit_code
    check = homogenize.is_homogeneous(h, final, p)
    steps = trace.to_json()
    validate(steps, "trace")
    _emit({"status": "ok", "p": p, "homogeneous": bool(check), "final": final.to_json(),
           "sizes": final.sizes(), "trace": steps}, args.format, out)
    return 0


def cmd_generate(args, out) -> int:
    doc = generators.generate(args.kind, n=args.n, seed=args.seed, d=args.d or 1,
                              s=args.s, t=args.t, m=args.m)
    validate(doc, "instance")
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_experiment(args, out) -> int:
    name = args.name
    if name == "frac-helly-boxes":
        doc = experiments.frac_helly_campaign(args.trials, args.seed, d=args.d or 2)
    elif name == "claim17":
        doc = experiments.claim17_campaign(args.trials, args.seed, s=args.s, t=args.t, d=args.d or 2,
                                           adversarial=args.adversarial)
    elif name == "claim18":
        doc = experiments.claim18_campaign(args.trials, args.seed, d=args.d or 2, k=args.k or 0, n=args.n)
    elif name == "growth":
        doc = experiments.growth_campaign(args.generator, args.n, args.seed, d=args.d or 1)
    else:
        raise SchemaError(f"unknown experiment {name!r}")
    _emit(doc, args.format, out)
    return 1 if doc.get("violations") else 0


def cmd_pq_check(args, out) -> int:
    inst = load_instance(args.input)
    if inst.hypergraph is not None:
        h = inst.hypergraph
    else:
        h = nerve_report(inst.objects, _spec(args, inst)).hypergraph
    if args.families:
        if inst.families is None:
            raise SchemaError("--families needs a 'families' record in the instance")
        fams = [[h.vertices[i] for i in f] for f in inst.families]
        res = heterochromatic_check(h, fams, args.p, semantics=args.semantics)
        doc = {"check": "heterochromatic", "semantics": args.semantics, "p": args.p, "holds": res.holds,
               "witness": list(res.witness) if res.witness else None,
               "families": list(res.family_indices) if res.family_indices else None}
    else:
        ok, witness = pq_condition(h, args.p)
        doc = {"check": "pq", "p": args.p, "q": h.q, "holds": ok,
               "independent_witness": list(witness) if witness else None}
    _emit(doc, args.format, out)
    return 0


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--markdown", dest="format", action="store_const", const="markdown", help="Markdown table output")
    common.set_defaults(format="json")
    common.add_argument("--limit", action="append", metavar="NAME=VALUE",
                        help="override a search cap (repeatable), e.g. vertices=60")
    common.add_argument("--d", type=int, help="ambient dimension")
    common.add_argument("--k", type=int, help="flat dimension")
    common.add_argument("--q", type=int, help="uniformity")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="hellylab", description="Transversal and nerve computations for geometric families.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nerve", parents=[common], help="build the q-uniform nerve of an instance")
    p.add_argument("input")
    p.add_argument("--kind", choices=[k.value for k in NerveKind])
    p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("pierce", parents=[common], help="piercing numbers with certificates")
    p.add_argument("input")
    p.add_argument("--candidates", choices=["points", "axisflats", "lattice", "lines"], default="points")
    p.set_defaults(func=cmd_pierce)

    p = sub.add_parser("homogenize", parents=[common], help="homogenize blocks or plan block sizes")
    p.add_argument("input", nargs="?")
    p.add_argument("--p", type=int)
    p.add_argument("--targets", help="comma-separated target block sizes")
    p.add_argument("--plan-only", action="store_true")
    p.set_defaults(func=cmd_homogenize)

    p = sub.add_parser("generate", parents=[common], help="write a seeded instance")
    p.add_argument("kind", choices=generators.GENERATORS)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--s", type=int, default=9)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--m", type=int, default=3, help="inner family size for counterexample-1d")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("experiment", parents=[common], help="run a seeded campaign")
    p.add_argument("name", choices=["frac-helly-boxes", "claim17", "claim18", "growth"])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--s", type=int, default=9)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--adversarial", action="store_true")
    p.add_argument("--generator", default="nested", choices=["nested", "disjoint-intervals", "random-boxes"])
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("pq-check", parents=[common], help="(p,q) or heterochromatic condition")
    p.add_argument("input")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--kind", choices=[k.value for k in NerveKind])
    p.add_argument("--families", action="store_true", help="check heterochromatic sequences over the instance families")
    p.add_argument("--semantics", choices=["subsequence", "all-families"], default="subsequence")
    p.set_defaults(func=cmd_pq_check)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = os.environ.get("HELLYLAB_LIMIT")
    try:
        _apply_limits(args.limit)
        return args.func(args, out)
    except HellyLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if saved is None:
            os.environ.pop("HELLYLAB_LIMIT", None)
        else:
            os.environ["HELLYLAB_LIMIT"] = saved


if __name__ == "__main__":
    sys.exit(main())
