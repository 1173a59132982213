import io
import json
import subprocess
import sys

import pytest

from hellylab import generators
from hellylab.cli import main
from hellylab.geometry import Box, VPolytope, interval
from hellylab.hypergraph import Hypergraph, independence_number
from hellylab.instance import validate
from hellylab.nerve import NerveSpec, build_nerve


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def write(tmp_path, doc, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def boxes_doc(objs, **spec):
    return {"version": "1", "objects": [o.to_json() for o in objs], "spec": spec}


def test_nerve_intervals(tmp_path):
    path = write(tmp_path, boxes_doc([interval(0, 2), interval(1, 3), interval(5, 6)]))
    code, out = run(["nerve", path, "--kind", "convex", "--d", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["q"] == 2 and doc["edges"] == [["0", "1"]]


def test_nerve_boxflat_matches_library(tmp_path):
    objs = generators.random_boxes(7, 2, seed=5)
    path = write(tmp_path, boxes_doc(objs))
    code, out = run(["nerve", path, "--kind", "boxflat", "--d", "2", "--k", "1"])
    assert code == 0
    expected = build_nerve(objs, NerveSpec("boxflat", 2, k=1)).to_json()
    assert out == json.dumps(expected, indent=2) + "\n"


def test_malformed_json_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    assert run(["nerve", str(path), "--kind", "convex", "--d", "1"])[0] == 2


def test_schema_violation_exit_2(tmp_path):
    path = write(tmp_path, {"version": "1", "objects": [{"type": "box", "lo": [0]}]})
    assert run(["nerve", path, "--kind", "convex", "--d", "1"])[0] == 2
    path = write(tmp_path, {"objects": []}, "nover.json")
    assert run(["nerve", path, "--kind", "convex", "--d", "1"])[0] == 2


def test_limit_exit_3(tmp_path):
    path = write(tmp_path, boxes_doc([interval(i, i + 1) for i in range(12)]))
    assert run(["nerve", path, "--kind", "convex", "--d", "1", "--limit", "enumeration=10"])[0] == 3


def test_pierce_disjoint_intervals(tmp_path):
    path = write(tmp_path, boxes_doc(generators.disjoint_intervals(5, seed=1)))
    code, out = run(["pierce", path, "--candidates", "points"])
    doc = json.loads(out)
    assert code == 0 and doc["tau"] == 5 and doc["nu"] == 5 and doc["tau_star"] == 5
    validate(doc["certificate"], "certificate")


def test_pierce_lattice_tau_one(tmp_path):
    objs = [Box(("1/2", "1/2"), ("3/2", "3/2")), Box(("9/10", "9/10"), ("21/10", "21/10"))]
    code, out = run(["pierce", write(tmp_path, boxes_doc(objs)), "--candidates", "lattice"])
    assert code == 0 and json.loads(out)["tau"] == 1


def test_pierce_triangle_fraction(tmp_path):
    # segments near a triangle's sides, pushed outward: every line meets at most two
    segs = [VPolytope(((-1, -1), (1, -1))), VPolytope(((5, 4), (6, 5))), VPolytope(((-6, 5), (-5, 4)))]
    code, out = run(["pierce", write(tmp_path, boxes_doc(segs)), "--candidates", "lines"])
    doc = json.loads(out)
    assert code == 0
    assert doc["tau_star"] == "3/2" and doc["tau"] == 2 and doc["nu"] == 1


def test_pierce_infeasible_exit_4(tmp_path):
    objs = [Box(("1/4",), ("3/4",))]
    assert run(["pierce", write(tmp_path, boxes_doc(objs)), "--candidates", "lattice"])[0] == 4


def test_homogenize_plan_only():
    code, out = run(["homogenize", "--plan-only", "--q", "2", "--targets", "2,2"])
    assert code == 0 and json.loads(out)["plan"] == [2, 8]


def hom_doc(h, blocks):
    return {"version": "1", "hypergraph": h.to_json(), "blocks": blocks}


def test_homogenize_already_homogeneous(tmp_path):
    h = Hypergraph(2, list("abcd"), [])
    code, out = run(["homogenize", write(tmp_path, hom_doc(h, [["a", "b"], ["c", "d"]])), "--p", "1"])
    doc = json.loads(out)
    assert code == 0 and doc["trace"] == [] and doc["homogeneous"]


def test_homogenize_random_q3(tmp_path):
    import random
    from itertools import combinations
    rng = random.Random(9)
    blocks = [[f"{i}.{j}" for j in range(2)] for i in range(4)]
    verts = [v for b in blocks for v in b]
    h = Hypergraph(3, verts, [e for e in combinations(verts, 3) if rng.random() < 0.5])
    code, out = run(["homogenize", write(tmp_path, hom_doc(h, blocks)), "--p", "1"])
    doc = json.loads(out)
    assert code == 0 and doc["homogeneous"]
    validate(doc["trace"], "trace")


def test_homogenize_shortfall_exit_5(tmp_path):
    blocks = [["a"], ["b", "c"], ["d", "e"], ["f", "g"]]
    h = Hypergraph(2, list("abcdefg"), [("a", "b"), ("a", "d"), ("a", "f")])
    code, out = run(["homogenize", write(tmp_path, hom_doc(h, blocks)), "--p", "1", "--targets", "1,2,2,2"])
    doc = json.loads(out)
    assert code == 5 and doc["status"] == "shortfall" and "achieved_sizes" in doc


def test_generate_deterministic():
    a = run(["generate", "disjoint-intervals", "--n", "5", "--seed", "1"])[1]
    b = run(["generate", "disjoint-intervals", "--n", "5", "--seed", "1"])[1]
    assert a == b
    assert json.loads(a)["generator"]["rng"] == "python-random-mt19937"


def test_generate_matching_complement():
    doc = json.loads(run(["generate", "matching-complement", "--n", "6"])[1])
    assert independence_number(Hypergraph.from_json(doc["hypergraph"]))[0] == 2


@pytest.mark.parametrize("kind", generators.GENERATORS)
def test_generated_instances_round_trip(kind, tmp_path):
    path = str(tmp_path / f"{kind}.json")
    assert run(["generate", kind, "--n", "6", "--seed", "2", "--d", "2", "--s", "3", "-o", path])[0] == 0
    doc = json.loads(open(path, encoding="utf-8").read())
    validate(doc, "instance")
    if "hypergraph" in doc:
        code, out = run(["pq-check", path, "--p", "3"])
    else:
        code, out = run(["pq-check", path, "--p", "3"])
    assert code == 0 and "holds" in json.loads(out)


def test_pq_check_counterexample_families(tmp_path):
    path = str(tmp_path / "ce.json")
    run(["generate", "counterexample-1d", "--n", "4", "--m", "3", "--seed", "1", "-o", path])
    doc = json.loads(run(["pq-check", path, "--p", "3", "--families"])[1])
    assert doc["holds"] is False and len(doc["witness"]) == 3
    doc = json.loads(run(["pq-check", path, "--p", "3", "--families", "--semantics", "all-families"])[1])
    assert doc["holds"] is True


def test_experiments():
    code, out = run(["experiment", "frac-helly-boxes", "--trials", "20", "--seed", "3"])
    assert code == 0 and json.loads(out)["violations"] == 0
    code, out = run(["experiment", "claim18", "--trials", "10", "--d", "2", "--k", "0"])
    assert code == 0 and json.loads(out)["violations"] == 0
    code, out = run(["experiment", "claim17", "--trials", "3", "--s", "9", "--t", "2"])
    assert code == 0
    code, out = run(["experiment", "growth", "--generator", "nested", "--n", "5"])
    assert [r["independence"] for r in json.loads(out)["rows"]] == [1] * 5


def test_markdown_output():
    code, out = run(["homogenize", "--plan-only", "--q", "2", "--targets", "2,2", "--markdown"])
    assert code == 0 and out.startswith("## report") and "| plan | [2, 8] |" in out


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "hellylab.cli", "homogenize", "--plan-only", "--q", "2",
                          "--targets", "1,1,1"], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["plan"] == [1, 2, 8]
