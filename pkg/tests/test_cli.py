import json
import subprocess
import sys

import pytest

from umagma.actions import canonical_point, trivial_action
from umagma.cli import main
from umagma.examples import inversion_action
from umagma.io import (DocumentError, action_to_doc, dumps, from_doc, magma_to_doc,
                       map_to_doc, point_to_doc)
from umagma.magma import ElementMap, cyclic_group, trivial_magma
from umagma.points import direct_product_point

Z2 = cyclic_group(2)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(dumps(doc))
    return str(path)


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_document_round_trips():
    pt = canonical_point(inversion_action())
    for obj, doc in ((Z2, magma_to_doc(Z2)), (ElementMap(2, 3, (0, 2)), map_to_doc(ElementMap(2, 3, (0, 2)))),
                     (pt, point_to_doc(pt)), (inversion_action(), action_to_doc(inversion_action()))):
        assert from_doc(json.loads(dumps(doc))) == obj


@pytest.mark.parametrize("doc", [
    {"kind": "magma", "size": 1, "unit": 0, "table": [[0]], "extra": 1},
    {"kind": "magma", "size": 1, "unit": 0},
    {"kind": "magma", "size": True, "unit": 0, "table": [[0]]},
    {"kind": "nonsense"},
    [1, 2],
])
def test_bad_documents_rejected(doc):
    with pytest.raises(DocumentError):
        from_doc(doc)


def test_verify_exit_codes(tmp_path, capsys):
    good = write(tmp_path, "a.json", action_to_doc(trivial_action(trivial_magma())))
    assert run(capsys, "verify", good)[0] == 0
    bad = action_to_doc(inversion_action())
    bad["phi"][1] = 2
    status, doc = run(capsys, "verify", write(tmp_path, "bad.json", bad))
    assert status == 1 and not doc["valid"]
    assert all("witness" in v for v in doc["violations"])
    extra = magma_to_doc(Z2) | {"colour": "red"}
    status, doc = run(capsys, "verify", write(tmp_path, "x.json", extra))
    assert status == 2 and doc["kind"] == "error"
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert run(capsys, "verify", str(tmp_path / "junk.json"))[0] == 2


def test_canonical_point_then_classify_is_identity(tmp_path, capsys):
    a = action_to_doc(inversion_action())
    status, pt = run(capsys, "build", "canonical-point", write(tmp_path, "a.json", a))
    assert status == 0 and pt["kind"] == "point"
    status, back = run(capsys, "classify", write(tmp_path, "p.json", pt))
    assert status == 0 and back == a
    status, sdp = run(capsys, "build", "sdp", write(tmp_path, "a.json", a))
    assert status == 0 and len(sdp["pairs"]) == 6


def test_equivalent(tmp_path, capsys):
    pt = canonical_point(inversion_action())
    p1 = write(tmp_path, "p1.json", point_to_doc(pt))
    status, doc = run(capsys, "equivalent", p1, p1)
    assert status == 0 and doc["equivalent"] and doc["alpha"]["values"] == list(range(6))
    other = direct_product_point(cyclic_group(3), Z2)
    p2 = write(tmp_path, "p2.json", point_to_doc(other))
    status, doc = run(capsys, "equivalent", p1, p2)
    assert status == 1 and not doc["equivalent"] and "argument" in doc["witness"]


def test_pullback_and_compose(tmp_path, capsys):
    pt = direct_product_point(Z2, Z2)
    p = write(tmp_path, "p.json", point_to_doc(pt))
    g = write(tmp_path, "g.json", map_to_doc(ElementMap(1, 2, (0,))))
    z = write(tmp_path, "z.json", magma_to_doc(trivial_magma()))
    status, doc = run(capsys, "build", "pullback", p, g, z)
    assert status == 0 and doc["A"]["size"] == 2
    assert run(capsys, "build", "pullback", p, g)[0] == 2
    partner = write(tmp_path, "c.json", point_to_doc(direct_product_point(Z2, trivial_magma())))
    status, doc = run(capsys, "build", "compose", p, partner)
    assert status == 0 and doc["kind"] == "point" and doc["B"]["size"] == 1
    status, doc = run(capsys, "build", "compose", partner, p)
    assert status == 2 and doc["kind"] == "error"


def test_enumerate_and_quotient(tmp_path, capsys):
    b = write(tmp_path, "b.json", magma_to_doc(Z2))
    status, doc = run(capsys, "enumerate", "actions", "--x", "2", "--b-file", b)
    assert status == 0 and doc["count"] == 130
    status, doc = run(capsys, "enumerate", "actions", "--x", "2", "--b-file", b, "--any-zero")
    assert doc["count"] == 260
    status, doc = run(capsys, "quotient", "--x", "2", "--b-file", b)
    assert status == 0 and doc["totals"] == {"points": 772, "classes": 130, "actions": 130}
    status, doc = run(capsys, "enumerate", "actions", "--x", "2", "--b-file", b,
                      "--max-candidates", "10")
    assert status == 2 and "bound" in doc["error"]
    assert run(capsys, "enumerate", "points", "--x", "2", "--b-file", b, "--max-a", "9")[0] == 2
    assert run(capsys, "enumerate", "points", "--x", "0", "--b-file", b)[0] == 2
    assert run(capsys, "enumerate", "points", "--x", "2")[0] == 2


def test_examples(tmp_path, capsys):
    status, doc = run(capsys, "examples", "interval", "--samples", "500")
    assert status == 0 and doc["nonassociativity"] == {"(+1+-1)+-1": -1.0, "+1+(-1+-1)": 0.0}
    assert run(capsys, "examples", "sphere", "--samples", "500")[0] == 0
    status, doc = run(capsys, "examples", "adjoin")
    assert status == 0 and not all(doc["trace_flags"].values())
    status, doc = run(capsys, "examples", "medial")
    assert status == 0 and doc["points"] == doc["classes"] == 1
    assert run(capsys, "examples", "sphere", "--tol", "0")[0] == 2
    nonmedial = {"kind": "magma", "size": 3, "unit": 0, "table": [[0, 1, 2], [1, 0, 0], [2, 0, 0]]}
    status, doc = run(capsys, "examples", "medial", "--b-file", write(tmp_path, "m.json", nonmedial))
    assert status == 1


def test_out_file_and_determinism(tmp_path, capsys):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["--out", str(out1), "examples", "sphere", "--samples", "300", "--seed", "5"]) == 0
    assert main(["examples", "sphere", "--samples", "300", "--seed", "5", "--out", str(out2)]) == 0
    assert capsys.readouterr().out == ""
    assert out1.read_bytes() == out2.read_bytes()


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "m.json", magma_to_doc(Z2))
    proc = subprocess.run([sys.executable, "-m", "umagma", "verify", path],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"kind": "verification", "target": "magma",
                                       "valid": True, "violations": []}
