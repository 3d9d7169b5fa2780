import json
import subprocess
import sys

import pytest

from corpus import table
from prodmix.cli import main
from prodmix.io import corpus_path, dump_char_table


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, out, json.loads(out) if out.startswith("{") else None


def test_zeta(capsys):
    status, _, doc = run(capsys, "zeta", "--group", "a5", "--x", "2")
    assert status == 0 and doc["status"] == 0
    assert doc["result"]["zeta"] == pytest.approx(1.32472, abs=1e-5)
    assert doc["config"]["group"] == "a5" and doc["tool"] == "prodmix"


def test_identities(capsys):
    status, _, doc = run(capsys, "identities", "--group", "s3", "--seed", "7", "--trials", "100")
    assert status == 0 and doc["result"]["failures"] == []


def test_classes_and_mindeg(capsys):
    _, _, doc = run(capsys, "classes", "--group", "psl27")
    assert doc["status"] == 0
    _, _, doc = run(capsys, "mindeg", "--group", "sl28")
    assert doc["result"]["min_nontrivial_degree"] == 7


def test_chartable_export_round_trip(capsys, tmp_path):
    out = tmp_path / "a5_table.json"
    assert main(["chartable", "--group", "a5", "--export", "--output", str(out)]) == 0
    assert out.read_text() == dump_char_table(table("a5"))
    status, _, doc = run(capsys, "zeta", "--group", "a5", "--table", str(out), "--x", "2")
    assert status == 0 and doc["result"]["zeta"] == pytest.approx(1.32472, abs=1e-5)


def test_malformed_table_exits_2(capsys):
    bad = corpus_path("s3").parent / "malformed" / "s3_table_perturbed.json"
    status, _, doc = run(capsys, "mindeg", "--group", "s3", "--table", str(bad))
    assert status == 2 and doc["error"]["code"] == "ValidationFailed"


@pytest.mark.parametrize("fixture,code", [
    ("broken_syntax.json", "SyntaxError"), ("bad_degree.json", "SyntaxError"), ("not_bijection.json", "NotABijection"),
])
def test_malformed_groups_exit_2(capsys, fixture, code):
    path = corpus_path("s3").parent / "malformed" / fixture
    status, _, doc = run(capsys, "classes", "--group", str(path))
    assert status == 2 and doc["error"]["code"] == code


def test_error_exits(capsys):
    status, _, doc = run(capsys, "prob", "--group", "s3", "--A", "empty", "--B", "all", "--C", "all")
    assert status == 2 and doc["error"]["code"] == "EmptySet"
    status, _, doc = run(capsys, "classes", "--group", "no_such_group")
    assert status == 2
    status, _, doc = run(capsys, "mindeg", "--group", "trivial")
    assert status == 2 and doc["error"]["code"] == "TrivialGroup"
    status, _, doc = run(capsys, "propagate", "--group", "c2", "--epsilon", "0.4", "--eta", "0.1")
    assert status == 2 and doc["error"]["code"] == "PreconditionNotCertified"


def test_certify_outcomes(capsys, tmp_path):
    status, _, doc = run(capsys, "certify", "--group", "c2", "--epsilon", "0.4", "--eta", "0.1")
    assert status == 1 and doc["result"]["outcome"] == "refuted"
    assert doc["result"]["counterexample"]["prob"] == "0/1"
    status, _, doc = run(capsys, "certify", "--group", "a5", "--epsilon", "1.5", "--eta", "0.5")
    assert status == 0 and doc["result"]["outcome"] == "certified"
    req = tmp_path / "req.json"
    req.write_text(json.dumps({"group": "a5", "epsilon": 0.5, "eta": 0.9, "i": 3}))
    status, _, doc = run(capsys, "certify", "--request", str(req))
    assert status == 0 and doc["result"]["trials"] == 4096


def test_counting_commands(capsys):
    status, _, doc = run(capsys, "count", "--group", "s3", "--A", "class:2", "--B", "class:2", "--C", "[0]", "--g", "0")
    assert status == 0 and doc["result"]["count"] == 3
    assert doc["result"]["triples"] == doc["result"]["translated_count"]
    status, _, doc = run(capsys, "prob", "--group", "s3", "--A", "all", "--B", "all", "--C", "class:1")
    assert doc["result"]["prob"] == "1/3"
    status, _, doc = run(capsys, "frobenius", "--group", "a5", "--all")
    assert status == 0 and doc["result"]["mismatches"] == 0 and len(doc["result"]["triples"]) == 125
    status, _, doc = run(capsys, "frobenius", "--group", "a5", "--i", "4", "--j", "4", "--l", "4")
    assert status == 0 and "bound" in doc["result"]["triples"][0]


def test_window_commands(capsys):
    status, _, doc = run(capsys, "gowers", "--group", "psl27", "--A", "all", "--B", "all", "--C", "class:5")
    assert status == 0 and doc["result"]["hypothesis_holds"]
    status, _, doc = run(capsys, "trick", "--group", "a5", "--A", "all", "--B", "all", "--C", "all", "--g", "3")
    assert status == 0
    status, _, doc = run(capsys, "gowers", "--group", "a5", "--A", "class:1", "--B", "class:1", "--C", "class:1",
                         "--eta", "0.01")
    assert status == 1


def test_scan_split_bounds_report(capsys):
    _, _, doc = run(capsys, "ratio-scan", "--group", "s3", "--target", "0.1")
    assert {r["alpha"] for r in doc["result"]["rows"] if r["class"] == 2} == {"vanishing"}
    status, _, doc = run(capsys, "split", "--group", "a5", "--X", "union:[0,1,3,4]", "--threshold", "12")
    assert status == 0 and doc["result"]["X1"] == "union:[3,4]" and doc["result"]["large_class"] == 4
    status, _, doc = run(capsys, "bounds", "--group", "a5", "--A", "all", "--B", "union:[3,4]", "--C", "all",
                         "--eta", "0.3", "--threshold", "12")
    assert status == 0 and doc["result"]["verdicts"]["chain"]
    status, _, doc = run(capsys, "report", "--group", "sl28", "--delta", "0.5", "--eta", "0.2")
    assert status == 0 and "checks" in doc["result"]


def test_output_is_deterministic(tmp_path):
    args = ["certify", "--group", "a5", "--epsilon", "0.5", "--eta", "0.9", "--i", "2", "--budget", "40", "--seed", "9"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(args + ["--output", str(a)])
    main(args + ["--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "prodmix", "zeta", "--group", "s3", "--x", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["zeta"] == pytest.approx(2.5)
