import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from forcelab.cli import run
from forcelab.report import load_schema

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
EXAMPLES = str(CORPUS / "examples.sexp")
FAILING = str(CORPUS / "failing.sexp")


def _json(*argv):
    code, text = run(list(argv) + ["--out", "json"])
    doc = json.loads(text)
    jsonschema.validate(doc, load_schema())
    return code, doc


def test_complete_cohen2():
    code, doc = _json("complete", "cohen2")
    assert code == 0 and doc["ok"]
    res = doc["results"][0]
    assert res["carrier_size"] == 16 and res["atoms"] == 4
    assert res["dense_embedding"] == "dense"


def test_generics_cohen2_sorted():
    code, doc = _json("generics", "cohen2")
    gens = doc["results"][0]["generics"]
    assert code == 0 and len(gens) == 4
    assert gens == sorted(gens)
    assert gens[0] == ["0", "00", "root"]


def test_forces_on_defined_formula():
    code, doc = _json("-i", EXAMPLES, "forces", "0", "left-code")
    res = doc["results"][0]
    assert code == 0 and res["forced"] and res["routes_agree"]
    assert res["forcing_set"] == ["0", "00", "01"]


def test_forces_inline_formula():
    code, doc = _json("forces", "--poset", "cohen1", "(in (check (code 0)) (gdot))")
    assert code == 0 and doc["results"][0]["forcing_set"] == ["0"]


def test_bval_and_valuate():
    code, doc = _json("-i", EXAMPLES, "bval", "nonempty")
    assert code == 0 and doc["results"][0]["conditions"] == ["0", "00", "01"]
    code, doc = _json("-i", EXAMPLES, "valuate", "left", "--generic", "00,0,r")
    assert code == 0 and doc["results"][0]["valuations"] == [{"generic": ["0", "00", "r"], "value": "{{}}"}]


def test_star_product_iterate():
    assert _json("-i", EXAMPLES, "star", "vee-diamond")[0] == 0
    assert _json("star", "cohen1", "fan2")[0] == 0
    code, doc = _json("product", "antichain2", "cohen1")
    assert code == 0 and doc["results"][0]["generics"] == 4
    code, doc = _json("-i", EXAMPLES, "iterate", "cohen-cohen")
    assert code == 0 and doc["results"][0]["sizes"] == [1, 4, 16]


def test_validate_lists_definitions():
    code, doc = _json("-i", EXAMPLES, "validate")
    titles = [r["title"] for r in doc["results"]]
    assert code == 0
    assert "name g" in titles and "twostep vee-diamond" in titles


@pytest.mark.parametrize("suite", ["algebra-laws", "names", "product", "iteration", "claims"])
def test_suites_pass(suite):
    code, doc = _json("-i", EXAMPLES, "check", suite, "--max-poset", "4")
    assert code == 0, doc["results"]


def test_output_is_deterministic():
    argv = ["-i", EXAMPLES, "check", "twostep", "--max-poset", "4"]
    assert run(argv) == run(argv)
    assert run(argv + ["--out", "json"]) == run(argv + ["--out", "json"])


def test_failing_claim_exits_one_with_counterexample():
    code, text = run(["-i", FAILING, "check", "claims"])
    assert code == 1
    assert "status: FAIL" in text and "counterexamples:" in text
    code, doc = _json("-i", FAILING, "check", "claims")
    assert code == 1 and doc["summary"]["failed"] >= 1


def test_parse_error_exits_two_with_location(tmp_path):
    bad = tmp_path / "bad.sexp"
    bad.write_text("(defname a cohen1\n  (name (entry (empty) 1))\n")
    code, doc = _json("-i", str(bad), "validate")
    assert code == 2
    assert f"{bad}:1:1" in doc["error"]


def test_unknown_reference_exits_two():
    code, doc = _json("generics", "nowhere")
    assert code == 2 and doc["error"].startswith("UnknownReference")


def test_usage_error_exits_two():
    code, doc = _json("complete")
    assert code == 2 and "usage" in doc["error"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "forcelab.cli", "generics", "antichain2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "status: PASS" in proc.stdout
