import io
import json
import subprocess
import sys

import pytest

from ncploc import cli
from ncploc.ncp import catalan


def invoke(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_intervals():
    code, out, _ = invoke("intervals", "--n", "2")
    assert code == 0
    assert records(out) == [[1, 1], [1, 2], [2, 2]]


def test_box():
    code, out, _ = invoke("box", "--n", "3", "--y", "2,2")
    assert code == 0
    assert records(out) == [{"base": [2, 2], "members": [[[1, 2], 0], [[2, 2], 0], [[3, 3], 1]]}]


@pytest.mark.parametrize("n", range(1, 6))
def test_enumerate_counts(n):
    code, out, _ = invoke("enumerate", "--n", str(n))
    assert code == 0
    assert len(records(out)) == catalan(n + 1)


def test_enumerate_example():
    _, out, _ = invoke("enumerate", "--n", "2")
    docs = records(out)
    assert len(docs) == 5
    assert {"n": 2, "support": [[1, 1], [2, 2]]} in docs


@pytest.mark.parametrize("n", range(1, 5))
def test_enumerate_matches_oracle(n):
    _, structural, _ = invoke("enumerate", "--n", str(n))
    _, oracle, _ = invoke("enumerate", "--n", str(n), "--oracle")
    assert structural == oracle


def test_check_plocal(tmp_path):
    good, bad = tmp_path / "good.json", tmp_path / "bad.json"
    good.write_text(json.dumps({"n": 2, "support": [[1, 1], [2, 2]]}))
    bad.write_text(json.dumps({"n": 2, "support": [[1, 1]]}))
    assert records(invoke("check", "--file", str(good))[1]) == [{"valid": True}]
    assert records(invoke("check", "--file", str(bad))[1]) == [{"valid": False}]


def test_check_support_tuple_from_stdin(monkeypatch):
    doc = {"n": 2, "universe": [7], "sets": {"1-1": [7], "1-2": [7], "2-2": []}}
    code, out, _ = invoke("check", "--file", "-", stdin=json.dumps(doc), monkeypatch=monkeypatch)
    assert code == 0 and records(out) == [{"valid": True}]


def test_psi_roundtrip(tmp_path):
    src = tmp_path / "t.json"
    src.write_text(json.dumps({"n": 2, "support": [[1, 1], [2, 2]]}))
    code, out, _ = invoke("psi", "--file", str(src))
    assert code == 0
    assert records(out) == [{"k": 3, "blocks": [[1, 3], [2]]}]
    part = tmp_path / "s.json"
    part.write_text(out)
    code, out, _ = invoke("psi-inv", "--file", str(part))
    assert code == 0
    assert records(out) == [{"n": 2, "support": [[1, 1], [2, 2]]}]


def test_psi_invalid_tuple(tmp_path):
    src = tmp_path / "t.json"
    src.write_text(json.dumps({"n": 2, "support": [[1, 1]]}))
    code, out, err = invoke("psi", "--file", str(src))
    assert code == 1 and out == ""
    assert records(err)[0]["error"] == "invalid_input"


def test_psi_inv_crossing(tmp_path):
    src = tmp_path / "s.json"
    src.write_text(json.dumps({"k": 4, "blocks": [[1, 3], [2, 4]]}))
    code, _, err = invoke("psi-inv", "--file", str(src))
    assert code == 1
    assert "error" in records(err)[0]


def test_lattice_and_dot(tmp_path):
    dot = tmp_path / "l.dot"
    code, out, _ = invoke("lattice", "--n", "3", "--dot", str(dot))
    assert code == 0
    (doc,) = records(out)
    assert len(doc["elements"]) == 14
    assert len(doc["covers"]) == 28
    text = dot.read_text()
    assert text.startswith("digraph") and text.count(" -> ") == 28


def test_product(tmp_path):
    code, out, _ = invoke("product", "--n", "2", "--primes", "0,2,3")
    assert code == 0
    (doc,) = records(out)
    assert len(doc["elements"]) == 125


def test_product_budget():
    code, out, err = invoke("product", "--n", "3", "--primes", "2,3,5")
    assert code == 2 and out == ""
    assert records(err)[0]["error"] == "budget_exceeded"
    assert invoke("product", "--n", "2", "--primes", "2,3,5,7", "--max-elements", "600")[0] == 2
    code, out, _ = invoke("product", "--n", "2", "--primes", "2,3,5,7", "--max-elements", "625")
    assert code == 0 and len(records(out)[0]["elements"]) == 625


def test_distributive():
    code, out, _ = invoke("distributive", "--n", "2", "--primes", "2")
    assert code == 0
    (doc,) = records(out)
    assert doc["distributive"] is False
    # coordinates (U_{2}, U_{12}, U_{1}) with p = 2
    triples = {tuple(tuple(w["sets"][key]) for key in ("2-2", "1-2", "1-1")) for w in doc["witness"]}
    assert triples == {((2,), (2,), ()), ((), (2,), (2,)), ((2,), (), (2,))}
    code, out, _ = invoke("distributive", "--n", "1", "--primes", "2,3")
    assert records(out) == [{"distributive": True}]


def test_catalan():
    assert invoke("catalan", "--k", "4")[1] == "14\n"
    assert invoke("catalan", "--k", "0")[0] == 1


def test_verify():
    code, out, _ = invoke("verify", "--n", "3")
    assert code == 0
    rows = records(out)
    assert rows and all(r["status"] == "pass" for r in rows)


def test_verify_failure_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "run_suite", lambda n: [("always_fails", False), ("fine", True)])
    code, out, _ = invoke("verify", "--n", "2")
    assert code == 3
    assert records(out)[0] == {"property": "always_fails", "n": 2, "status": "fail"}


def test_pretty():
    _, out, _ = invoke("box", "--n", "1", "--y", "1,1", "--pretty")
    assert "\n  " in out
    assert json.loads(out) == {"base": [1, 1], "members": [[[1, 1], 0]]}


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["intervals"],
        ["intervals", "--n", "x"],
        ["box", "--n", "3", "--y", "3,1"],
        ["box", "--n", "3", "--y", "1"],
        ["product", "--n", "2", "--primes", "4"],
        ["check", "--file", "/nonexistent/t.json"],
    ],
)
def test_invalid_input_exit_code(argv):
    code, out, err = invoke(*argv)
    assert code == 1 and out == ""
    assert records(err)[0]["error"] == "invalid_input"


def test_budget_exit_codes(monkeypatch):
    assert invoke("enumerate", "--n", "9")[0] == 2
    assert invoke("enumerate", "--n", "4", "--max-n", "3")[0] == 2
    assert invoke("enumerate", "--n", "4", "--oracle", "--max-bruteforce-bits", "9")[0] == 2
    monkeypatch.setenv("NCPLOC_BUDGET_BITS", "9")
    assert invoke("enumerate", "--n", "4", "--oracle")[0] == 2
    assert invoke("enumerate", "--n", "3", "--oracle")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate", "--n", "4"],
        ["lattice", "--n", "3"],
        ["distributive", "--n", "2", "--primes", "2"],
        ["product", "--n", "2", "--primes", "0,2"],
    ],
)
def test_deterministic(argv):
    assert invoke(*argv)[1] == invoke(*argv)[1]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ncploc", "catalan", "--k", "5"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout == "42\n"
    proc = subprocess.run([sys.executable, "-m", "ncploc", "enumerate", "--n", "99"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["error"] == "budget_exceeded"
