import io
import json

import pytest

from depthkit.cli import main
from depthkit.suite import fixture_text


@pytest.fixture
def fixtures(tmp_path):
    paths = {}
    for k in ("k1", "k2", "k3"):
        p = tmp_path / f"{k}.inst"
        p.write_text(fixture_text(f"{k}.inst"))
        paths[k] = str(p)
    return paths


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_depth(fixtures):
    code, text = run("depth", fixtures["k1"], "M")
    assert code == 0 and text == "depth M = 1\n"


def test_depth_machine(fixtures):
    code, text = run("depth", fixtures["k3"], "M", "--format", "machine")
    doc = json.loads(text)
    assert code == 0 and doc["exit_code"] == 0
    assert doc["result"]["depth"] == 2
    assert doc["result"]["auslander_buchsbaum"] == doc["result"]["ext_route"] == 2
    assert doc["command"][:3] == ["depth", fixtures["k3"], "M"]
    assert doc["options"]["bound"] == 8


def test_check_formula_exit_codes(fixtures):
    assert run("check-formula", fixtures["k1"], "M", "N")[0] == 0
    code, text = run("check-formula", fixtures["k2"], "M", "N")
    assert code == 1 and "Fails: Tor_1" in text
    assert run("check-formula", fixtures["k3"], "M", "N")[0] == 0


def test_tor(fixtures):
    code, text = run("tor", fixtures["k2"], "M", "N", "--index", "3", "--dmax", "4")
    assert code == 1
    lines = text.splitlines()
    assert lines[1] == "Tor_1(M,N) hilbert [0, 1, 0, 0, 0]"
    assert lines[2] == "Tor_2(M,N) hilbert [0, 0, 0, 0, 0]"
    assert lines[-1] == "Tor-independence: Fails (witness i = 1)"
    assert run("tor", fixtures["k1"], "M", "N")[0] == 0


def test_resolve(fixtures):
    code, text = run("resolve", fixtures["k2"], "M", "--length", "3", "--certify",
                     "--format", "machine")
    doc = json.loads(text)
    assert code == 0
    assert doc["result"]["betti"] == [1, 1, 1, 1]
    assert not doc["result"]["complete"]
    assert all(doc["result"]["certificate"].values())
    code, text = run("resolve", fixtures["k2"], "M", "--over", "S")
    assert code == 0 and text.startswith("betti [1, 1]\ncomplete")


def test_tensor(fixtures):
    code, text = run("tensor", fixtures["k1"], "M", "N", "--dmax", "3")
    assert code == 0
    assert text.endswith("hilbert [1, 0, 0, 0]\n")


def test_reduce(fixtures):
    code, text = run("reduce", fixtures["k3"], "M", "N")
    assert code == 0 and text.rstrip().endswith("verified")
    code, text = run("reduce", fixtures["k2"], "M", "N")
    assert code == 3 and "Tor-independent" in text


def test_input_errors(fixtures, tmp_path):
    assert run("depth", fixtures["k1"], "Q")[0] == 3
    assert run("depth", str(tmp_path / "missing.inst"), "M")[0] == 3
    bad = tmp_path / "bad.inst"
    bad.write_text("module M\n  rank 1\nend\n")
    code, text = run("depth", str(bad), "M", "--format", "machine")
    assert code == 3 and json.loads(text)["result"]["error"] == "ParseError"
    bad.write_text("ring\n  vars x y\n  relation x + y^2\nend\n")
    assert run("depth", str(bad), "M")[0] == 3


def test_suite_file_only(fixtures):
    code, text = run("suite", fixtures["k1"], "--no-families", "--checks",
                     "depth_formula,depth_oracles", "--format", "machine")
    doc = json.loads(text)
    assert code == 0
    assert doc["result"]["instances"] == 1
    assert doc["result"]["tallies"]["depth_formula"]["Holds"] == 1


def test_suite_machine_output_is_byte_identical():
    argv = ("suite", "--count", "1", "--checks", "depth_formula,pd_shift", "--format",
            "machine")
    a, b = run(*argv), run(*argv)
    assert a == b and a[0] == 0
