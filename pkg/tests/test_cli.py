import io
import json
import subprocess
import sys

import pytest

from fintqft.cli import run
from fintqft.frobenius import dumps_algebra

import algebras


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_identity():
    code, out, _ = call("eval", "--expr", "id", "--group", "S3")
    assert code == 0
    assert out == "1\t0\t0\n0\t1\t0\n0\t0\t1\n"


def test_invariant_all_backends():
    code, out, _ = call("invariant", "--genus", "2", "--group", "S3", "--backend", "all")
    assert code == 0
    assert out.splitlines() == ["count\tfrobenius\tspan", "81\t81\t81"]


def test_malformed_expression():
    code, out, err = call("normalize", "--expr", "mult ;")
    assert code == 1
    assert out == "" and "error" in err


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["eval", "--expr", "id"],
    ["eval", "--expr", "id", "--group", "S3", "--bogus"],
    ["eval", "--expr", "mult ; mult", "--group", "S3"],
    ["eval", "--expr", "id", "--group", "NOPE"],
    ["validate", "--algebra", "/nonexistent/file.json"],
    ["invariant", "--lens", "3", "--group", "S3"],
    ["invariant", "--torus3", "--group", "S3", "--backend", "span"],
    ["invariant", "--genus", "-1", "--group", "S3"],
    [],
])
def test_user_errors_exit_1(argv):
    code, _, err = call(*argv)
    assert code == 1
    assert err


def test_resource_cap_exit_2(monkeypatch):
    monkeypatch.setenv("TQFT_ENUM_CAP", "100")
    code, _, err = call("invariant", "--genus", "2", "--group", "S3")
    assert code == 2
    assert "cap" in err


def test_help_exits_0():
    code, out, _ = call("--help")
    assert code == 0


def test_parse_tsv_and_json():
    code, out, _ = call("parse", "--expr", "mult * id ; mult")
    assert code == 0
    assert out.splitlines() == ["term\t((mult * id) ; mult)", "in\t3", "out\t1"]
    code, out, _ = call("parse", "--expr", "unit ; counit", "--format", "json")
    assert json.loads(out)["op"] == "compose"


def test_normalize_output():
    code, out, _ = call("normalize", "--expr", "id * (unit ; counit)")
    assert out.splitlines() == [
        "kind\tin\tout\tgenus\tin_ports\tout_ports",
        "component\t1\t1\t0\t0\t0",
        "closed\t0\t0\t0\t-\t-",
    ]
    code, out, _ = call("normalize", "--expr", "comult ; mult", "--format", "json")
    assert json.loads(out)["components"][0]["genus"] == 1


def test_validate(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(dumps_algebra(algebras.dual_numbers()))
    code, out, _ = call("validate", "--algebra", str(good))
    assert code == 0
    assert out.splitlines()[0] == "axiom\tstatus\twitness"
    assert all(line.split("\t")[1] == "pass" for line in out.splitlines()[1:])

    bad = tmp_path / "bad.json"
    bad.write_text(dumps_algebra(algebras.non_commutative()))
    code, out, _ = call("validate", "--algebra", str(bad), "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert not doc["ok"]
    comm = next(c for c in doc["checks"] if c["axiom"] == "commutativity")
    assert comm["status"] == "fail" and comm["witness"]


def test_eval_with_algebra_file(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(dumps_algebra(algebras.split(["1/2", "1/3"])))
    code, out, _ = call("eval", "--expr", "unit ; counit", "--algebra", str(path))
    assert (code, out) == (0, "5/6\n")


def test_quantize_matches_eval():
    for expr in ("mult", "comult ; mult", "twist ; mult ; comult"):
        _, a, _ = call("eval", "--expr", expr, "--group", "S3")
        _, b, _ = call("quantize", "--expr", expr, "--group", "S3")
        assert a == b
    code, out, _ = call("quantize", "--expr", "unit ; counit", "--group", "Q8", "--format", "json")
    assert json.loads(out)["matrix"] == [["1/8"]]


def test_invariant_manifolds(tmp_path):
    assert call("invariant", "--lens", "3,1", "--group", "S3")[1] == "count\n1/2\n"
    assert call("invariant", "--torus3", "--group", "Z3")[1] == "count\n9\n"
    pres = tmp_path / "torus.txt"
    pres.write_text("# torus\n2\na b a^-1 b^-1\n")
    assert call("invariant", "--presentation", str(pres), "--group", "S3")[1] == "count\n3\n"
    code, out, _ = call("invariant", "--genus", "1", "--group", "Q8", "--backend", "all", "--format", "json")
    assert json.loads(out) == {"count": "5", "frobenius": "5", "span": "5", "all_equal": True}


def test_oracle_table():
    code, out, _ = call("oracle", "--group", "Z2", "--max-genus", "2")
    assert code == 0
    assert out.splitlines() == [
        "genus\tcount\tfrobenius\tspan\tall_equal",
        "0\t1/2\t1/2\t1/2\ttrue",
        "1\t2\t2\t2\ttrue",
        "2\t8\t8\t8\ttrue",
    ]


def test_byte_identical_runs():
    argv = ("oracle", "--group", "S3", "--max-genus", "2", "--format", "json")
    assert call(*argv) == call(*argv)
    argv = ("eval", "--expr", "comult ; (id * comult)", "--group", "D4")
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fintqft", "invariant", "--genus", "1", "--group", "S3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "count\n3\n"
    proc = subprocess.run([sys.executable, "-m", "fintqft", "normalize", "--expr", "mult ;"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 1
