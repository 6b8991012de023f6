import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fincat.cli import main

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_validate_category():
    code, out, _ = run("validate", "One")
    assert code == 0
    assert "PASS category laws" in out


def test_relmonad_suite_on_arrow():
    code, out, _ = run("suite", "relmonad-laws", "Two")
    assert code == 0
    for law in ("unit laws", "associativity", "lax idempotency"):
        assert f"PASS {law}" in out


def test_aft_prints_the_galois_right_adjoint():
    code, out, _ = run("aft", "f_C2_to_C3")
    assert code == 0
    assert "right adjoint = {0: 0, 1: 0, 2: 1}" in out
    code, out, _ = run("--format", "json", "aft", "f_C2_to_C3")
    doc = json.loads(out)
    assert doc["schema"] == "fincat.report/1" and doc["status"] == "pass"
    assert doc["values"][0]["value"] == {"0": "0", "1": "0", "2": "1"}


def test_aft_refutes_non_join_map():
    code, out, _ = run("aft", "squash_middle")
    assert code == 0 and "refutation" in out


def test_hom_set():
    code, out, _ = run("hom", "Two", "0", "1")
    assert code == 0 and "hom(0, 1) = [u]" in out


def test_failed_check_exits_one():
    # probes of size at most 1 cannot see that two points fail to be dense
    code, out, _ = run("--probe-size", "1", "suite", "skew-coherence", "TwoPoints")
    assert code == 1
    assert "FAIL lambda invertible iff J dense" in out


def test_input_errors_exit_two(tmp_path):
    code, _, err = run("validate", "Nope")
    assert code == 2 and "Nope" in err
    assert run("no-such-command")[0] == 2
    assert run("--probe-size", "-1", "validate", "One")[0] == 2
    assert run("-f", str(tmp_path / "missing.fc"), "validate", "One")[0] == 2
    bad = tmp_path / "bad.fc"
    bad.write_text("category Bad { object x; arrow f: x -> y; }\n")
    code, _, err = run("-f", str(bad), "validate", "Bad")
    assert code == 2 and "bad.fc:1:40" in err


def test_fmt_check(tmp_path):
    ugly = tmp_path / "ugly.fc"
    ugly.write_text("category One {object x;}\n")
    assert run("fmt", "--check", str(ugly))[0] == 1
    code, canon, _ = run("fmt", str(ugly))
    assert code == 0
    ugly.write_text(canon)
    assert run("fmt", "--check", str(ugly))[0] == 0
    for path in sorted(CORPUS.glob("*.fc")):
        # comments are dropped, so format once and check the result is stable
        out = tmp_path / path.name
        out.write_text(run("fmt", str(path))[1])
        assert run("fmt", "--check", str(out))[0] == 0, path.name


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_report_matches_golden(fmt):
    path = CORPUS / "lattices.fc"
    code, out, _ = run("--format", fmt, "-f", str(path), "report")
    assert code == 0
    assert out == (CORPUS / "golden" / f"lattices.{'txt' if fmt == 'text' else 'json'}").read_text()


def test_output_is_deterministic():
    first = run("--format", "json", "suite", "isbell", "Two")
    assert first[0] == 0
    assert run("--format", "json", "suite", "isbell", "Two") == first


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fincat", "validate", "Two"], capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout
