import json
import re
import subprocess
import sys

import pytest

from preab import audit
from preab.cli import run

from conftest import FIXTURES, ROOT


def invoke(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def test_snake_fixture(capsys):
    code, out = invoke(capsys, "snake", FIXTURES / "snake_sign.pad", "--json")
    assert code == 0
    report = json.loads(out)
    sign = next(c for c in report["checks"] if c["name"] == "sign_check")
    assert sign["pass"]
    assert sign["details"]["delta_i"] == [["1"]] and sign["details"]["delta_ii"] == [["-1"]]
    assert report["failures"] == [] and report["version"] == 1


def test_report_schema(capsys):
    _, out = invoke(capsys, "check", FIXTURES / "two_square.pad", "--json")
    report = json.loads(out)
    assert set(report) == {"version", "command", "seed", "trials", "checks", "failures"}
    for c in report["checks"]:
        assert set(c) == {"name", "pass", "details"}


def test_missing_file(capsys):
    code, _ = invoke(capsys, "check", "missing.pad")
    assert code == 2


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.pad"
    bad.write_text("object A dim\n")
    code, out = invoke(capsys, "check", bad, "--json")
    assert code == 2
    f = json.loads(out)["failures"][0]
    assert f["kind"] == "ParseError" and f["details"]["line"] == 1


def test_elab_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.pad"
    bad.write_text("object A dim 1 sub [1]\nobject B dim 1\nmorphism f : A -> B matrix [1]\n")
    code, out = invoke(capsys, "check", bad, "--json")
    assert code == 2
    assert json.loads(out)["failures"][0]["details"]["validation"] == "SubspaceViolation"


@pytest.mark.parametrize(
    "argv",
    [
        ["fuzz", "--mode", "snake", "--trials", "0"],
        ["fuzz", "--mode", "snake", "--max-dim", "13"],
        ["fuzz", "--mode", "snake", "--max-dim", "0"],
        ["fuzz", "--mode", "homology"],
        ["fuzz"],
        [],
        ["check"],
        ["probe", "--trials", "x"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == 3


def test_forced_pipelines(capsys):
    assert invoke(capsys, "two-square", FIXTURES / "two_square.pad")[0] == 0
    assert invoke(capsys, "snake", FIXTURES / "two_square.pad")[0] == 0
    assert invoke(capsys, "two-square", FIXTURES / "snake_sign.pad")[0] == 0
    assert invoke(capsys, "snake", FIXTURES / "nonstrict.pad")[0] == 2


def test_decomp_fixture(capsys):
    code, out = invoke(capsys, "check", FIXTURES / "nonstrict.pad", "--json")
    assert code == 0
    dec = next(c for c in json.loads(out)["checks"] if c["name"] == "decomposition")
    assert dec["details"]["strict"] is False


def test_fuzz_snake_acceptance_run(capsys):
    code, out = invoke(capsys, "fuzz", "--mode", "snake", "--trials", 500, "--seed", 7, "--max-dim", 5, "--json")
    assert code == 0
    assert json.loads(out)["failures"] == []


@pytest.mark.parametrize("mode", audit.MODES)
def test_fuzz_modes(mode, capsys):
    code, out = invoke(capsys, "fuzz", "--mode", mode, "--trials", 15, "--seed", 1, "--json")
    assert code == 0
    assert all(c["pass"] for c in json.loads(out)["checks"])


def test_probe_command(capsys):
    assert invoke(capsys, "probe", "--trials", 5)[0] == 0


def test_out_file_matches_stdout(tmp_path, capsys):
    dest = tmp_path / "r.json"
    _, out = invoke(capsys, "fuzz", "--mode", "decomp", "--trials", 10, "--json", "--out", dest)
    assert dest.read_text() == out


def test_deterministic_bytes():
    cmd = [sys.executable, "-m", "preab", "snake", str(FIXTURES / "snake_sign.pad"), "--json", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, cwd=ROOT)
    b = subprocess.run(cmd, capture_output=True, cwd=ROOT)
    assert a.returncode == 0 and a.stdout == b.stdout


def test_fuzz_deterministic(capsys):
    argv = ["fuzz", "--mode", "twosquare", "--trials", 8, "--seed", 42, "--json"]
    assert invoke(capsys, *argv)[1] == invoke(capsys, *argv)[1]


def test_findings_replay(tmp_path, capsys, monkeypatch):
    real = audit.audit_decomp

    def broken(f, cat=audit.VECTPAIR):
        # plant a defect that fires on two-dimensional sources
        out = real(f, cat)
        if f.src.dim == 2:
            out[0]["pass"] = False
        return out

    monkeypatch.setattr(audit, "audit_decomp", broken)
    dest = tmp_path / "report.json"
    code, out = invoke(capsys, "fuzz", "--mode", "decomp", "--trials", 30, "--seed", 5, "--json", "--out", dest)
    assert code == 1
    failures = json.loads(out)["failures"]
    pads = sorted(tmp_path.glob("report.decomp.*.pad"))
    assert failures and len(pads) == len(failures)
    for pad, failure in zip(pads, failures):
        assert pad.read_text() == failure["dsl_text"]
        seed = re.search(r"--seed (\d+)", pad.read_text()).group(1)
        code, replay = invoke(capsys, "check", pad, "--seed", seed, "--json")
        assert code == 1
        names = json.loads(replay)["failures"][0]["details"]["failed_checks"]
        assert names == failure["details"]["failed_checks"]


def test_audit_exception_is_a_failure(tmp_path, capsys, monkeypatch):
    from preab.errors import MediationFailed

    def boom(inp, seed=0, cat=None):
        raise MediationFailed("planted")

    monkeypatch.setattr(audit, "audit_two_square", boom)
    code, out = invoke(capsys, "check", FIXTURES / "two_square.pad", "--json")
    assert code == 1
    assert json.loads(out)["failures"][0]["kind"] == "MediationFailed"
