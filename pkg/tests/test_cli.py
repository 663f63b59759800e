import json
import subprocess
import sys

import pytest

from fracorbit.cli import run

CANTOR = '{"r": "1/3", "branches": [[1, "0", "1/2"], [1, "2/3", "1/2"]]}'


def ok(argv):
    code, out, err = run(argv)
    assert code == 0, err
    return out


def test_thresholds_bare_and_json():
    assert ok(["thresholds", "--alpha", "x^2-x-1"]).strip() == "1/3"
    assert ok(["thresholds", "--alpha", "3/2"]).strip() == "1/5"
    rec = json.loads(ok(["thresholds", "--alpha", "x^2-x-1", "--eta", "1/2", "--format", "json"]))
    assert rec["delta"] == "1/6"


def test_classify_with_poly_alias():
    rec = json.loads(ok(["classify", "--poly", "[-3,-1,1]"]))
    assert rec["classification"] == "HasOutsideConjugate"
    assert rec["L"] == 5 and rec["L_tilde"] == 3
    csv = ok(["--format", "csv", "classify", "--poly", "x^2-x-1"])
    assert csv.splitlines()[0].startswith("degree,")


def test_orbit_csv_rows():
    out = ok(["orbit", "--alpha", "3/2", "--xi", "1", "--N", "4"])
    lines = out.splitlines()
    assert len(lines) == 5
    assert lines[1].split(",")[:2] == ["1", "1"]


def test_count_has_no_uncertain_points():
    rec = json.loads(ok(["count", "--alpha", "2", "--xi", "lacunary:2^k", "--delta", "1/3",
                         "--N-list", "1024,32768,1048576"]))
    rows = rec["reports"]
    assert [r["count_ge"] for r in rows] == [10, 15, 20]
    assert all(r["uncertain"] == 0 for r in rows)
    assert abs(rec["log_fit"]["c"] - 1 / 0.6931471805599453) < 1e-12


def test_runs_and_verify():
    rec = json.loads(ok(["runs", "--alpha", "x^2-x-3", "--xi", "1/3", "--delta", "1/5", "--N", "200"]))
    assert sum(k for _, k in rec["runs"]) + rec["count_ge"] == 200
    rec = json.loads(ok(["verify", "--alpha", "x^2-x-3", "--xi", "1/3", "--delta", "1/5", "--N", "200"]))
    assert rec["violations"] == []


def test_fourier_and_lyons():
    rec = json.loads(ok(["fourier", "--ifs", CANTOR, "--u", "0,3,9", "--format", "json"]))
    assert rec[0]["re_lo"] == rec[0]["re_hi"] == 1.0
    assert rec[1]["abs_lo"] <= rec[2]["abs_hi"] and rec[2]["abs_lo"] <= rec[1]["abs_hi"]
    rec = json.loads(ok(["lyons", "--ifs", CANTOR, "--M", "50,100"]))
    assert len(rec["partial_sums"]) == 2


@pytest.mark.parametrize("argv,code,name", [
    (["classify", "--alpha", "x^2-1"], 2, "NotIrreducible"),
    (["thresholds", "--alpha", "x^2-x-1", "--eta", "1"], 2, "EtaTooLarge"),
    (["fourier", "--ifs", '{"r": "1/2", "branches": [[2,"0","1/2"],[2,"1","1/2"]]}', "--u", "1"], 2, "GcdNotOne"),
    (["fourier", "--ifs", "@/nonexistent.json", "--u", "1"], 2, "ValidationError"),
    (["count", "--alpha", "x^2-x-1", "--xi", "1", "--delta", "1/2"], 2, "ValidationError"),
])
def test_error_exit_codes(argv, code, name):
    got, out, err = run(argv)
    assert got == code and out == ""
    assert json.loads(err)["error"] == name


def test_manifest_replay_is_byte_identical(tmp_path):
    man = tmp_path / "m.json"
    first = tmp_path / "a.csv"
    ok(["orbit", "--alpha", "x^2-x-1", "--xi", "const:pi", "--N", "50",
        "--manifest", str(man), "--output", str(first)])
    rec = json.loads(man.read_text())
    assert "--output" not in rec["argv"]
    code, out, _ = run(["replay", str(man)])
    assert code == 0 and json.loads(out)["match"]
    second = tmp_path / "b.csv"
    ok(rec["argv"] + ["--output", str(second)])
    assert first.read_bytes() == second.read_bytes()
    rec["output_sha256"] = "0" * 64
    man.write_text(json.dumps(rec))
    code, _, err = run(["replay", str(man)])
    assert code == 1 and json.loads(err)["error"] == "ReplayMismatch"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "fracorbit", "thresholds", "--alpha", "x^2-x-1"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "1/3"
