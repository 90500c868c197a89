import json
import subprocess
import sys

import pytest

from diagcut.cli import BAD_INPUT, NOT_FOUND, OK, build_parser, main, make_config
from diagcut.cutting import dumps, lemma_twotriangles
from diagcut.homogeneous import loads_records

SIX = ["--d", "21", "--mults", "7x6,6x4,1"]


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


class TestDim:
    def test_example_system(self, capsys):
        rc, out, _ = run(capsys, "dim", *SIX)
        assert rc == OK
        assert "dim:       -1" in out and "CertifiedNonSpecial" in out
        assert "seed:      0" in out

    def test_line_of_three(self, capsys):
        rc, out, _ = run(capsys, "dim", "--diagram", "3^0", "--mults", "1", "--format", "json")
        obj = json.loads(out)
        assert rc == OK and obj["value"] == 1 and obj["seed"] == 0

    def test_two_points_on_lines(self, capsys):
        rc, out, _ = run(capsys, "dim", "--d", "1", "--mults", "1,1", "--format", "json")
        assert json.loads(out)["value"] == 0

    def test_exact_path(self, capsys):
        rc, out, _ = run(capsys, "dim", "--d", "4", "--mults", "2x5", "--exact", "--format", "json")
        obj = json.loads(out)
        assert obj["value"] == obj["exact"] == 0

    def test_parse_error_position(self, capsys):
        rc, _, err = run(capsys, "dim", "--diagram", "3^0,x", "--mults", "1")
        assert rc == BAD_INPUT
        assert "position 4" in err

    def test_bad_prime(self, capsys):
        rc, _, err = run(capsys, "dim", "--d", "2", "--mults", "1", "--field-prime", "1000")
        assert rc == BAD_INPUT and "prime" in err


class TestProveVerify:
    def test_example_round_trip(self, capsys, tmp_path):
        cert_file = tmp_path / "six.json"
        # the default "auto" family spends its first minutes on the axis cuts alone
        rc, _, _ = run(capsys, "prove", *SIX, "--cut-family", "extended", "--out", str(cert_file))
        assert rc == OK
        rc, out, _ = run(capsys, "verify", str(cert_file))
        assert rc == OK and out.startswith("VERIFIED")

    def test_special_system_not_found(self, capsys):
        rc, out, err = run(capsys, "prove", "--d", "2", "--mults", "2x2")
        assert rc == NOT_FOUND and out == "" and "no certificate" in err

    def test_depth_zero_single_leaf(self, capsys):
        rc, out, _ = run(capsys, "prove", "--d", "3", "--mults", "2x3,1", "--depth", "0")
        root = json.loads(out)["root"]
        assert rc == OK and root["kind"] == "rank"

    def test_tampered_certificate(self, capsys, tmp_path):
        obj = json.loads(dumps(lemma_twotriangles(3)))
        obj["root"]["system"]["diagram"] = "[(0,0),(0,1),(0,2),(0,3),(0,4),(0,5),(1,0),(1,1),(1,2),(1,3),(1,4),(2,2),(2,3),(3,3),(4,0)]"
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(obj))
        rc, out, _ = run(capsys, "verify", str(path), "--format", "json")
        report = json.loads(out)
        assert rc == NOT_FOUND
        assert report["verified"] is False
        assert report["failure_path"] == ["root"] and report["failure_reason"] == "VdimMismatch"

    def test_corrupted_file(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"version": 1, "root": {"kind": ')
        rc, _, err = run(capsys, "verify", str(path))
        assert rc == BAD_INPUT and "error" in err

    def test_missing_file(self, capsys, tmp_path):
        rc, _, _ = run(capsys, "verify", str(tmp_path / "nope.json"))
        assert rc == BAD_INPUT

    def test_prove_is_deterministic(self, capsys):
        first = run(capsys, "prove", "--d", "6", "--mults", "2x7")
        second = run(capsys, "prove", "--d", "6", "--mults", "2x7")
        assert first == second and first[0] == OK


class TestHH:
    def test_small_campaign(self, capsys, tmp_path):
        log = tmp_path / "hh.jsonl"
        rc, out, _ = run(capsys, "hh", "--m-max", "2", "--d-max", "10", "--out", str(log))
        records = loads_records(log.read_text())
        assert rc == OK
        assert "special systems: L_2(2^x2), L_4(2^x5)" in out
        counted = sum(
            int(row.split()[2]) + int(row.split()[3])
            for row in out.splitlines()[1:]
            if row.split()[0].isdigit()
        )
        assert counted == len(records)

    def test_simple_points(self, capsys):
        rc, out, _ = run(capsys, "hh", "--m-max", "1", "--d-max", "8")
        assert rc == OK and "special systems: none" in out

    def test_json_lines(self, capsys):
        rc, out, _ = run(capsys, "hh", "--m-max", "1", "--d-max", "3", "--format", "json", "--seed", "4")
        assert all(rec.seed == 4 for rec in loads_records(out))

    def test_over_desk_limit(self, capsys):
        rc, _, _ = run(capsys, "hh", "--m-max", "6", "--d-max", "3")
        assert rc == BAD_INPUT


class TestRender:
    def test_diagram(self, capsys):
        rc, out, _ = run(capsys, "render", "--diagram", "2^3,1^0")
        assert rc == OK and out.splitlines()[0] == "  4 # ."

    def test_certificate_svg(self, capsys, tmp_path):
        path = tmp_path / "tt.json"
        path.write_text(dumps(lemma_twotriangles(3)))
        rc, out, _ = run(capsys, "render", "--certificate", str(path), "--svg")
        assert rc == OK and out.startswith("<svg") and out.count("<line") == 3


class TestConfig:
    def test_env_then_flags(self):
        args = build_parser().parse_args(["dim", "--d", "2", "--mults", "1", "--trials", "5"])
        config = make_config(args, {"DIAGCUT_SEED": "9", "DIAGCUT_TRIALS": "2"})
        assert (config.seed, config.trials) == (9, 5)

    def test_env_reaches_output(self, capsys, monkeypatch):
        monkeypatch.setenv("DIAGCUT_SEED", "12")
        rc, out, _ = run(capsys, "dim", "--d", "3", "--mults", "2,2", "--format", "json")
        assert json.loads(out)["seed"] == 12


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "diagcut.cli", "dim", "--d", "1", "--mults", "1,1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and "dim:       0" in proc.stdout


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["dim", "--mults", "1"])
    assert info.value.code == 2
