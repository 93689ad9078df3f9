"""Command line behaviour: subcommands, system files, exit codes."""

import json

import pytest

from cantorenv.cli import load_system, main
from cantorenv.errors import ParseError

ODOMETER_DEF = {"name": "odo", "generator": {"kind": "odometer"}}
FLIP_DEF = {
    "name": "flip",
    "generator": {"kind": "rules", "rules": [["0", "1"]], "exhausts": "clopen"},
}
OPEN_DEF = {
    "name": "open-flip",
    "generator": {"kind": "rules", "rules": [["0", "1"], ["10", "01"]],
                  "exhausts": "open"},
}


@pytest.fixture
def sysfile(tmp_path):
    def write(obj, name="system.json"):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    try:
        return code, json.loads(out)
    except json.JSONDecodeError:
        return code, out


class TestLoadSystem:
    def test_reads_clopen_rules(self, sysfile):
        sd = load_system(sysfile(FLIP_DEF))
        assert sd.name == "flip" and not sd.is_generated

    def test_reads_open_rules_and_odometer(self, sysfile):
        assert load_system(sysfile(OPEN_DEF)).is_generated
        assert load_system(sysfile(ODOMETER_DEF)).is_generated

    def test_missing_file(self):
        with pytest.raises(ParseError):
            load_system("/no/such/file.json")

    def test_rejects_unknown_top_key(self, sysfile):
        with pytest.raises(ParseError):
            load_system(sysfile({**FLIP_DEF, "comment": "hi"}))

    def test_rejects_bad_exhausts(self, sysfile):
        bad = {"name": "x", "generator": {"kind": "rules",
                                          "rules": [["0", "1"]],
                                          "exhausts": "sometimes"}}
        with pytest.raises(ParseError):
            load_system(sysfile(bad))

    def test_rejects_exhaustion_for_clopen(self, sysfile):
        with pytest.raises(ParseError):
            load_system(sysfile({**FLIP_DEF, "exhaustion": [1, 2]}))

    def test_rejects_decreasing_exhaustion(self, sysfile):
        with pytest.raises(ParseError):
            load_system(sysfile({**OPEN_DEF, "exhaustion": [2, 1]}))

    def test_accepts_exhaustion_for_open(self, sysfile):
        sd = load_system(sysfile({**OPEN_DEF, "exhaustion": [1, 2]}))
        assert sd.counts == (1, 2)

    def test_rejects_unknown_default_key(self, sysfile):
        with pytest.raises(ParseError):
            load_system(sysfile({**FLIP_DEF, "defaults": {"volume": 11}}))

    def test_rejects_bad_rules_shape(self, sysfile):
        bad = {"name": "x", "generator": {"kind": "rules", "rules": [["0"]],
                                          "exhausts": "clopen"}}
        with pytest.raises(ParseError):
            load_system(sysfile(bad))


class TestCommands:
    def test_validate(self, sysfile, capsys):
        code, out = run(capsys, "validate", sysfile(FLIP_DEF))
        assert code == 0 and out["ok"] is True

    def test_validate_flags_overlap(self, sysfile, capsys):
        bad = {"name": "x", "generator": {"kind": "rules",
                                          "rules": [["0", "1"], ["01", "00"]],
                                          "exhausts": "clopen"}}
        code, out = run(capsys, "validate", sysfile(bad))
        assert code == 2 and out["ok"] is False

    def test_axioms(self, sysfile, capsys):
        code, out = run(capsys, "axioms", sysfile(ODOMETER_DEF),
                        "--bound", "3", "--level", "1")
        assert code == 0 and out["ok"] is True

    def test_hausdorff_clopen(self, sysfile, capsys):
        code, out = run(capsys, "hausdorff", sysfile(FLIP_DEF))
        assert code == 0 and out["verdict"] == "clopen"
        assert out["domains"]["1"] == "{1}"

    def test_hausdorff_witness(self, sysfile, capsys):
        code, out = run(capsys, "hausdorff", sysfile(ODOMETER_DEF))
        assert code == 0
        assert out["verdict"] == "non-clopen-witness"
        assert out["pair"]["first"] == {"index": 1, "point": "(1)"}

    def test_related(self, sysfile, capsys):
        code, out = run(capsys, "related", sysfile(ODOMETER_DEF),
                        "--p", "1:(0)", "--q", "0:1(0)", "--level", "0")
        assert code == 0 and out["related"] is True
        code, out = run(capsys, "related", sysfile(ODOMETER_DEF),
                        "--p", "0:(0)", "--q", "1:(0)", "--level", "0")
        assert code == 0 and out["related"] is False

    def test_related_needs_level(self, sysfile, capsys):
        code, out = run(capsys, "related", sysfile(ODOMETER_DEF),
                        "--p", "1:(0)", "--q", "0:1(0)")
        assert code == 1 and "error" in out

    def test_level_default_from_system_file(self, sysfile, capsys):
        withdef = {**ODOMETER_DEF, "defaults": {"level": 1}}
        code, out = run(capsys, "related", sysfile(withdef),
                        "--p", "1:(0)", "--q", "0:1(0)")
        assert code == 0 and out["related"] is True

    def test_etale(self, sysfile, capsys):
        code, out = run(capsys, "etale", sysfile(FLIP_DEF),
                        "--t", "1", "--s", "0", "--base", "{0}")
        assert code == 0 and out["image"] == "{1}"

    def test_etale_bad_base(self, sysfile, capsys):
        code, out = run(capsys, "etale", sysfile(FLIP_DEF),
                        "--t", "1", "--s", "0", "--base", "{1}")
        assert code == 1 and "error" in out

    def test_quotient(self, sysfile, capsys):
        code, out = run(capsys, "quotient", sysfile(FLIP_DEF),
                        "--bound", "1", "--depth", "1")
        assert code == 0 and out["count"] == 4

    def test_filtrate_witness(self, sysfile, capsys):
        code, out = run(capsys, "filtrate", sysfile(ODOMETER_DEF),
                        "--p", "2:(0)", "--q", "0:01(0)")
        assert code == 0 and out["witness_level"] == 1

    def test_filtrate_rejects_half_a_pair(self, sysfile, capsys):
        code, out = run(capsys, "filtrate", sysfile(ODOMETER_DEF),
                        "--p", "2:(0)")
        assert code == 1

    def test_filtrate_cap(self, sysfile, capsys):
        code, out = run(capsys, "filtrate", sysfile(ODOMETER_DEF),
                        "--p", "1:1110(0)", "--q", "0:0001(0)", "--cap", "2")
        assert code == 3 and "error" in out

    def test_filtrate_stage_relation(self, sysfile, capsys):
        code, out = run(capsys, "filtrate", sysfile(ODOMETER_DEF),
                        "--level", "1", "--bound", "2", "--depth", "2")
        assert code == 0 and len(out["classes"]) == 8

    def test_bratteli_json(self, sysfile, capsys):
        code, out = run(capsys, "bratteli", sysfile(ODOMETER_DEF),
                        "--levels", "3", "--out", "json")
        assert code == 0
        assert len(out["levels"]) == 3

    def test_bratteli_dot(self, sysfile, capsys):
        code, out = run(capsys, "bratteli", sysfile(ODOMETER_DEF),
                        "--levels", "2", "--out", "dot")
        assert code == 0 and out.startswith("digraph")

    def test_verify_psi(self, sysfile, capsys):
        code, out = run(capsys, "verify-psi", sysfile(FLIP_DEF),
                        "--trials", "20", "--seed", "1")
        assert code == 0
        assert out["equivariance"]["epsilon"] == -1

    def test_verify_psi_generated_needs_level(self, sysfile, capsys):
        code, out = run(capsys, "verify-psi", sysfile(ODOMETER_DEF),
                        "--trials", "5")
        assert code == 1

    def test_verify_psi_at_level(self, sysfile, capsys):
        code, out = run(capsys, "verify-psi", sysfile(ODOMETER_DEF),
                        "--trials", "10", "--seed", "2", "--level", "1")
        assert code == 0 and out["ok"] is True


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_help_is_success(self, capsys):
        assert main(["--help"]) == 0

    def test_missing_file_is_usage(self, capsys):
        assert main(["validate", "/no/such.json"]) == 1

    def test_unreadable_json(self, tmp_path, capsys):
        p = tmp_path / "x.json"
        p.write_text("{oops")
        code, out = run(capsys, "validate", str(p))
        assert code == 1 and "line" in out["error"]
