import json
import subprocess
import sys

from nodalmirror.cli import EXIT_CUTOFF, EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main, parse_config


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_verify_flags():
    cfg = parse_config(["verify", "--scenario", "closed", "--genus", "2", "--max-weight", "8"])
    assert (cfg.command, cfg.genus, cfg.max_weight, cfg.scenario) == ("verify", 2, 8, "closed")


def test_parse_cech_flags():
    cfg = parse_config(["cech", "--builder", "nodal:g=3,l=1", "--sheaf", "Tbal", "--truncation", "10"])
    assert (cfg.command, cfg.builder, cfg.sheaf, cfg.truncation) == ("cech", "nodal:g=3,l=1", "Tbal", 10)


def test_punctures_imply_scenario():
    assert parse_config(["limit", "--genus", "2", "-k", "2"]).scenario == "punctured"


def test_missing_genus_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify", "--scenario", "closed")
    assert code == EXIT_USAGE and "genus" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "verify", "--genus", "2", "--bogus")
    assert code == EXIT_USAGE


def test_config_file_and_override(tmp_path, capsys):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "cech", "builder": "closed:g=2", "sheaf": "L:1",
                                "truncation": 6, "format": "json"}))
    cfg = parse_config(["cech", "--config", str(path), "--sheaf", "Tbal"])
    assert cfg.sheaf == "Tbal" and cfg.truncation == 6
    code, out, _ = run_cli(capsys, "cech", "--config", str(path))
    assert code == EXIT_PASS
    assert json.loads(out)["checks"][0]["dims_b"] == [1, 1]


def test_malformed_config_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "genus": 2,\n  "scenario": closed\n}\n')
    code, _, err = run_cli(capsys, "verify", "--config", str(path))
    assert code == EXIT_USAGE and f"{path}:3:" in err


def test_unknown_config_field_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "genus": 2,\n  "colour": "red"\n}\n')
    code, _, err = run_cli(capsys, "verify", "--config", str(path))
    assert code == EXIT_USAGE and f"{path}:3" in err and "colour" in err


def test_verify_closed_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--scenario", "closed", "--genus", "2", "--legs", "even")
    assert code == EXIT_PASS
    rep = json.loads(out)
    assert rep["verdict"] == "pass"
    assert rep["provenance"]["b_generators"]["Y"] == "D1a: (x+1)^-1 - (x+1)^-2"


def test_verify_punctured_odd_fails(capsys):
    code, out, _ = run_cli(capsys, "verify", "--genus", "2", "-k", "1", "--legs", "odd")
    assert code == EXIT_FAIL
    assert json.loads(out)["verdict"] == "fail"


def test_hf_table(capsys):
    code, out, _ = run_cli(capsys, "hf", "--genus", "2", "--degree", "3", "--table")
    assert code == EXIT_PASS
    rep = json.loads(out)
    assert rep["checks"][0]["dims_a"] == [2, 1, 2, 3]
    assert "f^1 * f^1 = f^2 + 2*e_1^2" in rep["provenance"]["products"]


def test_limit_without_slack_hits_cutoff(capsys):
    code, _, err = run_cli(capsys, "limit", "--scenario", "punctured", "--genus", "2", "-k", "1", "--slack", "0")
    assert code == EXIT_CUTOFF and "cutoff" in err


def test_truncation_below_weight_is_cutoff(capsys):
    code, _, err = run_cli(capsys, "verify", "--genus", "2", "--legs", "even", "--truncation", "4",
                           "--stability-truncation", "5")
    assert code == EXIT_CUTOFF and "truncation" in err


def test_bad_builder_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "cech", "--builder", "nodal:g=2,l=5")
    assert code == EXIT_USAGE and "l <=" in err


def test_text_format_and_output_file(tmp_path, capsys):
    dest = tmp_path / "r.txt"
    code, out, _ = run_cli(capsys, "verify", "--bmodel", "--builder", "nodal:g=2,l=1", "--format", "text",
                           "--output", str(dest))
    assert code == EXIT_PASS and out == ""
    assert dest.read_text().startswith("B-side cohomology of nodal:g=2,l=1: PASS")


def test_json_output_is_byte_identical(capsys):
    runs = [run_cli(capsys, "homog", "--genus", "2", "--legs", "even", "--max-weight", "4")[1] for _ in range(2)]
    assert runs[0] == runs[1]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "nodalmirror.cli", "cech", "--builder", "closed:g=2",
                          "--format", "text"], capture_output=True, text=True)
    assert res.returncode == 0 and "PASS" in res.stdout
