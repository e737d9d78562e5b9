import json
import subprocess
import sys

import pytest

from twistlie import cli
from twistlie.homlie import to_json
from twistlie.covers import CoverSpec


def run_json(*argv):
    code, text = cli.run(list(argv))
    return code, json.loads(text)


def test_gen_report_shape():
    code, rep = run_json("gen", "kummer-witt", "--n", "3", "--r", "1")
    assert code == 0 and rep["passed"]
    assert rep["schema"] == cli.SCHEMA_VERSION and rep["tool"]["name"] == "twistlie"
    assert "timing" not in rep
    assert rep["verdicts"] == {"axioms": True}


def test_gen_reports_published_discrepancy():
    code, rep = run_json("gen", "kummer-witt", "--n", "4", "--r", "1")
    assert code == 0
    assert any("<e2,e3>" in note for note in rep["notes"])


def test_check_round_trip(tmp_path):
    L = CoverSpec("artin-schreier", 3).build()
    path = tmp_path / "as3.json"
    path.write_text(json.dumps(to_json(L)))
    code, rep = run_json("check", str(path))
    assert code == 0 and rep["verdicts"]["jacobi"]


def test_check_failure_exit_one_with_witness(tmp_path):
    good = to_json(CoverSpec("kummer-witt", 3, 1).build())
    bad = json.loads(json.dumps(good))
    # scale one bracket so the twisted Jacobi sum no longer vanishes
    entry = bad["brackets"][0]
    entry["coeffs"] = [f"2*({c})" for c in entry["coeffs"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, rep = run_json("check", str(path))
    assert code == 1 and not rep["passed"]
    assert rep["witnesses"]


def test_check_malformed_input_exit_two(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    code, text = cli.run(["check", str(path)])
    assert code == 2 and text.startswith("error:")
    assert cli.run(["check", str(tmp_path / "missing.json")])[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "nonsense"],
        ["gen", "kummer-witt", "--n", "3", "--r", "5"],
        ["gen", "artin-schreier", "--p", "4"],
        ["gen", "kummer-witt", "--n", "3", "--p", "5"],
        ["zeta", "--q", "8"],
        ["gen", "kummer-witt", "--n", "3", "--budget", "{oops"],
    ],
)
def test_usage_errors(argv):
    assert cli.run(argv)[0] == 2


def test_config_file_unknown_field(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 3, "colour": "blue"}))
    assert cli.run(["gen", "kummer-witt", "--config", str(cfg)])[0] == 2
    cfg.write_text(json.dumps({"n": 3, "r": 2}))
    code, rep = run_json("gen", "kummer-witt", "--config", str(cfg))
    assert code == 0 and rep["command"]["r"] == 2


def test_output_written_atomically(tmp_path):
    out = tmp_path / "r.json"
    out.write_text("old")
    code, text = cli.run(["gen", "jackson", "--n", "3", "--output", str(out)])
    assert code == 0 and text == ""
    assert json.loads(out.read_text())["passed"]
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]


def test_deterministic_output():
    a = cli.run(["env", "confluence", "--n", "3", "--degree", "4", "--seed", "1"])
    b = cli.run(["env", "confluence", "--n", "3", "--degree", "4", "--seed", "1"])
    assert a == b and a[0] == 0


def test_timing_only_on_request():
    _, rep = run_json("gen", "jackson", "--n", "3", "--timing")
    assert rep["timing"]["seconds"] >= 0


def test_latex_and_text_formats():
    code, tex = cli.run(["gen", "kummer-witt", "--n", "3", "--format", "latex"])
    assert code == 0 and tex.startswith("\\begin{align*}")
    assert cli.run(["env", "relations", "--n", "3", "--format", "latex"])[0] == 2
    code, text = cli.run(["gen", "kummer-witt", "--n", "3", "--format", "text"])
    assert code == 0 and "axioms" in text


def test_analyze_commands():
    _, rep = run_json("analyze", "solvability", "--n", "4", "--r", "2")
    assert rep["result"]["derived_dimensions"] == [4, 2, 0]
    code, rep = run_json("analyze", "zero-pairs", "--n", "4", "--r", "2")
    assert code == 0


def test_env_commands():
    code, rep = run_json("env", "downup", "--n", "3")
    assert code == 0 and rep["passed"]
    code, rep = run_json("env", "confluence", "--family", "kummer-witt", "--n", "4", "--degree", "3")
    assert code == 1 and not rep["passed"]
    code, rep = run_json("env", "nf", "--n", "3", "--expr", "eps2*eps1")
    assert code == 0 and "eps1*eps2" in rep["result"]["normal_form"]


def test_zeta_command():
    code, rep = run_json("zeta", "--q", "7", "--n", "3", "--b", "1", "--terms", "1", "--budget", '{"matrix_field": 7}')
    assert code == 0
    assert rep["result"]["zetaAzu"][0] == "1"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "twistlie", "gen", "jackson", "--n", "3"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["passed"]
