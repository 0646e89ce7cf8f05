import json
import pathlib
import subprocess
import sys

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "vcspkit.cli", *args],
        capture_output=True,
        text=True,
        input=stdin,
    )
    return proc


def test_stdout_is_json_and_exit_zero_on_check():
    proc = run_cli("check", str(FIXTURES / "pair-grid.json"), "--property", "laminar")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["holds"] is True


def test_check_crossfree_and_jwp_routes():
    proc = run_cli("check", str(FIXTURES / "maxsat-overlap.json"), "--property", "crossfree")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["holds"] is False
    assert "witness" in doc

    gen = run_cli("gen", "profile", "--scheme", "order", "--types", "<,=",
                  "--n", "4", "--d", "2", "--seed", "3")
    assert gen.returncode == 0
    jwp = run_cli("check", "-", "--property", "jwp", stdin=gen.stdout)
    assert jwp.returncode == 0
    assert json.loads(jwp.stdout)["holds"] is True


def test_solve_reports_solver_id(tmp_path):
    gen = run_cli("gen", "profile", "--scheme", "maxm", "--types", ">M,M",
                  "--n", "5", "--d", "2", "--seed", "4",
                  "-o", str(tmp_path / "wm.json"))
    assert gen.returncode == 0
    proc = run_cli("solve", str(tmp_path / "wm.json"))
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["solver"] == "weighted-matching"


def test_classify_empty_profile_on_two_variables():
    gen = run_cli("gen", "profile", "--scheme", "order", "--types", "=",
                  "--n", "2", "--d", "2", "--seed", "1")
    proc = run_cli("classify", "-", "--scheme", "order", stdin=gen.stdout)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["observed"] == []


def test_rename_fixture_routes():
    ok = run_cli("rename", str(FIXTURES / "maxsat-overlap.json"))
    assert ok.returncode == 0
    doc = json.loads(ok.stdout)
    assert doc["renamable"] is True
    assert doc["renaming"] == [False, True, False, False]
    assert doc["result"]["cost"] == "0"

    no = run_cli("rename", str(FIXTURES / "sat-fan.json"))
    assert no.returncode == 0
    assert json.loads(no.stdout) == {"renamable": False}


def test_solve_cfc_writes_dot_files(tmp_path):
    forest = tmp_path / "forest.dot"
    network = tmp_path / "net.dot"
    proc = run_cli(
        "solve-cfc", str(FIXTURES / "pair-grid.json"),
        "--dot-forest", str(forest), "--dot-network", str(network),
    )
    assert proc.returncode == 0
    assert forest.read_text().startswith("digraph")
    assert network.read_text().startswith("digraph")


def test_usage_error_exits_two():
    proc = run_cli("frobnicate")
    assert proc.returncode == 2


def test_classify_range_violation_exits_four():
    gen = run_cli("gen", "profile", "--scheme", "csp", "--types", ">,0,inf",
                  "--n", "3", "--d", "2", "--seed", "5")
    proc = run_cli("classify", "-", "--scheme", "maxcsp", stdin=gen.stdout)
    assert proc.returncode == 4
    assert json.loads(proc.stdout)["error"]["kind"] == "class"


def test_solve_no_validate_flag():
    gen = run_cli("gen", "profile", "--scheme", "maxcsp", "--types", ">,0",
                  "--n", "5", "--d", "2", "--seed", "6")
    strict = run_cli("solve", "-", stdin=gen.stdout)
    loose = run_cli("solve", "-", "--no-validate", stdin=gen.stdout)
    assert strict.returncode == loose.returncode == 0
    assert json.loads(strict.stdout)["cost"] == json.loads(loose.stdout)["cost"]


def test_validation_error_exits_three():
    proc = run_cli("solve", "-", stdin="{not json")
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["error"]["kind"] == "format"


def test_class_violation_exits_four():
    proc = run_cli("solve-cfc", str(FIXTURES / "maxsat-overlap.json"))
    assert proc.returncode == 4
    assert json.loads(proc.stdout)["error"]["kind"] == "class"


def test_budget_exceeded_exits_five():
    gen = run_cli("gen", "profile", "--scheme", "order", "--types", "<,=",
                  "--n", "6", "--d", "3", "--seed", "2")
    proc = run_cli("oracle", "-", "--budget", "5", stdin=gen.stdout)
    assert proc.returncode == 5
    assert json.loads(proc.stdout)["error"]["kind"] == "budget"


def test_gen_is_byte_deterministic():
    args = ("gen", "profile", "--scheme", "maxcsp", "--types", ">,1",
            "--n", "6", "--d", "3", "--seed", "11")
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert "vcspkit" in proc.stdout


def test_gen_fixture_matches_shipped_file():
    proc = run_cli("gen", "fixture", "--name", "sat-blocks")
    assert proc.returncode == 0
    assert proc.stdout == (FIXTURES / "sat-blocks.json").read_text()


def test_oracle_solves_fixture():
    proc = run_cli("oracle", str(FIXTURES / "sat-blocks.json"))
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["solver"] == "oracle"
    assert doc["cost"] == "0"
