import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from maskdist.cli import main, parse_fixtures, UsageError

CELL = ["--spec", "cell.nominal.gcl", "--impl", "cell_2.impl.gcl"]


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_dist_text():
    code, out, _ = run("dist", *CELL)
    assert code == 0
    assert out.strip() == "masking distance = 1/3 (0.333)"


def test_dist_with_trace():
    code, out, _ = run("dist", *CELL, "--trace")
    lines = out.splitlines()
    assert code == 0
    assert "F1 (fault)" in lines[1]
    assert "ERR" in lines[-1]


def test_dist_machine_output_is_exact():
    code, out, _ = run("dist", "--spec", "memory.nominal.gcl", "--impl", "memory_5.impl.gcl",
                       "--format", "machine")
    doc = json.loads(out)
    assert code == 0
    assert Fraction(doc["value_num"], doc["value_den"]) == Fraction(1, 4)
    assert doc["fault_budget"] == 4
    assert doc["mode"] == "strong"
    assert doc["witness"][-1]["to"] == "ERR"


def test_weak_flag():
    code, out, _ = run("dist", "--spec", "brp_1.nominal.gcl", "--impl", "brp_1_1.impl.gcl",
                       "--weak", "--format", "machine")
    doc = json.loads(out)
    assert (doc["value_num"], doc["value_den"], doc["mode"]) == (1, 3, "weak")


def test_derive_nominal():
    code, out, _ = run("dist", "--derive-nominal", "--impl", "memory_3.impl.gcl")
    assert code == 0
    assert "1/3" in out


def test_check_exit_codes():
    assert run("check", "--spec", "cell.nominal.gcl", "--impl", "cell_1.impl.gcl")[0] == 0
    code, out, _ = run("check", *CELL)
    assert code == 2
    assert out.startswith("MASKING: no")


def test_trace_command():
    code, out, _ = run("trace", *CELL)
    assert code == 0
    assert "2 fault(s)" in out.splitlines()[0]
    code, out, _ = run("trace", "--spec", "cell.nominal.gcl", "--impl", "cell_1.impl.gcl")
    assert "every fault is masked" in out


def test_stats_command():
    code, out, _ = run("stats", *CELL, "--format", "machine")
    doc = json.loads(out)
    assert code == 0
    assert doc["impl_states"] == 4
    assert doc["fault_labels"] == ["F1", "F2"]
    assert doc["error_reachable"] is True


def test_export_commands():
    code, out, _ = run("export", "lts", "--impl", "cell_1.impl.gcl")
    assert code == 0 and out.startswith("STATES 3\nINIT 0\n")
    code, out, _ = run("export", "game", *CELL)
    assert code == 0 and out.startswith("# STATES")
    code, out, _ = run("export", "relation", "--spec", "cell.nominal.gcl", "--impl",
                       "cell_1.impl.gcl")
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run("export", "relation", *CELL)
    assert code == 2


def test_simulate_session():
    code, out, _ = run("simulate", "--impl", "cell_1.impl.gcl", stdin="3\n9\nx\nq\n")
    assert code == 0
    assert "[3] c.F1 (fault)" in out
    assert "-> c.F1" in out
    assert "enter a number" in out
    assert "stopped after 1 step(s)" in out


def test_usage_errors():
    assert run("dist", "--impl", "cell_1.impl.gcl")[0] == 1
    assert run("dist", "--impl", "no_such.gcl", "--spec", "cell.nominal.gcl")[0] == 1
    assert run("dist", *CELL, "--derive-nominal")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("dist", *CELL, "--state-cap", "0")[0] == 1


def test_parse_error_is_reported_with_position(tmp_path):
    bad = tmp_path / "bad.gcl"
    bad.write_text("Process P {\n\tx BOOL;\n")
    code, _, err = run("dist", "--spec", str(bad), "--impl", str(bad))
    assert code == 1
    assert f"{bad}:2:" in err


def test_state_cap_exit_code(monkeypatch):
    assert run("dist", "--spec", "memory.nominal.gcl", "--impl", "memory_3.impl.gcl",
               "--state-cap", "20")[0] == 3
    monkeypatch.setenv("MASKDIST_STATE_CAP", "20")
    assert run("dist", "--spec", "memory.nominal.gcl", "--impl", "memory_3.impl.gcl")[0] == 3
    monkeypatch.setenv("MASKDIST_STATE_CAP", "lots")
    assert run("dist", *CELL)[0] == 1


def test_bench_default_fixtures_pass(tmp_path):
    code, out, _ = run("bench", "--jobs", "2", "--plot-dir", str(tmp_path))
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "model;params;mode;expected;value;fault_budget;states;seconds;status"
    assert "# 11/11 rows match" in lines
    assert (tmp_path / "distance.png").stat().st_size > 0
    assert (tmp_path / "runtime.png").stat().st_size > 0


def test_bench_is_deterministic():
    def strip(text):
        return [";".join(ln.split(";")[:7]) for ln in text.splitlines() if not ln.startswith("#")]
    a = run("bench", "--fixtures", "examples.txt")[1]
    b = run("bench", "--fixtures", "examples.txt", "--jobs", "3")[1]
    assert strip(a) == strip(b)


def test_bench_mismatch_exit_code(tmp_path):
    fx = tmp_path / "wrong.txt"
    fx.write_text("cell;2;strong;1/2\n")
    code, out, _ = run("bench", "--fixtures", str(fx))
    assert code == 4
    assert out.splitlines()[1].endswith("FAIL")


def test_parse_fixtures_rejects_bad_lines():
    assert parse_fixtures("# c\nmemory;3;strong;1/3 # trailing\n")[0].stem == "memory_3"
    for bad in ("memory;3;strong", "memory;3;fast;1/3", "memory;3;strong;x"):
        with pytest.raises(UsageError):
            parse_fixtures(bad)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "maskdist", "dist", *CELL],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "masking distance = 1/3 (0.333)"
