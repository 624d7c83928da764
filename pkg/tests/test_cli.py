import json
import shutil
import subprocess
import sys

import pytest

from coxtorus import seeds
from coxtorus.cli import Check, Report, RunConfig, emit_report, main, run_subcommand


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "coxtorus.cli", *args], capture_output=True, text=True)


def test_empty_json_report():
    assert emit_report([], "json") == b'{"checks":[]}\n'


def test_single_pass_line():
    out = emit_report([Check("group-order", True, "order 24")], "text").decode()
    assert out == "PASS group-order: order 24\n"


def test_euler_csv_sorted(capsys):
    assert main(["euler", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "a,b,dim"
    rows = [tuple(int(x) for x in line.split(",")) for line in lines[1:]]
    assert rows == sorted(rows) and (26, 22, 50) in rows


def test_euler_text_grid(capsys):
    assert main(["euler", "--bundle", "2,1", "--bound", "130"]) == 0
    out = capsys.readouterr().out
    assert "PASS dimension-diagram" in out
    assert any(line.startswith(" 16 |") for line in out.splitlines())


def test_group_report_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["group", "--format", "json", "--out", str(a)]) == 0
    assert main(["group", "--format", "json", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert [c["tag"] for c in doc["checks"]][0] == "group-order"


def test_charts_deterministic_under_seed():
    _, r1 = run_subcommand("walls", RunConfig(seed=3))
    _, r2 = run_subcommand("walls", RunConfig(seed=3))
    assert emit_report(r1, "json") == emit_report(r2, "json")


@pytest.mark.parametrize("args", [["group", "--primes", "1"], ["group", "--bound", "0"],
                                  ["group", "--data", "/nonexistent/dir"]])
def test_configuration_errors_exit_2(args):
    assert main(args) == 2


def test_bad_flag_exit_2():
    r = run_cli("euler", "--bundle", "two")
    assert r.returncode == 2


def test_fault_injection_names_column(tmp_path):
    d = tmp_path / "data"
    shutil.copytree(seeds.default_data_dir(), d)
    path = d / "degree_matrix.txt"
    lines = path.read_text().splitlines()
    names = next(line for line in lines if line.startswith("names")).split()[1:]
    col = names.index("w23")
    out = []
    for line in lines:
        if line.startswith("tw2"):
            head, *vals = line.split()
            vals[col] = str(int(vals[col]) + 1)
            line = " ".join([head] + vals)
        out.append(line)
    path.write_text("\n".join(out) + "\n")
    r = run_cli("oracle", "--data", str(d))
    assert r.returncode == 1
    fail = [line for line in r.stdout.splitlines() if line.startswith("FAIL degree-matrix")]
    assert fail and "w23" in fail[0]


def test_unreadable_generator_file_exit_2(tmp_path):
    d = tmp_path / "data"
    shutil.copytree(seeds.default_data_dir(), d)
    (d / "generators.txt").write_text("w01 = x1 +* y1\n")
    code, rep = run_subcommand("oracle", RunConfig(data_dir=d))
    assert code == 2 and rep.checks[-1].tag == "configuration"


def test_report_failure_exit_code():
    rep = Report([Check("a", True), Check("b", False, "why")])
    assert not rep.passed
    assert emit_report(rep, "text").decode().splitlines()[1] == "FAIL b: why"
