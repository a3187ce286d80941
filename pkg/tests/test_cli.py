from __future__ import annotations

import json
import subprocess
import sys

import pytest

from betticover.cli import main

COORD = "# three coordinate points\np=101 n=2\n1 0 0\n0 1 0\n0 0 1\n"
MOMENT = "p=101 n=2\n1 0 0\n1 1 1\n1 2 4\n1 3 9\n"
TWO_LINES = "p=101 n=3\n1 0 0 0\n0 1 0 0\n1 1 0 0\n0 0 1 0\n0 0 0 1\n0 0 1 1\n"
LINE = "p=101 n=2\n1 0 0\n0 1 0\n1 1 0\n"


@pytest.fixture
def write(tmp_path):
    def _write(text, name="x.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_betti_coordinate_points(write, capsys):
    code = main(["betti", write(COORD)])
    out = capsys.readouterr().out
    assert code == 0
    assert "[2]" in out and "beta_{2,3} = 2" in out


def test_betti_moment_json(write, capsys):
    code, obj = run_json(capsys, ["betti", write(MOMENT)])
    assert code == 0
    values = {(e["i"], e["j"]): e["value"] for e in obj["betti"]}
    assert values == {(0, 0): 1, (1, 2): 2, (2, 4): 1}
    assert obj["beta_n_n1"] == 0


def test_betti_crop(write, capsys):
    code, obj = run_json(capsys, ["betti", write(MOMENT), "--max-i", "1"])
    assert code == 0 and {e["i"] for e in obj["betti"]} == {0, 1}


def test_betti_degenerate_warns(write, capsys):
    code = main(["betti", write(LINE)])
    captured = capsys.readouterr()
    assert code == 0 and "degenerate" in captured.err and "beta_{" not in captured.out


@pytest.mark.parametrize("text", ["p=101 n=2\n1 0\n", "hello\n", "p=100 n=2\n1 0 0\n"])
def test_malformed_input_exit_2(write, capsys, text):
    assert main(["betti", write(text)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path, capsys):
    assert main(["betti", str(tmp_path / "nope.txt")]) == 2


def test_cover_found(write, capsys):
    code, obj = run_json(capsys, ["cover", write(TWO_LINES)])
    assert code == 0
    cert = obj["certificate"]
    assert (cert["a"], cert["b"]) == (1, 1)
    assert obj["normalized"] == {"a_plus_b": 2, "disjoint": True}


def test_cover_absent(write, capsys):
    assert main(["cover", write(MOMENT)]) == 1
    assert "no cover" in capsys.readouterr().out


def test_cover_single_point(write, capsys):
    assert main(["cover", write("p=101 n=2\n1 0 0\n")]) == 2


def test_cover_with_t(write, capsys):
    code, obj = run_json(capsys, ["cover", write(MOMENT), "--t", "3"])
    assert code == 0 and obj["t"] == 3


def test_isoc_both_values(write, capsys):
    code, obj = run_json(capsys, ["isoc", write(MOMENT)])
    assert code == 0 and obj["isoc_betti"] == obj["isoc_socle"] == 2
    code, obj = run_json(capsys, ["isoc", write(COORD)])
    assert code == 0 and obj["isoc_betti"] == obj["isoc_socle"] == 1 and obj["form"] == [1, 1, 1]


def test_isoc_small_field(write, capsys):
    code, obj = run_json(capsys, ["isoc", write("p=2 n=1\n1 0\n0 1\n1 1\n")])
    assert code == 0
    assert obj["isoc_socle"] is None and obj["note"] == "socle oracle unavailable: field too small"


def test_isoc_degenerate(write, capsys):
    assert main(["isoc", write(LINE)]) == 2


def test_verify_main_cli(tmp_path, capsys):
    report = tmp_path / "r.json"
    code = main(["verify-main", "--n", "2", "--p", "101", "--trials", "5", "--seed", "3",
                 "--json-report", str(report)])
    assert code == 0
    obj = json.loads(report.read_text())
    assert obj["summary"]["trials"] == 5 and obj["config"]["seed"] == 3


def test_verify_main_cli_zero_trials(capsys):
    code, obj = run_json(capsys, ["verify-main", "--trials", "0"])
    assert code == 0 and obj["trials"] == 0


def test_verify_main_cli_planted(capsys):
    code, obj = run_json(capsys, ["verify-main", "--n", "2,3", "--p", "101", "--trials", "4", "--mix", "planted-only"])
    assert code == 0 and obj["predicate_true"] == 8


@pytest.mark.parametrize("argv", [
    ["verify-main", "--mix", "bogus"], ["verify-main", "--sizes", "3"], ["verify-main", "--p", "100"],
    ["verify-main", "--trials", "-1"], ["verify-main", "--n", "x"], ["frobnicate"], [],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_verify_matroid_cli_structured(capsys):
    code, obj = run_json(capsys, ["verify-matroid", "--n", "2,3", "--p", "101", "--trials", "10", "--elements", "6"])
    assert obj["moment_uniform"] is True
    assert code == (0 if not obj["counterexamples"] else 1)


def test_hochster_cycle(capsys):
    code, obj = run_json(capsys, ["hochster", "--cycle", "4"])
    assert code == 0 and obj["agree"] and obj["section_agree"]
    values = {(e["i"], e["j"]): e["value"] for e in obj["koszul"]["betti"]}
    assert values == {(0, 0): 1, (1, 2): 2, (2, 4): 1}


def test_hochster_cycle_six(capsys):
    code, obj = run_json(capsys, ["hochster", "--cycle", "6", "--p", "32003"])
    assert code == 0 and obj["beta_n_n1"] == 0 and obj["beta_n_n2"] != 0


def test_hochster_complex_file(write, capsys):
    path = write(json.dumps({"vertices": 4, "facets": [[0, 1, 2], [2, 3]]}), "c.json")
    code, obj = run_json(capsys, ["hochster", "--complex", path])
    assert code == 0 and obj["agree"]


def test_hochster_bad_input(write, capsys):
    assert main(["hochster", "--cycle", "2"]) == 2
    assert main(["hochster", "--complex", write("{}", "c.json")]) == 2
    assert main(["hochster"]) == 2


def test_module_entry_point(write):
    proc = subprocess.run([sys.executable, "-m", "betticover", "cover", write(MOMENT)],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "no cover" in proc.stdout
