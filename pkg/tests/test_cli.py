"""End-to-end command-line behavior: config validation, reports, exit codes."""

import json
import os

import pytest

from cylgh.cli import ConfigError, main, parse_config

FO_GH = """
[operator]
kind = "first_order_t"
a = 1.0
b = 1.0
c = [1.0, 0.5]
"""

FO_NOTGH = """
[operator]
kind = "first_order_t"
a = 1.0
b = 1.0
c = [1.0, 0.0]
"""

CONST_WITH_INPUT = """
[operator]
kind = "const_split"
p = [[0.0, 1.0], [1.0, 0.0]]
q = [[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]

[input]
function = "cos_t_gaussian"
"""

TUBE_GH = """
[operator]
kind = "tube"
a = [{n = 0, re = 0.0, im = 0.0}]
b = [{n = 0, re = 1.0, im = 0.0}, {n = 1, re = 0.5, im = 0.0}, {n = -1, re = 0.5, im = 0.0}]
q = [{n = 0, re = 0.0, im = 0.3}]

[input]
function = "cos_t_gaussian"
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(args):
    return main(args)


def test_parse_config_aggregates_errors(tmp_path):
    cfg = write(tmp_path, "bad.toml", """
[operator]
kind = "nope"

[grid]
M = 63
X = -2.0

[budgets]
k_budget = 0
""")
    with pytest.raises(ConfigError) as exc:
        parse_config(cfg)
    msg = str(exc.value)
    assert "kind" in msg and "grid.M" in msg and "k_budget" in msg
    assert len(exc.value.problems) >= 4


def test_parse_config_missing_file():
    with pytest.raises(ConfigError):
        parse_config("/nonexistent/nowhere.toml")


def test_classify_report_and_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", FO_GH)
    out = str(tmp_path / "out")
    assert run(["classify", "--config", cfg, "--out", out]) == 0
    doc = json.loads((tmp_path / "out" / "classify.json").read_text())
    assert doc["status"] == "ok"
    assert doc["classification"]["verdict"] == "GH"
    # metadata (with timestamp) lives in the sidecar, never the body
    assert "timestamp" not in json.dumps(doc)
    meta = json.loads((tmp_path / "out" / "classify.meta.json").read_text())
    assert "timestamp" in meta


def test_reports_are_byte_identical(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", FO_GH)
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    assert run(["classify", "--config", cfg, "--out", a]) == 0
    assert run(["classify", "--config", cfg, "--out", b]) == 0
    assert ((tmp_path / "a" / "classify.json").read_bytes()
            == (tmp_path / "b" / "classify.json").read_bytes())


def test_zeros_command(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", FO_NOTGH)
    out = str(tmp_path / "out")
    assert run(["zeros", "--config", cfg, "--out", out,
                "--k-budget", "10"]) == 0
    doc = json.loads((tmp_path / "out" / "zeros.json").read_text())
    assert doc["exhaustive"] is True
    assert doc["witnesses"]


def test_solve_command_writes_solution_csv(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", CONST_WITH_INPUT)
    out = str(tmp_path / "out")
    assert run(["solve", "--config", cfg, "--out", out,
                "--format", "json,csv"]) == 0
    doc = json.loads((tmp_path / "out" / "solve.json").read_text())
    assert doc["report"]["residual_inf"] < 1e-6
    csv = (tmp_path / "out" / "solve-u.csv").read_text()
    assert csv.splitlines()[0] == "t,x,re,im"


def test_spectrum_and_fit_decay(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", CONST_WITH_INPUT)
    out = str(tmp_path / "out")
    assert run(["spectrum", "--config", cfg, "--out", out,
                "--format", "json,csv,svg"]) == 0
    assert (tmp_path / "out" / "spectrum.svg").read_text().startswith("<svg")
    assert run(["fit-decay", "--config", cfg, "--out", out]) == 0
    doc = json.loads((tmp_path / "out" / "fit-decay.json").read_text())
    assert abs(doc["fits"]["xi"]["order"] - 0.5) < 0.05


def test_solve_refusal_exit_code_one(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", """
[operator]
kind = "first_order_t"
a = 1.0
b = 2.0
c = [0.0, 0.0]

[input]
function = "gaussian"
""")
    assert run(["solve", "--config", cfg,
                "--out", str(tmp_path / "out")]) == 1
    body = capsys.readouterr().out
    doc = json.loads(body)
    assert doc["status"] == "refused"
    assert doc["error"]["type"] == "VanishingSymbolError"
    assert doc["error"]["witness"]["k"] == 0


def test_usage_error_exit_code_two(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", "[operator]\nkind = \"nope\"\n")
    assert run(["classify", "--config", cfg]) == 2
    assert run(["classify"]) == 2  # --config required


def test_grid_override_flags(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", CONST_WITH_INPUT)
    out = str(tmp_path / "out")
    assert run(["spectrum", "--config", cfg, "--out", out,
                "--grid", "32x256", "--x-halfwidth", "10.0"]) == 0
    doc = json.loads((tmp_path / "out" / "spectrum.json").read_text())
    assert doc["grid"] == {"M": 32, "N": 256, "X": 10.0}
    assert run(["spectrum", "--config", cfg, "--out", out,
                "--grid", "31x100"]) == 2


def test_reduce_and_counterexample_tube(tmp_path, capsys):
    cfg = write(tmp_path, "tube.toml", """
[operator]
kind = "tube"
a = [{n = 0, re = 1.0, im = 0.0}, {n = 1, re = 0.5, im = 0.0}, {n = -1, re = 0.5, im = 0.0}]
b = []
q = [{n = 0, re = 0.25, im = 0.0}]
""")
    out = str(tmp_path / "out")
    assert run(["reduce", "--config", cfg, "--out", out]) == 0
    doc = json.loads((tmp_path / "out" / "reduce.json").read_text())
    assert doc["a0"] == 1.0
    assert doc["q0"] == [0.25, 0.0]


def test_counterexample_plane_wave(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", FO_NOTGH)
    out = str(tmp_path / "out")
    assert run(["counterexample", "--config", cfg, "--out", out]) == 0
    doc = json.loads((tmp_path / "out" / "counterexample.json").read_text())
    assert doc["construction"] == "plane_wave"
    assert doc["residual_inf"] <= 1e-8


def test_counterexample_refused_for_gh_operator(tmp_path, capsys):
    cfg = write(tmp_path, "op.toml", FO_GH)
    assert run(["counterexample", "--config", cfg,
                "--out", str(tmp_path / "out")]) == 1


def test_verify_lemmas_runs_without_config(tmp_path, capsys):
    assert run(["verify-lemmas", "--out", str(tmp_path / "out"),
                "--seed", "5"]) == 0
    doc = json.loads((tmp_path / "out" / "verify-lemmas.json").read_text())
    assert doc["all_pass"] is True
