"""Scenario runner: expression grammar, task execution, report
emitters, exit codes, and the named check suites."""

import json

import pytest

from qdr import cli
from qdr.cli import (
    Options,
    ScenarioError,
    build_context,
    check,
    emit,
    main,
    run_scenario,
    tokenize,
)


def scenario_file(tmp_path, data, name="scn.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


# ---------------------------------------------------------------- grammar


def test_tokenize_quantum_wedge():
    kinds = [k for k, _, _ in tokenize("e[1] ^h e[2] ^ h")]
    assert kinds == ["name", "punct", "num", "punct", "qwedge",
                     "name", "punct", "num", "punct", "punct", "name"]


def test_product_frozen_value(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "product", "expr": "e[1] ^h e[2]"}]})
    rep = run_scenario(path)
    assert rep["tasks"][0]["value"] == "e1^e2 + (-1)*h"
    assert rep["tasks"][0]["pass"] is None
    assert rep["passed"]


def test_grammar_features(tmp_path):
    ctx = build_context("flat", dim=4)
    # rational scalars, unary minus, parentheses, wedge precedence
    assert str(ctx.eval("3/2 * e[1] - e[1]")) == "(1/2)*e1"
    assert str(ctx.eval("-(e[1] + e[2]) + e[2]")) == "(-1)*e1"
    assert str(ctx.eval("e[1] ^ e[2] + h")) == "e1^e2 + h"
    # ^ h wedges with the parameter scalar; ^h is the deformed product
    assert str(ctx.eval("e[1] ^ h")) == "h*e1"
    assert ctx.eval("e[1] ^h e[1]").is_zero()
    assert str(ctx.eval("(e[1] + e[3]) ^h (e[2] + e[4])")) == \
        "e1^e2 + e1^e4 + (-1)*e2^e3 + e3^e4 + (-2)*h"


def test_field_atoms():
    ctx = build_context("flat", dim=2)
    assert str(ctx.eval("x[1] * dx[2]")) == "(x1)*dx2"
    assert str(ctx.eval("x[1] * x[1] * dx[1]")) == "(x1^2)*dx1"
    tor = build_context("torus", n=1)
    assert str(tor.eval("mode(1,0)")) == "(mode(1,0))"
    assert str(tor.eval("mode(0,-2) * dx[1]")) == "(mode(0,-2))*dx1"


def test_expression_errors():
    ctx = build_context("flat", dim=2)
    for text in ("e[3]", "e[0]", "q[1]", "e[1] +", "e[1] e[2]",
                 "mode(1,0)", "(e[1]", "e[1] ^h ^h e[2]", "1/0"):
        with pytest.raises((ScenarioError, ZeroDivisionError)):
            ctx.eval(text)
    tor = build_context("torus", n=1)
    with pytest.raises(ScenarioError):
        tor.eval("x[1]")
    with pytest.raises(ScenarioError):
        tor.eval("mode(1)")
    cus = build_context("custom", dim=2, omega=[["0", "1"], ["-1", "0"]])
    with pytest.raises(ScenarioError):
        cus.eval("x[1]")


# ---------------------------------------------------------------- scenarios


def test_empty_tasks(tmp_path):
    rep = run_scenario(scenario_file(tmp_path, {"model": "flat", "dim": 2}))
    assert rep["passed"] and rep["counts"] == {"tasks": 0, "checked": 0,
                                               "failed": 0}


def test_scenario_validation(tmp_path):
    bad = [
        {"model": "flat", "bogus": 1},
        {"model": "nowhere"},
        {"model": "flat", "dim": 3},
        {"model": "flat", "tasks": [{"op": "nothing"}]},
        {"model": "flat", "tasks": [{"op": "product"}]},
        {"model": "flat", "tasks": [{"op": "product", "expr": "e[1]",
                                     "spare": 0}]},
        {"model": "flat", "seed": "seven"},
        {"model": "torus", "truncation": 0},
        {"model": "custom", "dim": 2},
        {"model": "custom", "dim": 2, "omega": [["0", "0"], ["0", "0"]]},
        {"model": "custom", "dim": 2, "omega": [["0", "1"], ["1", "0"]]},
        {"model": "flat", "tasks": "stokes"},
    ]
    for data in bad:
        with pytest.raises(ScenarioError):
            run_scenario(scenario_file(tmp_path, data))


def test_parse_error_has_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"model": "flat",\n  "dim": }')
    with pytest.raises(ScenarioError, match="line 2, column 10"):
        run_scenario(str(path))


def test_custom_model_scaled_pairing(tmp_path):
    # omega = 2*standard, so the inverse pairing halves the h term
    path = scenario_file(tmp_path, {
        "model": "custom", "dim": 2,
        "omega": [["0", "2"], ["-2", "0"]],
        "tasks": [{"op": "product", "expr": "e[1] ^h e[2]"}]})
    assert run_scenario(path)["tasks"][0]["value"] == "e1^e2 + (-1/2)*h"


def test_dimension_cap(tmp_path, monkeypatch):
    path = scenario_file(tmp_path, {"model": "flat", "dim": 10})
    with pytest.raises(ScenarioError, match="QDR_MAX_DIM"):
        run_scenario(path)
    monkeypatch.setenv("QDR_MAX_DIM", "12")
    assert run_scenario(path)["passed"]
    monkeypatch.setenv("QDR_MAX_DIM", "zero")
    with pytest.raises(ScenarioError):
        run_scenario(path)


def test_power_and_operator_tasks(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [
            {"op": "power", "expr": "e[1] + e[2]", "k": 2},
            {"op": "power", "expr": "e[1]", "k": 0},
            {"op": "operator", "name": "d", "expr": "x[1] * dx[2]"},
            {"op": "operator", "name": "d_h", "expr": "x[1] * dx[2]"},
            {"op": "operator", "name": "L", "expr": "1"},
            {"op": "operator", "name": "iota", "expr": "e[1] ^ e[2]"},
            {"op": "operator", "name": "star", "expr": "e[1]"},
        ]})
    vals = [t["value"] for t in run_scenario(path)["tasks"]]
    assert vals[0] == "0"
    assert vals[1] == "1"
    assert vals[2] == "dx1^dx2"
    # d_h(x1 dx2) = dx1^dx2 - h*delta(x1 dx2) with delta part -1
    assert vals[3] == "dx1^dx2 + h"
    assert vals[4] == "e1^e2"
    assert vals[5] == "(-1)"
    # star(e1) = -e1 under the w12 = -1 pairing convention
    assert vals[6] == "(-1)*e1"


def test_operator_validation(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "torus", "n": 1,
        "tasks": [{"op": "operator", "name": "star", "expr": "dx[1]"}]})
    with pytest.raises(ScenarioError, match="not available"):
        run_scenario(path)
    path = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "operator", "name": "curl", "expr": "e[1]"}]},
        name="op2.json")
    with pytest.raises(ScenarioError, match="unknown operator"):
        run_scenario(path)


def test_spectrum_task(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "spectrum", "n": 1, "parity": "odd"},
                  {"op": "spectrum", "n": 1, "parity": "even"}]})
    rep = run_scenario(path)
    odd, even = rep["tasks"]
    assert odd["pass"] and odd["char_poly"] == "t^2 - 2*t + 1"
    assert even["pass"] and even["det"] != "0"
    bad = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "spectrum", "n": 1, "parity": "sideways"}]},
        name="par.json")
    with pytest.raises(ScenarioError):
        run_scenario(bad)


def test_torus_tasks(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "torus", "n": 1, "truncation": 2, "seed": 7,
        "tasks": [
            {"op": "cohomology"},
            {"op": "cohomology", "theory": "poisson"},
            {"op": "integral", "expr": "dx[1] ^ dx[2]"},
            {"op": "integral", "expr": "mode(1,0) * dx[1] ^ dx[2]"},
            {"op": "stokes", "count": 5},
        ],
        "suite": "stokes"})
    rep = run_scenario(path)
    coh, poi, vol, osc, stk, suite = rep["tasks"]
    assert coh["pass"] and poi["pass"] and stk["pass"] and suite["pass"]
    assert vol["value"] == "1"
    assert osc["value"] == "0"
    assert rep["passed"]


def test_torus_tasks_rejected_elsewhere(tmp_path):
    for op in ({"op": "cohomology"}, {"op": "integral", "expr": "e[1]"},
               {"op": "stokes"}):
        path = scenario_file(tmp_path, {
            "model": "flat", "dim": 2, "tasks": [op]},
            name=f"t_{op['op']}.json")
        with pytest.raises(ScenarioError, match="torus"):
            run_scenario(path)


def test_chern_task(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "chern", "theta": "x[1] * dx[2]"},
                  {"op": "chern", "theta": [["0", "x[1] * dx[2]"],
                                            ["0", "0"]]}]})
    rep = run_scenario(path)
    line, rank2 = rep["tasks"]
    assert line["pass"] and line["rank"] == 1
    assert line["curvature"][0][0] == "dx1^dx2 + h"
    assert rank2["pass"] and rank2["rank"] == 2
    assert rep["passed"]


def test_cpn_table_task(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "cpn_table", "n": 2},
                  {"op": "cpn_table", "n": 5}]})
    rep = run_scenario(path)
    assert rep["tasks"][0]["pass"] and rep["tasks"][0]["nilpotency_order"] == 3
    assert rep["tasks"][1]["pass"] is None  # beyond the verified range
    assert rep["tasks"][1]["table"]["n"] == 5


# ---------------------------------------------------------------- suites


@pytest.mark.parametrize("name", sorted(cli.SUITES))
def test_each_suite_passes(name):
    rep = check(name, Options(seed=11, count=4))
    assert rep["passed"]
    assert rep["tasks"][0]["name"] == name


def test_unknown_suite_lists_names():
    with pytest.raises(ScenarioError, match="associativity"):
        check("nonexistent")


def test_suite_task_inherits_context(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "torus", "n": 1, "truncation": 2, "seed": 7,
        "tasks": ["relation17"]})
    rep = run_scenario(path)
    # context half-dimension 1 bounds the sweep
    assert [r["n"] for r in rep["tasks"][0]["rows"]] == [1]


# ---------------------------------------------------------------- emitters


def test_machine_roundtrip_and_determinism(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "torus", "n": 1, "seed": 3, "suite": "stokes"})
    rep1 = run_scenario(path)
    rep2 = run_scenario(path)
    out1, out2 = emit(rep1, "machine"), emit(rep2, "machine")
    assert out1 == out2
    assert json.loads(out1) == rep1


def test_text_emit_shape(tmp_path):
    path = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "product", "expr": "e[1] ^h e[2]"},
                  {"op": "spectrum", "n": 1, "parity": "odd"}]})
    text = emit(run_scenario(path), "text")
    lines = text.strip().splitlines()
    assert lines[0].startswith("qdr scenario")
    assert lines[-1] == "PASS  1 checks, 0 failed, 2 tasks"
    assert any("e1^e2 + (-1)*h" in line for line in lines)
    assert "conventions" in text
    with pytest.raises(ScenarioError):
        emit(run_scenario(path), "yaml")


def test_ledger_in_every_report():
    rep = check("moyal", Options(count=2))
    led = rep["ledger"]
    assert led["contraction_scaling"] == ["1", "1", "1"]
    assert led["dual_lefschetz"] == ["1", "-4"]
    assert led["koszul_component"]["c"] == "1"
    assert led["window_identity"]["multiple"] == "-1"


# ---------------------------------------------------------------- exit codes


def test_main_exit_codes(tmp_path, monkeypatch, capsys):
    good = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "product", "expr": "e[1] ^h e[2]"}]})
    assert main(["--scenario", good]) == 0
    assert main(["--check", "relation17", "--n", "1"]) == 0
    capsys.readouterr()

    bad = scenario_file(tmp_path, {"model": "flat", "oops": 1},
                        name="bad.json")
    assert main(["--scenario", bad]) == 2
    assert "oops" in capsys.readouterr().err
    assert main(["--check", "nonexistent"]) == 2
    assert main(["--scenario", str(tmp_path / "missing.json")]) == 2
    assert main([]) == 2
    capsys.readouterr()

    monkeypatch.setitem(cli.SUITES, "alwaysfail",
                        lambda o: ({"note": "forced"}, False))
    assert main(["--check", "alwaysfail"]) == 1
    out = capsys.readouterr().out
    assert out.strip().endswith("FAIL  1 checks, 1 failed, 1 tasks")


def test_main_machine_format(tmp_path, capsys):
    good = scenario_file(tmp_path, {
        "model": "flat", "dim": 2,
        "tasks": [{"op": "product", "expr": "e[1] ^h e[2]"}]})
    assert main(["--scenario", good, "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["tasks"][0]["value"] == "e1^e2 + (-1)*h"
