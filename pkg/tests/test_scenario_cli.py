import json
from pathlib import Path

import pytest

from extgeom import cli
from extgeom.report import FAIL, INFO, PASS, SKIPPED, TAGS
from extgeom.scenario import ScenarioError, load_scenario, render_text, run, scenario_from_dict

ROOT = Path(__file__).resolve().parents[1]
SCEN = ROOT / "scenarios"
FAST = ("trivial", "gauge_su2", "plane_wave_u1", "extended_su2xu1", "broken_beta")


@pytest.fixture(scope="module")
def fast_docs():
    return {name: run(load_scenario(SCEN / f"{name}.json")) for name in FAST}


def _write(tmp_path, doc, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return path


# --- loading ---------------------------------------------------------------

def test_minimal_abelian_scenario():
    sc = scenario_from_dict({"group": "abelian4"})
    assert sc.dim == 4 and not sc.group.constants.f.any() and sc.fields == {}


def test_identity_tetrad_on_su2xu1_is_valid():
    H = [["1" if i == j else "0" for j in range(4)] for i in range(4)]
    sc = scenario_from_dict({"group": "su2xu1", "fields": {"H": H}})
    assert sc.fields["H"].shape == (4, 4)


def test_wrong_alpha_shape_names_the_field():
    with pytest.raises(ScenarioError, match="'alpha'"):
        scenario_from_dict({"group": "su2xu1", "fields": {"alpha": [["0"] * 4] * 3}})


def test_tetrad_needs_four_dimensional_group():
    with pytest.raises(ScenarioError, match="'H'"):
        scenario_from_dict({"group": "su2", "fields": {"H": [["0"] * 4] * 4}})


@pytest.mark.parametrize("doc, pattern", [
    ({"group": "so3"}, "so3"),
    ({}, "group"),
    ({"group": "u1", "bogus": 1}, "bogus"),
    ({"group": "u1", "metric": "lorentz"}, "lorentz"),
    ({"group": "u1", "options": {"stages": ["gauge", "later"]}}, "later"),
    ({"group": "u1", "domain": {"x0": [1, 0]}}, "empty"),
    ({"group": "u1", "fields": {"eta": [["1"]]}}, "number"),
])
def test_invalid_scenarios(doc, pattern):
    with pytest.raises(ScenarioError, match=pattern):
        scenario_from_dict(doc)


def test_expression_error_reports_entry_and_offset():
    with pytest.raises(ScenarioError) as info:
        scenario_from_dict({"group": "u1", "fields": {"alpha": [["0", "x0 +", "0", "0"]]}})
    msg = str(info.value)
    assert "'alpha'" in msg and "[0, 1]" in msg and "4" in msg


def test_beta_lower_triangle_follows_upper():
    b = [[["0", "x1", "0", "0"], ["7", "0", "0", "0"], ["0"] * 4, ["0"] * 4]]
    sc = scenario_from_dict({"group": "u1", "fields": {"beta": b}})
    assert sc.fields["beta"][0, 1, 0] is -sc.fields["beta"][0, 0, 1]


def test_invalid_json_reports_line(tmp_path):
    with pytest.raises(ScenarioError, match="line 2"):
        load_scenario(_write(tmp_path, '{"group": "u1",\n  oops}'))


# --- pipeline --------------------------------------------------------------

def test_trivial_scenario_has_zero_residuals(fast_docs):
    doc = fast_docs["trivial"]
    ran = [r for r in doc["reports"] if r["verdict"] != SKIPPED]
    assert ran and all(r["max_abs"] == 0.0 for r in ran)
    assert doc["summary"][FAIL] == 0 and doc["summary"]["status"] == "pass"


def test_broken_scenario_fails_with_witness_and_skips(fast_docs):
    doc = fast_docs["broken_beta"]
    fails = [r for r in doc["reports"] if r["verdict"] == FAIL]
    assert any(r["tag"].startswith("jacobi") for r in fails)
    assert all(r["witness"] is not None for r in fails)
    assert doc["stages"]["geometry"].startswith("skipped") and doc["stages"]["dynamics"].startswith("skipped")
    assert doc["summary"]["status"] == "fail"


@pytest.mark.parametrize("name", ["gauge_su2", "plane_wave_u1", "extended_su2xu1"])
def test_gauge_and_extended_scenarios_pass(fast_docs, name):
    doc = fast_docs[name]
    assert doc["summary"]["status"] == "pass"
    cons = [r for r in doc["reports"] if r["tag"] == "current.conservation"]
    assert cons and cons[0]["verdict"] == PASS


def test_plane_wave_checks_its_field_equation(fast_docs):
    gauge = [r for r in fast_docs["plane_wave_u1"]["reports"] if r["tag"] == "field.gauge"]
    assert gauge[0]["verdict"] == PASS and gauge[0]["max_abs"] < 1e-9


def test_field_equations_are_info_by_default(fast_docs):
    ext = [r for r in fast_docs["extended_su2xu1"]["reports"]
           if r["tag"] == "field.extended" and r["identity"] == "extended field equation"]
    assert ext[0]["verdict"] == INFO


def test_every_tag_is_known(fast_docs):
    for doc in fast_docs.values():
        for r in doc["reports"]:
            assert r["tag"] in TAGS, r["tag"]


def test_stage_subset_and_overrides():
    sc = load_scenario(SCEN / "gauge_su2.json")
    doc = run(sc, samples=8, tol=1e-6, seed=3, stages=["algebra"])
    assert doc["samples"] == 8 and doc["tol"] == 1e-6 and doc["seed"] == 3
    assert {r["tag"] for r in doc["reports"]} == {"algebra.jacobi", "algebra.representation"}


def test_runs_are_deterministic():
    sc = load_scenario(SCEN / "extended_su2xu1.json")
    assert json.dumps(run(sc)) == json.dumps(run(load_scenario(SCEN / "extended_su2xu1.json")))


def test_text_rendering(fast_docs):
    text = render_text(fast_docs["broken_beta"])
    assert "witness:" in text and "status=fail" in text


# --- command line ----------------------------------------------------------

def test_cli_run_pass(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["run", str(SCEN / "trivial.json"), "--report", str(out)]) == cli.EXIT_OK
    printed = json.loads(capsys.readouterr().out)
    assert json.loads(out.read_text()) == printed


def test_cli_run_fail(capsys):
    assert cli.main(["run", str(SCEN / "broken_beta.json"), "--format", "text"]) == cli.EXIT_FAIL
    assert "status=fail" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["run", "missing.json"],
    ["run", "scenarios/trivial.json", "--samples", "0"],
    ["run", "scenarios/trivial.json", "--tol", "-1"],
    ["run", "scenarios/trivial.json", "--stages", "gauge,nope"],
    ["check-group", "so3"],
    ["frobnicate"],
])
def test_cli_input_errors(argv, capsys, monkeypatch):
    monkeypatch.chdir(ROOT)
    assert cli.main(argv) == cli.EXIT_INPUT


def test_cli_rejects_bad_scenario(tmp_path, capsys):
    path = _write(tmp_path, {"group": "su2xu1", "fields": {"alpha": [["0"] * 4] * 3}})
    assert cli.main(["validate", str(path)]) == cli.EXIT_INPUT
    assert "alpha" in capsys.readouterr().err


def test_cli_validate(capsys):
    assert cli.main(["validate", str(SCEN / "tetrad_su2xu1.json")]) == cli.EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["valid"] and "H" in info["fields"] and info["dim"] == 4


def test_cli_check_group(capsys, tmp_path):
    assert cli.main(["check-group", "su2", "--format", "text"]) == cli.EXIT_OK
    assert "status=pass" in capsys.readouterr().out
    bad = _write(tmp_path, {"f": [[[0, 1], [0, 0]], [[0, 0], [0, 0]]]}, "bad.json")
    assert cli.main(["check-group", str(bad)]) == cli.EXIT_FAIL
    assert json.loads(capsys.readouterr().out)["status"] == "fail"
