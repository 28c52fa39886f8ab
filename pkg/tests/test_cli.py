import copy
import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glab.cli import TaskSpec, main, parse_spec, run
from glab.errors import InvalidCharacteristicError, NotDominantError, SpecError

TASKS = Path(__file__).resolve().parent.parent / "tasks"

COORDS = {
    "op": "dual",
    "arg": {"op": "tensor", "args": [{"op": "standard"}, {"op": "dual", "arg": {"op": "standard"}}]},
    "labels": ["a", "b", "c", "d"],
}


def doc(module=None, task="invariants", params=None, ring="Z", algebra=None):
    out = {"schema_version": 1, "group": "A1", "ring": ring, "task": {"name": task, "params": params or {}}}
    if module is not None:
        out["module"] = module
    if algebra is not None:
        out["algebra"] = algebra
    return json.dumps(out)


def test_minimal_spec_parses():
    spec = parse_spec(doc({"op": "sym", "d": 2, "arg": {"op": "adjoint"}}, params={"D": 4}))
    assert spec.task == "invariants" and spec.params == {"D": 4}
    assert spec.modulus == 0


def test_ring_z_mod_0_rejected():
    with pytest.raises(SpecError, match="modulus"):
        parse_spec(doc({"op": "standard"}, ring="Z/0"))


def test_steinberg_needs_prime():
    with pytest.raises(InvalidCharacteristicError):
        parse_spec(doc({"op": "steinberg", "r": 1, "p": 4}, task="validate"))


def test_delta_needs_dominant_weight():
    with pytest.raises(NotDominantError):
        parse_spec(doc({"op": "delta", "m": -1}, task="validate"))


def test_unknown_task_rejected():
    with pytest.raises(SpecError, match="/task/name"):
        parse_spec(doc({"op": "standard"}, task="frobnicate"))


def test_schema_diagnostics_name_the_field():
    text = doc({"op": "sym", "d": -1, "arg": {"op": "standard"}})
    with pytest.raises(SpecError, match="/module/d"):
        parse_spec(text)


def test_json_syntax_errors_report_line_and_column():
    with pytest.raises(SpecError, match="line 2, column"):
        parse_spec('{"schema_version": 1,\n "group": }')


def test_missing_module_and_bad_lengths():
    with pytest.raises(SpecError):
        parse_spec(doc(task="grosshans"))
    with pytest.raises(SpecError, match="target"):
        parse_spec(doc({"op": "standard"}, task="power-red", params={"target": [1]}))
    with pytest.raises(SpecError, match="labels"):
        parse_spec(doc({"op": "standard", "labels": ["u"]}, task="validate"))


def test_generator_expressions():
    alg = {"op": "quotient", "generators": [{"degree": 1, "expr": "b"}, {"degree": 1, "expr": "q"}]}
    with pytest.raises(SpecError, match="unknown names"):
        parse_spec(doc(COORDS, task="lift", algebra=alg))
    alg = {"op": "quotient", "generators": [{"degree": 2, "expr": "a"}]}
    with pytest.raises(SpecError, match="homogeneous"):
        parse_spec(doc(COORDS, task="lift", algebra=alg))


module_exprs = st.recursive(
    st.sampled_from([{"op": "standard"}, {"op": "adjoint"}, {"op": "trivial", "k": 2}, {"op": "nabla", "m": 2},
                     {"op": "delta", "m": 1}, {"op": "steinberg", "r": 1, "p": 2}]),
    lambda inner: st.one_of(
        st.builds(lambda a: {"op": "dual", "arg": a}, inner),
        st.builds(lambda a: {"op": "sym", "d": 2, "arg": a}, inner),
        st.builds(lambda a, b: {"op": "tensor", "args": [a, b]}, inner, inner),
        st.builds(lambda a, b: {"op": "direct_sum", "args": [a, b]}, inner, inner),
    ),
    max_leaves=3,
)


@settings(max_examples=25, deadline=None)
@given(module_exprs, st.sampled_from(["Z", "Z/2", "Z/6"]), st.sampled_from(["validate", "grosshans"]))
def test_round_trip(module, ring, task):
    spec = parse_spec(doc(module, task=task, ring=ring))
    again = parse_spec(spec.to_json())
    assert again == spec
    assert isinstance(again, TaskSpec)


def strip_timing(report):
    report = copy.deepcopy(report)
    report.pop("timing_seconds")
    return report


def test_reports_are_deterministic():
    spec = parse_spec((TASKS / "adjoint_hull_mod2.json").read_text())
    spec.params["D"] = 2
    a, b = run(spec), run(spec)
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)
    assert a["exact_arithmetic"] is True and a["tool"] == "glab"


def test_power_red_task_exit_0(capsys):
    assert main(["run", str(TASKS / "trace_power_red.json")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "proven-within-bounds"
    assert report["results"]["degree"] == 2
    assert report["results"]["witness"] == "a*d - b*c"


def test_unipotent_task_exit_2(capsys):
    assert main(["run", str(TASKS / "unipotent_control.json"), "--d-max", "8"]) == 2
    captured = capsys.readouterr()
    assert json.loads(captured.out)["status"] == "inconclusive"
    assert "inconclusive" in captured.err


def test_invariants_task(capsys):
    assert main(["run", str(TASKS / "conjugation_invariants.json")]) == 0
    res = json.loads(capsys.readouterr().out)["results"]
    assert [g["degree"] for g in res["generators"]] == [1, 2]


def test_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(doc({"op": "standard"}, ring="Z/0"))
    assert main(["run", str(bad)]) == 1
    assert "SpecError" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.json")]) == 1


def test_flag_overrides_are_echoed(capsys):
    assert main(["run", str(TASKS / "adjoint_lift_mod2.json"), "--degree", "1", "--s-max", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["task"]["task"]["params"] == {"D": 1, "s_max": 3}


def test_all_shipped_tasks_parse():
    for path in sorted(TASKS.glob("*.json")):
        spec = parse_spec(path.read_text())
        assert parse_spec(spec.to_json()) == spec


def test_check_command(capsys):
    assert main(["check"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 5
