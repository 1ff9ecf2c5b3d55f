import copy
import io
import json

import pytest

from silting import cli
from silting.errors import ProjectError
from silting.instances import a2_project
from silting.io import dumps, load, loads, save
from silting.linalg import QQ


def _write(tmp_path, data, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def run_cli(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), stdout=buf)
    out = buf.getvalue()
    return code, json.loads(out) if out else None


def test_minimal_project():
    pr = loads({"field": {"type": "Fp", "p": 3}, "quiver": {"vertices": ["1"], "arrows": []},
                "complexes": {"A": {"pm1": [], "p0": ["A"]}}})
    assert pr.algebra.dim == 1
    X = pr.complex()
    assert X.m0.dim == 1 and X.m1.dim == 0


def test_a2_project_entries(P1):
    pr = loads(a2_project())
    X = pr.complex("Pbar")
    assert X.m1.dim == 2 and X.m0.dim == 2
    assert tuple(pr.module("P1").dim_vector()) == tuple(P1.dim_vector())
    assert pr.complex().name == "Pbar"


def test_rational_field_project():
    d = a2_project()
    d["field"] = {"type": "Q"}
    A = loads(d).algebra
    assert A.field == QQ and A.dim == 3


@pytest.mark.parametrize("mutate, path", [
    (lambda d: d["quiver"]["arrows"][0].update({"to": "9"}), "arrows[0].target"),
    (lambda d: d["quiver"]["arrows"][0].update({"from": "9"}), "arrows[0].source"),
    (lambda d: d["modules"]["P1"]["arrows"].update({"b": [["1"]]}), "modules.P1.arrows.b"),
    (lambda d: d["modules"]["P1"]["arrows"].update({"a": [["1", "0"]]}), "modules.P1.arrows.a"),
    (lambda d: d["complexes"]["Pbar"]["p0"].__setitem__(0, "Q1"), "complexes.Pbar.p0[0]"),
    (lambda d: d["complexes"]["Pbar"].update({"sigma": [[]]}), "complexes.Pbar.sigma"),
    (lambda d: d["field"].update({"p": 4}), "field.p"),
    (lambda d: d["config"].update({"complex": "nope"}), "config.complex"),
])
def test_errors_name_json_path(mutate, path):
    d = copy.deepcopy(a2_project())
    mutate(d)
    with pytest.raises(ProjectError) as exc:
        loads(d)
    assert exc.value.path.startswith(path)


def test_schema_violation_path():
    d = a2_project()
    d["quiver"]["arrows"][0]["name"] = 5
    with pytest.raises(ProjectError) as exc:
        loads(d)
    assert "arrows" in exc.value.path


def test_round_trip(tmp_path):
    pr = loads(a2_project())
    p = tmp_path / "out.json"
    save(pr, p)
    again = load(p)
    assert dumps(again) == dumps(pr)
    assert again.algebra.dim == pr.algebra.dim
    assert again.complex("tilting").m0.dim == pr.complex("tilting").m0.dim


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(ProjectError):
        load(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ProjectError):
        load(bad)


@pytest.fixture
def project(tmp_path):
    return _write(tmp_path, a2_project())


def test_cli_check_silting(project):
    code, out = run_cli("check-silting", "--project", project)
    assert code == 0
    assert out["silting"] is True and out["d"] == 3 and out["endo_dim"] == 3


def test_cli_single_summand_is_not_silting(project):
    code, out = run_cli("check-silting", "--project", project, "--complex", "single")
    assert code == 1
    assert out["silting"] is False and out["presilting"] is True


def test_cli_verify_regular(project, tmp_path):
    dest = tmp_path / "report.json"
    code, out = run_cli("verify", "--project", project, "--complex", "A", "--out", str(dest))
    assert code == 0
    assert out["summary"]["failed"] == 0
    assert json.loads(dest.read_text()) == out


def test_cli_verify_selected_checks(project):
    code, out = run_cli("verify", "--project", project, "--check", "kt_tor,zeta_F")
    assert code == 0
    assert [c["name"] for c in out["checks"]] == ["zeta_F", "kt_tor"]


def test_cli_other_commands(project):
    code, out = run_cli("enumerate", "--project", project)
    assert code == 0 and out["count"] == 13
    code, out = run_cli("defect", "--project", project, "--module", "S2")
    assert out["defects"] == [{"module": "S2", "dim": 1, "defect_dim": 2}]
    code, out = run_cli("endo", "--project", project)
    assert out["endo_dim"] == 3 and out["epsilon_kernel_dim"] == 2
    code, out = run_cli("torsion", "--project", project)
    assert code == 0 and out["gen_equals_defect_kernel"]
    code, out = run_cli("kt", "--project", project, "--max-dim", "2")
    assert code == 0 and all(r["K_T_dim"] == r["dg_H-1_dim"] for r in out["rows"])
    code, out = run_cli("functor-table", "--project", project, "--max-dim", "2")
    assert code == 0 and out["rows"]
    code, out = run_cli("check-presilting", "--project", project, "--complex", "tilting")
    assert code == 0 and out["presilting"]


def test_cli_usage_errors(project, tmp_path, capsys):
    assert cli.run(["frobnicate", "--project", project]) == 2
    assert cli.run(["verify", "--project", project, "--check", "nope"]) == 2
    d = a2_project()
    d["quiver"]["arrows"][0]["to"] = "9"
    broken = _write(tmp_path, d, "broken.json")
    assert cli.run(["check-silting", "--project", broken]) == 2
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert json.loads(err)["kind"] == "ProjectError"
    assert "arrows[0].target" in json.loads(err)["error"]
