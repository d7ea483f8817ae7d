import json

import pytest

from svarc import cli
from svarc.errors import FormatError
from svarc.model.abelian import AbGroup, AbHom
from svarc.model.category import constant_functor, interval_category
from svarc.model.cochain import CochainComplex
from svarc.model.cup import cup_length
from svarc.model.fibration import classify
from svarc.model.instances import load_bundled
from svarc.model.instances import parallel_arrows as parallel_arrows_category
from svarc.model.secat import secat, svarc_bound
from svarc.util.serialize import (
    bound_report,
    category_from_dict,
    category_to_dict,
    cohomology_report,
    cup_length_report,
    dumps,
    fibration_report,
    group_from_dict,
    loads,
    parse_group_spec,
    parse_subcategory,
    read_category,
    read_system,
    secat_report,
    to_dot,
)


def run_json(capsys, argv):
    code = cli.run(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_group_specs():
    assert parse_group_spec("Z") == AbGroup((0,))
    assert parse_group_spec("Z/6") == AbGroup.cyclic(6)
    with pytest.raises(FormatError):
        parse_group_spec("Q")
    with pytest.raises(FormatError):
        parse_group_spec("Z/x")
    assert parse_group_spec("Z^2 + Z/2") == AbGroup.of(2, [2])
    with pytest.raises(FormatError):
        parse_group_spec("Z/1")
    assert group_from_dict({"rank": 2, "torsion": [2, 4]}) == AbGroup.of(2, [2, 4])


def test_system_file(data_file):
    S = read_category(data_file("S.json"))
    D = read_system(data_file("S_system.json"), S)
    assert D.pull_map("beta", "id_D") == AbHom.scalar(AbGroup((0,)), -1)
    assert D.push_map("beta", "id_C") == AbHom.identity(AbGroup((0,)))
    constant = read_system("constant:Z/2", S)
    assert constant["alpha"] == AbGroup.cyclic(2)


def test_malformed_category():
    with pytest.raises(FormatError):
        category_from_dict({"objects": ["A"]})
    with pytest.raises(FormatError):
        category_from_dict({"objects": ["A", "B"], "morphisms": [{"id": "f", "dom": "A"}]})


def test_subcategory_ids(data_file):
    S = read_category(data_file("S.json"))
    u = parse_subcategory("alpha", S)
    assert u.objects == {"C", "D"}
    assert u.morphisms == {"id_C", "id_D", "alpha"}
    with pytest.raises(FormatError):
        parse_subcategory("gamma", S)


def test_dot_export():
    dot = to_dot(parallel_arrows_category())
    assert dot.startswith('digraph "S" {')
    assert '"C" -> "D" [label="alpha"];' in dot
    assert "id_C" not in dot


def test_category_round_trip(tmp_path):
    path = tmp_path / "S.json"
    path.write_text(json.dumps(category_to_dict(parallel_arrows_category())))
    again = read_category(path)
    assert again.morphisms == parallel_arrows_category().morphisms
    assert again.table == parallel_arrows_category().table


def test_reports_round_trip(parallel_arrows, doblecir, groupoid):
    cx = CochainComplex(parallel_arrows.category, parallel_arrows.system)
    reports = [
        cohomology_report(cx.cohomology(1)),
        cup_length_report(cup_length(cx, parallel_arrows.pairing)),
        fibration_report(classify(constant_functor(interval_category(0), interval_category(1), "0"))),
        secat_report(secat(doblecir.functor)),
        secat_report(secat(groupoid.functor)),
        bound_report(svarc_bound(doblecir.functor, doblecir.system, doblecir.pairing)),
    ]
    for report in reports:
        assert loads(dumps(report)) == report
    assert reports[4]["value"] == "infinite"


def test_validate(capsys, data_file):
    assert cli.run(["validate", data_file("P2.json")]) == cli.OK
    assert "9 morphisms" in capsys.readouterr().out
    code, out = run_json(capsys, ["validate", data_file("Z2.json")])
    assert code == cli.OK
    assert out["nerve_dimension"] == "unbounded"
    code, out = run_json(capsys, ["validate", data_file("doblecir.json"), "--dot"])
    assert out["kind"] == "functor"
    assert out["dot"].startswith("digraph")


def test_cohomology(capsys, data_file):
    argv = ["cohomology", data_file("S.json"), "--system", data_file("S_system.json")]
    code, out = run_json(capsys, argv)
    assert code == cli.OK
    assert [g["group"] for g in out["cohomology"]] == ["0", "Z/2"]
    assert out["cohomology"][1]["invariants"] == {"rank": 0, "torsion": [2]}
    code, out = run_json(capsys, argv + ["--relative", "C"])
    assert [g["group"] for g in out["cohomology"]] == ["0", "Z"]


def test_unbounded_nerve_needs_a_degree(capsys, data_file):
    argv = ["cohomology", data_file("Z2.json"), "--system", "constant:Z/2"]
    assert cli.run(argv) == cli.USAGE
    assert "maximal degree" in capsys.readouterr().err
    code, out = run_json(capsys, argv + ["--max-degree", "2"])
    assert code == cli.OK
    assert [g["group"] for g in out["cohomology"]] == ["Z/2"] * 3


def test_cup_length(capsys, data_file):
    argv = ["cup-length", data_file("P2.json"), "--system", "constant:Z/2"]
    code, out = run_json(capsys, argv)
    assert (code, out["cup_length"]) == (cli.OK, 2)
    code, out = run_json(capsys, argv + ["--kernel-of", data_file("projective_plane.json")])
    assert (code, out["cup_length"]) == (cli.OK, 2)
    assert cli.run(argv + ["--kernel-of", data_file("doblecir.json")]) == cli.USAGE


def test_ring_pairing_on_the_twisted_system(capsys, data_file):
    argv = ["cup-length", data_file("S.json"), "--system", data_file("S_system.json")]
    assert cli.run(argv) == cli.FAILED
    assert "PairingNotNatural" in capsys.readouterr().err
    assert cli.run(argv + ["--pairing", "zero"]) == cli.OK


def test_check(capsys, data_file, tmp_path):
    assert cli.run(["check", data_file("groupoid.json"), "covering"]) == cli.OK
    (tmp_path / "point.json").write_text(json.dumps(category_to_dict(interval_category(0))))
    functor = {
        "source": "point.json",
        "target": data_file("S.json"),
        "obj_map": {"0": "D"},
        "mor_map": {"id_0": "id_D"},
    }
    (tmp_path / "point_at_D.json").write_text(json.dumps(functor))
    path = str(tmp_path / "point_at_D.json")
    assert cli.run(["check", path, "opfibration"]) == cli.OK
    capsys.readouterr()
    assert cli.run(["check", path, "fibration"]) == cli.FAILED
    assert "witness" in capsys.readouterr().out
    assert cli.run(["svarc-bound", path, "--system", "constant:Z"]) == cli.FAILED


def test_secat(capsys, data_file):
    assert cli.run(["secat", data_file("doblecir.json")]) == cli.OK
    out = capsys.readouterr().out
    assert out.startswith("sc = 1")
    assert "piece <alpha>" in out and "piece <beta>" in out
    code, out = run_json(capsys, ["secat", data_file("groupoid.json"), "--homotopic"])
    assert (code, out["value"]) == (cli.OK, "infinite")


def test_svarc_bound(capsys, data_file):
    code, out = run_json(
        capsys, ["svarc-bound", data_file("projective_plane.json"), "--system", "constant:Z/2"]
    )
    assert code == cli.OK
    assert (out["cup_length"], out["svarc_genus"], out["holds"]) == (2, 3, True)
    code, out = run_json(
        capsys,
        ["svarc-bound", data_file("doblecir.json"), "--system", data_file("S_system.json"), "--pairing", "zero"],
    )
    assert (out["cup_length"], out["svarc_genus"], out["holds"]) == (1, 1, True)


def test_usage_errors(capsys, tmp_path):
    assert cli.run([]) == cli.USAGE
    assert cli.run(["cohomology"]) == cli.USAGE
    assert cli.run(["validate", str(tmp_path / "missing.json")]) == cli.USAGE
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert cli.run(["validate", str(broken)]) == cli.USAGE
    assert cli.run(["examples", "run", "moebius"]) == cli.USAGE
    assert cli.run(["examples", "run"]) == cli.USAGE


def test_examples_match_their_goldens(capsys):
    assert cli.run(["examples", "list"]) == cli.OK
    assert "projective_plane_covering" in capsys.readouterr().out
    code, out = run_json(capsys, ["examples", "run", "--all"])
    assert code == cli.OK
    assert all(not result["mismatches"] for result in out.values())
    assert out["parallel_arrows_S"]["numbers"]["H1"] == "Z/2"


@pytest.mark.parametrize("name", ["parallel_arrows_S", "terminal"])
def test_golden_mismatch(capsys, monkeypatch, name):
    golden = dict(cli.read_golden(name))
    golden["H0"] = "Z^7"
    monkeypatch.setattr(cli, "read_golden", lambda _: golden)
    assert cli.run(["examples", "run", name]) == cli.MISMATCH
    assert "expected Z^7" in capsys.readouterr().out


def test_compare():
    assert cli.compare({"a": 1, "b": [1, 2]}, {"a": 1, "b": [1, 2]}) == {}
    assert cli.compare({"a": (1, 2)}, {"a": [1, 2]}) == {}
    assert cli.compare({"a": 1}, {"a": 2, "c": 0}) == {
        "a": {"expected": 2, "computed": 1},
        "c": {"expected": 0, "computed": None},
    }


def test_bundled_loader_is_exposed():
    assert load_bundled("terminal").name == "terminal"
