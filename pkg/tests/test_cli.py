import json
import subprocess
import sys

import pytest

from conftest import fixture_path

RUN = [sys.executable, "-m", "defring.cli"]


def run_cli(*args, expect=0):
    out = subprocess.run(RUN + list(args), capture_output=True, text=True)
    assert out.returncode == expect, out.stderr or out.stdout
    return out.stdout


def test_cohomology_z3():
    out = json.loads(run_cli("cohomology", "--input", fixture_path("z3_trivial.json"),
                             "--dmax", "2"))
    assert out["results"]["dims"] == [1, 1, 1]
    assert out["schema_version"] == 1


def test_cohomology_acyclic():
    out = json.loads(run_cli("cohomology", "--input", fixture_path("z2_over_f3.json"),
                             "--dmax", "2"))
    assert out["results"]["dims"] == [1, 0, 0]


def test_cohomology_malformed_table(tmp_path):
    bad = {"prime": 3,
           "group": {"order": 3,
                     "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
                     "generators": [1]},
           "representation": {"blocks": [1], "matrices": [[[1]]]}}
    bad["group"]["table"][2][2] = 0   # breaks associativity/latin property
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    out = subprocess.run(RUN + ["cohomology", "--input", str(path)],
                         capture_output=True, text=True)
    assert out.returncode == 2
    assert "triple" in out.stderr or "inverse" in out.stderr


def test_present_z3():
    out = json.loads(run_cli("present", "--input", fixture_path("z3_trivial.json"),
                             "--truncate", "3"))
    res = out["results"]
    assert res["hilbert"] == [1, 1, 1, 0]
    assert res["relations"][0]["terms"] == [{"word": [0, 0, 0], "coeff": 2}]
    assert out["verification"]["passed"] is True


def test_present_z2():
    out = json.loads(run_cli("present", "--input", fixture_path("z2_trivial.json"),
                             "--truncate", "2"))
    res = out["results"]
    assert res["hilbert"] == [1, 1, 0]
    assert res["relations"][0]["terms"] == [{"word": [0, 0], "coeff": 1}]


def test_present_gate_on_duplicate_summands(tmp_path):
    doc = {"prime": 3,
           "group": {"order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
                     "generators": [1]},
           "representation": {"blocks": [1, 1],
                              "matrices": [[[1, 0], [0, 1]]]}}
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    out = subprocess.run(RUN + ["present", "--input", str(path)],
                         capture_output=True, text=True)
    assert out.returncode == 2
    assert "multiplicity" in out.stderr


def test_pseudo_quiver_file():
    out = json.loads(run_cli("pseudo", "--quiver", fixture_path("quiver_r2.json")))
    res = out["results"]
    assert res["krull"]["total"] == 3
    assert res["dim_h2"] == 1
    assert res["hilbert_cycle"] == [1, 4, 9, 16, 25]


def test_pseudo_from_group_matches_present():
    out = json.loads(run_cli("pseudo", "--input", fixture_path("z3_trivial.json"),
                             "--truncate", "6"))
    pres = json.loads(run_cli("present", "--input", fixture_path("z3_trivial.json"),
                              "--truncate", "6", "--abelian"))
    assert out["results"]["hilbert_ext"] == pres["results"]["hilbert"]


def test_oracle_ring_specs():
    out = json.loads(run_cli("oracle", "--input", fixture_path("z3_trivial.json"),
                             "--ring", "eps:3"))
    assert out["results"]["deformation_classes"] == 9
    out = json.loads(run_cli("oracle", "--input", fixture_path("z3_trivial.json"),
                             "--ring", "sqz:2"))
    assert out["results"]["deformation_classes"] == 9


def test_massey_z3():
    out = json.loads(run_cli("massey", "--input", fixture_path("z3_trivial.json"),
                             "--arity", "3"))
    (pw,) = out["results"]["powers"]
    assert pw["sign_checked"] is True and pw["value"] == [2]


def test_check_passes():
    out = json.loads(run_cli("check", "--input", fixture_path("z2_trivial.json")))
    assert out["verification"]["passed"] is True


def test_check_corrupted_sign_fails():
    out = subprocess.run(
        RUN + ["check", "--input", fixture_path("z3_trivial.json"), "--corrupt-sign"],
        capture_output=True, text=True)
    assert out.returncode == 1
    rep = json.loads(out.stdout)
    assert rep["results"]["universal_hom"]["passed"] is False
    assert rep["results"]["universal_hom"]["failures"]


@pytest.mark.parametrize("cmd", [
    ["check", "--input", "z3_trivial.json"],
    ["present", "--input", "z2_trivial.json", "--truncate", "3"],
    ["pseudo", "--quiver", "quiver_r2.json"],
    ["cohomology", "--input", "z2_over_f3.json", "--dmax", "2"],
])
def test_byte_identical_reruns(cmd):
    full = cmd[:2] + [fixture_path(cmd[2])] + cmd[3:]
    a = run_cli(*full)
    b = run_cli(*full)
    assert a == b


def test_text_format_runs():
    out = run_cli("cohomology", "--input", fixture_path("z3_trivial.json"),
                  "--dmax", "2", "--format", "text")
    assert "dims" in out


def test_pseudo_disconnected_quiver(tmp_path):
    doc = {"prime": 3, "r": 2, "h1": [[1, 0], [0, 2]], "h2": [[0, 0], [0, 0]]}
    path = tmp_path / "disc.json"
    path.write_text(json.dumps(doc))
    out = json.loads(run_cli("pseudo", "--quiver", str(path)))
    krull = out["results"]["krull"]
    assert krull["components"] == [[0], [1]]
    assert krull["per_component"] == [1, 2] and krull["total"] == 3


def test_capacity_error_clean_exit():
    import os
    env = dict(os.environ)
    env["DEFRING_CAP_BYTES"] = "10"
    out = subprocess.run(RUN + ["cohomology", "--input", fixture_path("z3_trivial.json")],
                         capture_output=True, text=True, env=env)
    assert out.returncode == 2
    assert "DEFRING_CAP_BYTES" in out.stderr
