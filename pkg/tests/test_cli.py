import json

import pytest

from apollonius.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

NEAR_CAUSTIC = "--point=0.6743285972415404,-0.6270715201997635,-1.590759058602809"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("axes, point, count", [
    ("4,3,2", "0,0,0", 6),
    ("2,1", "1.4,0", 4),
    ("4,4,3", "0,0,0", "inf"),
])
def test_normals_examples(capsys, axes, point, count):
    code, out, _ = run(capsys, "normals", "--axes", axes, "--point", point)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["count"] == count


def test_normals_reports_frame(capsys):
    code, out, _ = run(capsys, "normals", "--axes", "2,3,4", "--point", "0.1,0.2,0.3")
    doc = json.loads(out)
    assert doc["canonical_axes"] == [4, 3, 2] and doc["permutation"] == [2, 1, 0]
    assert doc["point_canonical"] == [0.3, 0.2, 0.1]


def test_normals_json_out(capsys, tmp_path):
    path = tmp_path / "fan.json"
    code, out, _ = run(capsys, "normals", "--axes", "4,3,2", "--point", "0,0,0",
                       "--json-out", str(path))
    assert code == EXIT_OK and out == "" and json.loads(path.read_text())["count"] == 6


@pytest.mark.parametrize("argv", [
    ["normals", "--axes", "4,3,2", "--point", "1,2"],
    ["normals", "--axes", "4,x,2", "--point", "0,0,0"],
    ["normals", "--axes", "4,-3,2", "--point", "0,0,0"],
    ["classify", "--axes", "4,3"],
    ["classify", "--axes", "4,3,3"],
    ["mesh", "--axes", "4,3,3", "--res", "16x16"],
    ["mesh", "--axes", "4,3,2", "--res", "16by16"],
    ["curve", "--axes", "4.7,4.4,4", "--curve", "intersection:max"],
    ["curve", "--axes", "4,3,2", "--curve", "lemma2:12"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE and out == "" and err.startswith("apollonius ")


def test_argparse_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify"])
    assert exc.value.code == EXIT_USAGE


@pytest.mark.parametrize("axes, case", [("4.7,4.4,4", "i"), ("5,3,1", "xii"), ("5,4,3", "iv")])
def test_classify(capsys, axes, case):
    code, out, _ = run(capsys, "classify", "--axes", axes)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["case"] == case
    assert set(doc["predicates"]) >= {"D", "inv_sum_minus_3_over_b2"}


def test_classify_432(capsys):
    code, out, _ = run(capsys, "classify", "--axes", "4,3,2")
    assert json.loads(out)["case"] == "vii"


def test_mesh_file(capsys, tmp_path):
    path = tmp_path / "c.obj"
    code, out, _ = run(capsys, "mesh", "--axes", "4,3,2", "--sheet", "max",
                       "--res", "16x8", "--out", str(path))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["vertices"] == 128 and doc["sheet"] == "MaxRadius"
    lines = path.read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 128


def test_mesh_stdout(capsys):
    code, out, _ = run(capsys, "mesh", "--axes", "4,3,2", "--res", "8x8")
    assert code == EXIT_OK and out.startswith("v ")


@pytest.mark.parametrize("axes, curve, n", [
    ("4,3,2", "lemma2:5", 128), ("4.5,3.5,1.4", "nodal", 64), ("4,3,2", "intersection:min", 10)])
def test_curve_file(capsys, tmp_path, axes, curve, n):
    path = tmp_path / "c.csv"
    code, out, _ = run(capsys, "curve", "--axes", axes, "--curve", curve,
                       "--samples", str(n), "--out", str(path))
    rows = path.read_text().splitlines()
    assert code == EXIT_OK and rows[0] == "t,x,y,z" and len(rows) == n + 1
    assert json.loads(out)["samples"] == n


def test_files_byte_identical(capsys, tmp_path):
    for k in range(2):
        run(capsys, "mesh", "--axes", "4,3,2", "--res", "16x8", "--out", str(tmp_path / f"m{k}.obj"))
        run(capsys, "curve", "--axes", "4,3,2", "--curve", "intersection:max",
            "--out", str(tmp_path / f"c{k}.csv"))
        run(capsys, "normals", "--axes", "4,3,2", "--point", "1,0.5,0.2",
            "--json-out", str(tmp_path / f"n{k}.json"))
    for stem in ("m{}.obj", "c{}.csv", "n{}.json"):
        assert (tmp_path / stem.format(0)).read_bytes() == (tmp_path / stem.format(1)).read_bytes()


@pytest.mark.parametrize("suite, n", [("joachimsthal", 20), ("oracle2d", 20), ("caustic", 10)])
def test_verify_pass(capsys, suite, n):
    code, out, err = run(capsys, "verify", "--suite", suite, "--n", str(n), "--seed", "7")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["ok"] and doc["reports"][0]["passed"] == n
    assert f"{n}/{n} pass" in err


def test_verify_fig11_reports_failure(capsys):
    # (4,3,2) satisfies the predicates of case vii, not the vi it is listed under
    code, out, _ = run(capsys, "verify", "--suite", "fig11")
    rep = json.loads(out)["reports"][0]
    assert code == EXIT_FAIL and rep["passed"] == 11
    assert rep["failures"] == [{"axes": [4.0, 3.0, 2.0], "expected": "vi", "got": "vii"}]


def test_tol_flag_merges_close_roots(capsys):
    code, out, _ = run(capsys, "normals", "--axes", "4,3,2", NEAR_CAUSTIC)
    assert json.loads(out)["count"] == 4
    code, out, _ = run(capsys, "normals", "--axes", "4,3,2", NEAR_CAUSTIC, "--tol-mult", "0.05")
    assert [f["multiplicity"] for f in json.loads(out)["feet"]] == [1, 2, 1]


def test_env_tolerance_override(capsys, monkeypatch):
    monkeypatch.setenv("APOLLONIUS_TOL_MULT", "0.05")
    code, out, _ = run(capsys, "normals", "--axes", "4,3,2", NEAR_CAUSTIC)
    assert code == EXIT_OK and json.loads(out)["count"] == 3


@pytest.mark.parametrize("value", ["-1", "abc", "nan"])
def test_env_tolerance_invalid(capsys, monkeypatch, value):
    monkeypatch.setenv("APOLLONIUS_TOL_MULT", value)
    code, _, err = run(capsys, "normals", "--axes", "4,3,2", "--point", "0,0,0")
    assert code == EXIT_USAGE and "apollonius normals" in err
