"""End-to-end CLI checks: schemas, exit codes, and the snapshot pipeline."""

import json
import os

import jsonschema
import pytest

from g2lab import cli

SCHEMA_DIR = os.path.join(os.path.dirname(cli.__file__), "schemas")


def load_schema(name):
    with open(os.path.join(SCHEMA_DIR, name + ".json")) as fh:
        return json.load(fh)


def run_cli(argv, capsys):
    code = cli.run(argv)
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out.startswith("{") else None
    err = None
    if captured.err:
        # argparse may print usage text before the error JSON line
        err = json.loads(captured.err.strip().splitlines()[-1])
    return code, out, err


def write_xi(tmp_path, name="xi.json"):
    path = str(tmp_path / name)
    with open(path, "w") as fh:
        json.dump({"dim": 7, "degree": 4,
                   "terms": [{"idx": [1, 5, 6, 7], "c": -2.0}]}, fh)
    return path


def test_identities_exact_all_pass(capsys):
    code, out, _ = run_cli(["identities"], capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("identities"))
    assert out["all_pass"]
    assert all(it["residual"] == 0.0 for it in out["identities"])


def test_identities_double_mode(capsys):
    code, out, _ = run_cli(["identities", "--mode", "double"], capsys)
    assert code == 0
    assert out["all_pass"]


def test_fibration_default_spec(capsys):
    code, out, _ = run_cli(["fibration"], capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("fibration"))
    assert out["diagnosis"] == "product"
    assert out["orthonormality_residual"] == 0.0


def test_fibration_missing_spec_file(capsys):
    code, out, err = run_cli(["fibration", "--spec", "/no/such.json"], capsys)
    assert code == 1 and out is None
    jsonschema.validate(err, load_schema("error"))
    assert err["error"]["code"] == "validation"


def test_deform_splits_transverse_form(tmp_path, capsys):
    xi = write_xi(tmp_path)
    code, out, _ = run_cli(["deform", "--xi", xi], capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("deform"))
    assert out["split"]["c_IV"] == [-2.0, 0.0, 0.0, 0.0]


def test_deform_rejects_wrong_degree(tmp_path, capsys):
    path = str(tmp_path / "bad.json")
    with open(path, "w") as fh:
        json.dump({"dim": 7, "degree": 3,
                   "terms": [{"idx": [1, 2, 3], "c": 1.0}]}, fh)
    code, _, err = run_cli(["deform", "--xi", path], capsys)
    assert code == 1
    assert err["error"]["code"] == "validation"


def test_bad_subcommand_is_validation_error(capsys):
    code, _, err = run_cli(["frobnicate"], capsys)
    assert code == 1
    jsonschema.validate(err, load_schema("error"))


def test_bad_lattice_string(tmp_path, capsys):
    code, _, err = run_cli(["flow", "--lattice", "6x6", "--out",
                            str(tmp_path / "f.lat")], capsys)
    assert code == 1
    assert err["error"]["code"] == "validation"


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """flow -> lift snapshots shared by the downstream subcommand tests."""
    root = tmp_path_factory.mktemp("pipeline")
    four = str(root / "cooled.lat")
    seven = str(root / "lifted.lat")
    code = cli.run(["flow", "--lattice", "4x4x4x4", "--group", "u1",
                    "--noise", "0.02", "--out", four])
    assert code == 0
    code = cli.run(["lift", "--in", four, "--tgrid", "3x3x3",
                    "--out", seven])
    assert code == 0
    return {"root": root, "four": four, "seven": seven}


def test_flow_outputs(pipeline, capsys):
    code, out, _ = run_cli(["flow", "--lattice", "4x4x4x4", "--group", "u1",
                            "--noise", "0.02",
                            "--out", str(pipeline["root"] / "again.lat")],
                           capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("flow"))
    assert out["converged"]
    assert out["final_asd_fraction"] < 1e-3
    csv = open(str(pipeline["root"] / "again.lat.csv")).read().splitlines()
    assert csv[0] == "step,asd_fraction,charge"
    assert len(csv) == out["steps"] + 2  # header + initial row + steps


def test_lift_and_residual(pipeline, capsys):
    code, out, _ = run_cli(["residual", "--in", pipeline["seven"]], capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("residual"))
    assert out["dims"] == [4, 4, 4, 4, 3, 3, 3]
    assert out["f7_norm"] >= 0


def test_lift_schema(pipeline, capsys):
    code, out, _ = run_cli(["lift", "--in", pipeline["four"],
                            "--tgrid", "3x3x3",
                            "--out", str(pipeline["root"] / "l2.lat")],
                           capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("lift"))


def test_residual_rejects_4d_snapshot(pipeline, capsys):
    code, _, err = run_cli(["residual", "--in", pipeline["four"]], capsys)
    assert code == 1
    assert err["error"]["code"] == "validation"


def test_cs_probe_values(pipeline, capsys):
    code, out, _ = run_cli(["cs", "--field", pipeline["seven"],
                            "--probe-offsets", "2"], capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("cs"))
    assert len(out["rho_values"]) == 3
    assert out["spread"] >= 0


def test_obstruct_verdict(pipeline, tmp_path, capsys):
    xi = write_xi(tmp_path)
    code, out, _ = run_cli(["obstruct", "--field", pipeline["seven"],
                            "--xi", xi], capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("obstruct"))
    assert out["report"]["verdict"] in ("instanton-survives",
                                        "instanton-obstructed")


def test_report_schema_and_determinism(tmp_path, capsys):
    a, b = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    code, _, _ = run_cli(["report", "--seed", "7", "--out", a], capsys)
    assert code == 0
    code, _, _ = run_cli(["report", "--seed", "7", "--out", b], capsys)
    assert code == 0
    with open(a, "rb") as f1, open(b, "rb") as f2:
        assert f1.read() == f2.read()
    jsonschema.validate(json.load(open(a)), load_schema("report"))


def test_report_stdout_json(capsys):
    code, out, _ = run_cli(["report", "--seed", "3"], capsys)
    assert code == 0
    jsonschema.validate(out, load_schema("report"))
    assert out["identities"]["all_pass"]
