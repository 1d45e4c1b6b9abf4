import json
from pathlib import Path

import pytest

from twistalg import standard_contexts
from twistalg.cli import main
from twistalg.errors import InputError
from twistalg.fileio import load_basis, load_element, load_groupoid_file, save_context

FIXDIR = Path(__file__).resolve().parent.parent / "fixtures"


def run(*argv):
    return main([str(a) for a in argv])


def test_validate_fixture_ok(capsys):
    assert run("validate", FIXDIR / "r2.json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] and doc["groupoid"]["ok"] and doc["cocycle"]["ok"]


def test_validate_all_fixture_files():
    for path in sorted(FIXDIR.glob("*.json")):
        if path.name.startswith("basis"):
            continue
        assert run("validate", path) == 0, path


def test_validate_broken_cocycle_names_witness(tmp_path, capsys):
    doc = json.loads((FIXDIR / "v4_pauli.json").read_text())
    doc["cocycle"] = {"01|10": {"turns": [1, 2]}}  # breaks the 2-cocycle identity
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run("validate", bad) == 1
    out = json.loads(capsys.readouterr().out)
    assert not out["cocycle"]["ok"]
    assert out["cocycle"]["violations"][0]["witness"]


def test_validate_broken_composition(tmp_path, capsys):
    doc = json.loads((FIXDIR / "r2.json").read_text())
    doc["compose"]["(1,2)|(1,2)"] = "(1,1)"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run("validate", bad) == 1
    out = json.loads(capsys.readouterr().out)
    messages = [v["message"] for v in out["groupoid"]["violations"]]
    assert "non-composable pair composed" in messages


def test_validate_truncated_file(tmp_path, capsys):
    bad = tmp_path / "trunc.json"
    bad.write_text('{"elements": ["a", ')
    assert run("validate", bad) == 2
    out = json.loads(capsys.readouterr().out)
    assert out["error"]["kind"] == "parse" and out["error"]["line"] >= 1


def test_missing_file_is_input_error(capsys):
    assert run("validate", "/nonexistent/g.json") == 2


def test_reconstruct_r2(tmp_path):
    out = tmp_path / "r2_report.json"
    assert run("reconstruct", FIXDIR / "r2.json", "--out", out) == 0
    doc = json.loads(out.read_text())
    rec = doc["reconstruction"]
    assert rec["passed"] and rec["isomorphism"]["status"] == "isomorphic"
    assert rec["cocycle_residual"] < 1e-9
    assert rec["isomorphism"]["mapping"]


def test_reconstruct_with_basis_spec(tmp_path):
    out = tmp_path / "r2_basis.json"
    code = run("reconstruct", FIXDIR / "r2.json",
               "--semigroup", f"basis:{FIXDIR / 'basis_r2_offdiag.json'}", "--out", out)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["reconstruction"]["cartan"]["summable"] is False
    assert doc["reconstruction"]["summable_image"]["passed"]


def test_reconstruct_reports_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("reconstruct", FIXDIR / "z4.json", "--out", a) == 0
    assert run("reconstruct", FIXDIR / "z4.json", "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.json"
    assert run("reconstruct", FIXDIR / "z4.json", "--seed", 7, "--out", c) == 0
    assert a.read_bytes() != c.read_bytes()


def test_compare_flows(tmp_path):
    reports = {}
    for name in ("z4", "v4", "v4_pauli", "r2", "swap2", "r4"):
        out = tmp_path / f"{name}.json"
        assert run("reconstruct", FIXDIR / f"{name}.json", "--out", out) == 0
        reports[name] = out
    pauli = json.loads(reports["v4_pauli"].read_text())["reconstruction"]
    assert pauli["cocycle_residual"] == 0
    assert pauli["recovered_cocycle"]  # the sign entries survive the round trip
    assert run("compare", reports["z4"], reports["z4"]) == 0
    assert run("compare", reports["r2"], reports["swap2"]) == 0
    assert run("compare", reports["z4"], reports["v4"]) == 1
    # same groupoid but inequivalent recovered twists
    assert run("compare", reports["v4"], reports["v4_pauli"]) == 1
    assert run("compare", reports["r4"], reports["r4"], "--iso-budget", 3) == 3


def test_compare_malformed_report(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run("compare", bad, bad) == 2


def test_suite_all_on_r2(tmp_path):
    out = tmp_path / "suite.json"
    assert run("suite", FIXDIR / "r2.json", "--suite", "all", "--out", out) == 0
    doc = json.loads(out.read_text())
    assert set(doc["suites"]) == {"cartan", "relations", "states", "masa",
                                  "expectation", "norms"}
    assert doc["passed"]


def test_suite_masa_on_z4_passes_with_witness(capsys):
    assert run("suite", FIXDIR / "z4.json", "--suite", "masa") == 0
    doc = json.loads(capsys.readouterr().out)
    masa = doc["suites"]["masa"]
    assert masa["is_masa"] is False
    assert masa["contrapositive"]["commutant_witness"]


def test_suite_unknown_name():
    assert run("suite", FIXDIR / "r2.json", "--suite", "bogus") == 2


def test_element_file_roundtrip(tmp_path):
    ctx = standard_contexts()["R2"]
    path = tmp_path / "elem.json"
    path.write_text(json.dumps({"coeffs": {"(1,2)": [1.5, -2.0], "(1,1)": [0.25, 0]}}))
    a = load_element(path, ctx)
    assert a.coeff("(1,2)") == 1.5 - 2j and a.coeff("(1,1)") == 0.25
    path.write_text(json.dumps({"coeffs": {"nope": [1, 0]}}))
    with pytest.raises(InputError):
        load_element(path, ctx)


def test_basis_file_validation(tmp_path):
    ctx = standard_contexts()["R2"]
    good = load_basis(FIXDIR / "basis_r2_offdiag.json", ctx)
    assert frozenset(["(1,2)"]) in good.family
    bad = tmp_path / "basis.json"
    bad.write_text(json.dumps({"bisections": [["(1,2)"]]}))
    with pytest.raises(InputError):
        load_basis(bad, ctx)


def test_groupoid_file_roundtrip(tmp_path):
    ctx = standard_contexts()["V4_pauli"]
    path = tmp_path / "ctx.json"
    save_context(ctx, path)
    gpd, cocycle = load_groupoid_file(path)
    assert set(gpd.elements) == set(ctx.groupoid.elements)
    assert cocycle.values == ctx.cocycle.values


def test_tolerance_must_be_positive():
    assert run("validate", FIXDIR / "r2.json", "--tol", 0) == 2
