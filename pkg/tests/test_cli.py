import json
import subprocess
import sys

from l1proj.cli import main, run


def fx(fixtures_dir, name):
    return str(fixtures_dir / name)


def test_verify_fixture_passes(fixtures_dir):
    code, text, _ = run(["verify", "--projection", fx(fixtures_dir, "s3_projection.json")])
    rep = json.loads(text)
    assert code == 0 and rep["passed"]
    assert rep["result"]["idempotency_defect"] < 1e-12
    assert rep["version"] and len(rep["group_spec_hash"]) == 64
    assert rep["tolerances"]["projection"] == 1e-12


def test_verify_corrupted_fixture_fails(fixtures_dir):
    code, text, _ = run(["verify", "--projection", fx(fixtures_dir, "s3_projection_corrupted.json")])
    assert code == 2 and not json.loads(text)["passed"]


def test_example_2_2_command():
    code, text, _ = run(["example-2-2"])
    res = json.loads(text)["result"]
    assert code == 0
    assert res["minimal"] and not res["strongly_minimal"]
    singles = [m for m in res["members"] if m["chi_set"] in ("{(0)}", "{(1)}")]
    assert all(m["witness"] == "delta(0,1)" for m in singles)


def test_input_errors(fixtures_dir, tmp_path):
    code, text, _ = run(["verify", "--projection", str(tmp_path / "missing.json")])
    assert code == 1 and "missing.json" in text
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": {"kind": "su2"}, "blocks": [{"irrep": "D0"}]}))
    code, text, _ = run(["verify", "--projection", str(bad)])
    assert code == 1 and "$.blocks[0]" in text
    code, text, _ = run(["catalog", "--group", fx(fixtures_dir, "s3.json"), "--tol", "-1"])
    assert code == 1 and "tol" in text


def test_build_then_verify_roundtrip(fixtures_dir, tmp_path):
    code, text, _ = run(["build-projection", "--group", fx(fixtures_dir, "s4.json"), "--parts", "std:2,rho2:1",
                         "--seed", "5"])
    assert code == 0
    doc = json.loads(text)["result"]["projection"]
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    for cmd in ("verify", "decompose", "support"):
        code, _, _ = run([cmd, "--projection", str(path)])
        assert code == 0, cmd
    code, text, _ = run(["minimality", "--projection", str(path), "--probes", "8"])
    assert code == 0 and json.loads(text)["result"]["strongly_minimal"] is False


def test_build_rejects_bad_parts(fixtures_dir):
    code, text, _ = run(["build-projection", "--group", fx(fixtures_dir, "s3.json"), "--parts", "std:3"])
    assert code == 1
    code, text, _ = run(["build-projection", "--group", fx(fixtures_dir, "s3.json"), "--parts", "foo:1"])
    assert code == 1 and "foo" in text


def test_catalog_table_format(fixtures_dir):
    code, text, _ = run(["catalog", "--group", fx(fixtures_dir, "s4.json"), "--format", "table"])
    assert code == 0
    assert "result.irreps[3].label" in text and "std" in text


def test_catalog_su2_with_node_override(fixtures_dir):
    code, text, _ = run(["catalog", "--group", fx(fixtures_dir, "su2.json")])
    assert code == 0 and json.loads(text)["result"]["nodes"] == 8192
    # 8 gamma nodes alias the spin-2 coefficients: reported as a failed check, not a crash
    code, text, _ = run(["catalog", "--group", fx(fixtures_dir, "su2.json"), "--nodes", "8,16,8"])
    rep = json.loads(text)
    assert code == 2 and rep["result"]["nodes"] == 1024


def test_minimality_on_abelian_group(fixtures_dir):
    code, text, _ = run(["minimality", "--group", fx(fixtures_dir, "z2xz.json")])
    assert code == 0 and json.loads(text)["result"]["projection_count"] == 4


def test_homomorphism_command(fixtures_dir):
    code, text, _ = run(["homomorphism", "--spec", fx(fixtures_dir, "hom_z4_to_s3.json"), "--probes", "10"])
    res = json.loads(text)["result"]
    assert code == 0
    assert res["orientation"] == "transpose"
    assert res["star_homomorphism"]["unit_defect"] == 0.0


def test_out_file_and_determinism(fixtures_dir, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["decompose", "--projection", fx(fixtures_dir, "s4_projection.json"), "--seed", "11"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_script_subprocess(fixtures_dir):
    out = subprocess.run([sys.executable, "-m", "l1proj.cli", "verify", "--projection",
                          fx(fixtures_dir, "s3_projection_corrupted.json")], capture_output=True, text=True)
    assert out.returncode == 2
    assert json.loads(out.stdout)["command"] == "verify"
