import json

import pytest

from ogff import cli
from ogff import designs as dz
from ogff import mubs as mb


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_text(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "56", "--l", "3", "--m", "7", "--field", "complex")
    assert code == 0
    rec = dict(line.split(" ", 1) for line in out.strip().splitlines())
    assert float(rec["orthoplex"]) == pytest.approx(9 / 7)
    assert rec["eligible"] == "true"
    assert rec["simplex_exact"] == "69/55"


def test_bounds_json_at_simplex_point(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "7", "--l", "3", "--m", "7", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["simplex"] == 1.0 and rec["orthoplex"] is None and rec["regime"] == "simplex"


def test_assemble_then_certify(capsys, monkeypatch):
    code, packed, _ = run(capsys, "pack", "assemble", "--mubs", "gen:complex:4", "--design", "gen:affine:2:1")
    assert code == 0
    code, out, err = run(capsys, "pack", "certify", stdin=packed, monkeypatch=monkeypatch)
    assert code == 0
    assert json.loads(out)["classification"] == "tight-maximal-OGFF"
    assert err.splitlines()[0].startswith("field,m,l,n")


def test_certify_writes_prefix_files(capsys, tmp_path):
    src = tmp_path / "fano.json"
    assert run(capsys, "recipe", "etff", "--design", "gen:hadamard:2", "--out", str(src))[0] == 0
    code, _, _ = run(capsys, "pack", "certify", str(src), "--out", str(tmp_path / "cert"), "--expect", "ETFF")
    assert code == 0
    assert json.loads((tmp_path / "cert.json").read_text())["classification"] == "ETFF"
    assert (tmp_path / "cert.csv").read_text().count("\n") == 2


def test_certify_expect_mismatch_exits_2(capsys, tmp_path):
    src = tmp_path / "c4.json"
    run(capsys, "pack", "assemble", "--mubs", "gen:complex:4", "--design", "gen:affine:2:1", "-o", str(src))
    code, _, err = run(capsys, "pack", "certify", str(src), "--expect", "ETFF")
    assert code == 2 and "expected ETFF" in err


def test_false_ogff_claim_exits_2(capsys, tmp_path):
    from ogff import recipe as rc
    p = rc.assemble_ogff(mb.gen_complex_mubs(4), dz.gen_affine(2, 1), bases=[0, 1], override_cardinality=True)
    path = tmp_path / "claim.json"
    path.write_text(p.with_provenance(claim="OGFF").to_json())
    code, _, err = run(capsys, "pack", "certify", str(path))
    assert code == 2 and "claimed OGFF" in err


def test_design_validate_not_a_one_design(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"m": 4, "blocks": [[1, 2], [1, 3]]}))
    code, _, err = run(capsys, "design", "validate", str(path))
    assert code == 2 and "not a 1-design" in err


def test_design_gen_and_validate_round_trip(capsys, tmp_path):
    path = tmp_path / "ag.json"
    assert run(capsys, "design", "gen", "affine", "2", "2", "-o", str(path))[0] == 0
    assert dz.BlockDesign.from_json(path.read_text()) == dz.gen_affine(2, 2)
    code, out, _ = run(capsys, "design", "validate", str(path))
    rep = json.loads(out)
    assert code == 0 and rep["affine"] and rep["cross_class_intersection"] == 2


def test_mubs_commands(capsys, tmp_path):
    path = tmp_path / "c5.json"
    assert run(capsys, "mubs", "gen", "--m", "5", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "mubs", "verify", str(path))
    assert code == 0 and json.loads(out)["unbiased"]
    code, out, _ = run(capsys, "mubs", "import", str(path))
    assert code == 0 and mb.MubFamily.from_json(out) == mb.gen_complex_mubs(5)
    data = json.loads(path.read_text())
    data["bases"][1][0][0][0] += 1e-3
    path.write_text(json.dumps(data))
    assert run(capsys, "mubs", "verify", str(path))[0] == 2
    code, _, err = run(capsys, "mubs", "import", str(path))
    assert code == 2 and "not mutually unbiased" in err


def test_hadamard_commands(capsys, tmp_path):
    path = tmp_path / "h.json"
    assert run(capsys, "hadamard", "gen", "--regular", "1", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "hadamard", "check", str(path))
    assert code == 0 and json.loads(out)["regular"]
    path.write_text("[[1, 1], [1, 1]]")
    assert run(capsys, "hadamard", "check", str(path))[0] == 2
    assert run(capsys, "hadamard", "gen")[0] == 1


def test_complement_and_embed(capsys, tmp_path):
    src = tmp_path / "c7.json"
    run(capsys, "pack", "assemble", "--mubs", "gen:complex:7", "--design", "gen:hadamard:2", "-o", str(src))
    comp = tmp_path / "comp.json"
    assert run(capsys, "pack", "complement", str(src), "-o", str(comp))[0] == 0
    code, out, _ = run(capsys, "pack", "certify", str(comp))
    cert = json.loads(out)
    assert cert["l"] == 4 and cert["coherence"] == pytest.approx(16 / 7)
    code, out, _ = run(capsys, "pack", "embed", str(src))
    emb = json.loads(out)
    assert code == 0 and emb["dim"] == 48 and len(emb["vectors"]) == 56


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog", "--max-m", "8")
    rows = json.loads(out)
    assert code == 0 and any(r["family"] == "hadamard" and r["m"] == 7 for r in rows)
    code, out, _ = run(capsys, "recipe", "catalog", "--max-m", "8", "--format", "csv")
    assert out.splitlines()[0].split(",")[0] == "family"


def test_usage_errors_exit_1(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1 and "usage:" in err
    assert run(capsys, "bounds", "--n", "5")[0] == 1
    assert run(capsys, "pack", "certify", "/no/such/file.json")[0] == 1
    assert run(capsys, "--tol", "-1", "bounds", "--n", "5", "--l", "1", "--m", "3")[0] == 1


def test_parse_error_names_field(capsys, tmp_path):
    path = tmp_path / "d.json"
    path.write_text('{"m": "seven", "blocks": []}')
    code, _, err = run(capsys, "design", "validate", str(path))
    assert code == 1 and "m" in err


def test_unsupported_generator_exits_1(capsys):
    assert run(capsys, "pack", "assemble", "--mubs", "gen:real:16", "--design", "gen:affine:2:3")[0] == 1


def test_tolerance_from_environment(capsys, monkeypatch, tmp_path):
    src = tmp_path / "c4.json"
    run(capsys, "pack", "assemble", "--mubs", "gen:complex:4", "--design", "gen:affine:2:1", "-o", str(src))
    monkeypatch.setenv(cli.TOL_ENV, "1e-6")
    code, out, _ = run(capsys, "pack", "certify", str(src))
    assert code == 0 and json.loads(out)["tolerance"] == 1e-6
    monkeypatch.setenv(cli.TOL_ENV, "lots")
    assert run(capsys, "pack", "certify", str(src))[0] == 1


def test_outputs_are_deterministic(capsys):
    argv = ("pack", "assemble", "--mubs", "gen:complex:8", "--design", "gen:affine:2:2")
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
