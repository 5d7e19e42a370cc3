"""CLI: commands, exit codes, schemas, reproducibility."""

import csv
import json

import pytest

from torusq.cli import main


def run(args):
    return main(args)


def test_analyze_aque_yes(capsys):
    assert run(["analyze", "order4"]) == 0
    out = capsys.readouterr().out
    assert "AQUE: yes" in out


def test_analyze_aque_no_with_witness(capsys):
    assert run(["analyze", "block_scar"]) == 0
    out = capsys.readouterr().out
    assert "AQUE: no, isotropic subspace dim 2" in out


def test_analyze_json_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert run(["analyze", "catmap", "--json", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["char_poly"] == [1, -4, 1]
    assert doc["aque"] is True
    capsys.readouterr()


def test_analyze_bad_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"d": 1, "entries": [[1, 1], [0, 2]]}))
    assert run(["analyze", str(bad)]) == 2
    assert run(["analyze", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_analyze_repeated_eigenvalues_exit_3(tmp_path, capsys):
    ident = tmp_path / "id.json"
    ident.write_text(json.dumps({"d": 1, "entries": [[1, 0], [0, 1]]}))
    assert run(["analyze", str(ident)]) == 3
    capsys.readouterr()


def test_egorov_ok_and_even_N(capsys):
    assert run(["egorov", "catmap", "--N", "9"]) == 0
    assert run(["egorov", "catmap", "--N", "8"]) == 3  # EvenN
    capsys.readouterr()


def test_hecke_multiplicity_output(capsys, tmp_path):
    base = str(tmp_path / "basis")
    assert run(["hecke", "catmap", "--p", "11", "--out", base]) == 0
    out = capsys.readouterr().out
    assert "1x2 + 9x1" in out
    doc = json.loads((tmp_path / "basis.json").read_text())
    assert len(doc["vectors"]) == 11
    import numpy as np

    vecs = np.load(base + ".npy")
    assert vecs.shape == (11, 11)


def test_matel_roundtrip(tmp_path, capsys):
    out = tmp_path / "matel.csv"
    assert run(["matel", "catmap", "--p", "7", "--n", "1,2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 7
    assert set(rows[0]) == {"p", "n", "index", "kind", "direct_re", "direct_im",
                            "formula_re", "formula_im"}
    capsys.readouterr()


def test_scars_csv_schema(tmp_path, capsys):
    out = tmp_path / "scars.csv"
    assert run(["scars", "block_scar", "--primes", "11", "--box", "1",
                "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert set(rows[0]) == {"p", "n", "class", "re", "im", "scaled"}
    classes = {r["class"] for r in rows}
    assert classes <= {"in_Z0", "in_complement", "generic"}
    capsys.readouterr()


def test_variance_csv_and_determinism(tmp_path, capsys):
    out1, out2 = tmp_path / "v1.csv", tmp_path / "v2.csv"
    assert run(["variance", "catmap", "--primes", "13,17", "--out", str(out1)]) == 0
    assert run(["variance", "catmap", "--primes", "13,17", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = list(csv.DictReader(out1.open()))
    assert set(rows[0]) == {"p", "d_f", "S2", "S2_times_p_df", "V_f"}
    assert rows[0]["V_f"] == "2.0"
    capsys.readouterr()


def test_variance_jobs_parallel_same_bytes(tmp_path, capsys):
    out1, out2 = tmp_path / "v1.csv", tmp_path / "v2.csv"
    assert run(["variance", "catmap", "--primes", "13,17,19", "--out", str(out1)]) == 0
    assert run(["variance", "catmap", "--primes", "13,17,19", "--out", str(out2),
                "--jobs", "2"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    capsys.readouterr()


def test_dist_and_classify_csv(tmp_path, capsys):
    dist = tmp_path / "dist.csv"
    primes = tmp_path / "primes.csv"
    assert run(["dist", "catmap", "--primes", "13,17", "--out", str(dist),
                "--classify", str(primes)]) == 0
    drows = list(csv.DictReader(dist.open()))
    assert set(drows[0]) == {"p", "k_class", "sample_index", "w_re", "w_im"}
    prows = list(csv.DictReader(primes.open()))
    assert set(prows[0]) == {"p", "k", "degree_pattern", "density_running"}
    capsys.readouterr()


def test_moments_csv(tmp_path, capsys):
    out = tmp_path / "moments.csv"
    assert run(["moments", "catmap", "--primes", "13", "--n", "1,0",
                "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    kinds = {r["kind"] for r in rows}
    assert kinds == {"second", "fourth"}
    capsys.readouterr()


def test_expsums_csv(tmp_path, capsys):
    out = tmp_path / "expsums.csv"
    assert run(["expsums", "--q", "5,7", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert set(rows[0]) == {"q", "orbit_type", "nu_repr", "chi_index", "re", "im",
                            "normalized"}
    assert {r["orbit_type"] for r in rows} == {"sym", "nonsym"}
    capsys.readouterr()


def test_config_file_applies(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"out": str(tmp_path / "from_config.csv")}))
    assert run(["--config", str(cfg), "variance", "catmap", "--primes", "13"]) == 0
    assert (tmp_path / "from_config.csv").exists()
    bad = tmp_path / "bad_cfg.json"
    bad.write_text(json.dumps({"unknown_key": 1}))
    assert run(["--config", str(bad), "variance", "catmap", "--primes", "13"]) == 2
    capsys.readouterr()


def test_matel_dimension_check(capsys):
    assert run(["matel", "catmap", "--p", "7", "--n", "1,2,3"]) == 2
    capsys.readouterr()
