"""plotkit: all four kinds render, deterministically, with strict schemas."""

import pathlib

import numpy as np
import pytest

from plotkit.io import EmptyData, MissingColumn, SchemaMismatch, load_rows
from plotkit.render import product_semicircle_density, render, semicircle_cdf

SAMPLES = pathlib.Path(__file__).resolve().parent.parent / "sample_data"

KIND_FILES = {
    "dist": "dist.csv",
    "variance": "variance.csv",
    "scar": "scars.csv",
    "ks": "expsums.csv",
}


@pytest.mark.parametrize("kind", sorted(KIND_FILES))
def test_render_all_kinds(kind, tmp_path):
    out = tmp_path / f"{kind}.png"
    render(kind, str(SAMPLES / KIND_FILES[kind]), str(out))
    assert out.exists() and out.stat().st_size > 2000


@pytest.mark.parametrize("kind", sorted(KIND_FILES))
def test_render_byte_identical(kind, tmp_path):
    out1 = tmp_path / "a.png"
    out2 = tmp_path / "b.png"
    render(kind, str(SAMPLES / KIND_FILES[kind]), str(out1))
    render(kind, str(SAMPLES / KIND_FILES[kind]), str(out2))
    assert out1.read_bytes() == out2.read_bytes()


def test_schema_mismatch(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(MissingColumn):
        load_rows(str(bad), "variance")
    # extra columns are also rejected
    extra = tmp_path / "extra.csv"
    extra.write_text("p,d_f,S2,S2_times_p_df,V_f,junk\n13,1,0.1,1.3,2.0,0\n")
    with pytest.raises(SchemaMismatch):
        load_rows(str(extra), "variance")
    with pytest.raises(SchemaMismatch):
        load_rows(str(SAMPLES / "variance.csv"), "nonsense")


def test_empty_csv_is_not_schema_mismatch(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("p,d_f,S2,S2_times_p_df,V_f\n")
    with pytest.raises(EmptyData):
        load_rows(str(empty), "variance")
    headerless = tmp_path / "no_header.csv"
    headerless.write_text("")
    with pytest.raises(SchemaMismatch):
        load_rows(str(headerless), "variance")


def test_cli_roundtrip(tmp_path, capsys):
    from plotkit.cli import main

    out = tmp_path / "fig.png"
    rc = main(["render", "--kind", "variance",
               "--in", str(SAMPLES / "variance.csv"), "--out", str(out)])
    assert rc == 0 and out.exists()
    rc = main(["render", "--kind", "variance",
               "--in", str(tmp_path / "missing.csv"), "--out", str(out)])
    assert rc == 2
    capsys.readouterr()


def test_product_density_normalizes():
    # overlay densities integrate to ~1 and match the semicircle at k = 1
    x1, d1 = product_semicircle_density(1)
    assert abs(np.trapezoid(d1, x1) - 1) < 1e-3
    x2, d2 = product_semicircle_density(2)
    assert abs(np.trapezoid(d2, x2) - 1) < 1e-2
    assert d2.min() >= -1e-9
    # supports: |product of two| <= 4
    assert np.abs(x2).max() <= 4.0 + 1e-9
    x3, d3 = product_semicircle_density(3)
    assert abs(np.trapezoid(d3, x3) - 1) < 1e-2


def test_semicircle_cdf_limits():
    assert abs(semicircle_cdf(np.array([-2.0]))[0]) < 1e-12
    assert abs(semicircle_cdf(np.array([2.0]))[0] - 1.0) < 1e-12
