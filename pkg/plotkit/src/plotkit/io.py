"""CSV loading with strict schema validation."""

from __future__ import annotations

import csv


class SchemaMismatch(Exception):
    """CSV header does not match the documented schema."""


class MissingColumn(SchemaMismatch):
    pass


class EmptyData(Exception):
    """CSV parsed fine but holds no rows to plot."""


SCHEMAS = {
    "dist": ["p", "k_class", "sample_index", "w_re", "w_im"],
    "variance": ["p", "d_f", "S2", "S2_times_p_df", "V_f"],
    "scar": ["p", "n", "class", "re", "im", "scaled"],
    "ks": ["q", "orbit_type", "nu_repr", "chi_index", "re", "im", "normalized"],
}

_FLOAT_COLUMNS = {"w_re", "w_im", "S2", "S2_times_p_df", "V_f", "re", "im",
                  "scaled", "normalized", "density_running"}
_INT_COLUMNS = {"p", "k_class", "sample_index", "d_f", "q", "nu_repr",
                "chi_index", "k"}


def load_rows(path: str, kind: str) -> list[dict]:
    if kind not in SCHEMAS:
        raise SchemaMismatch(f"unknown plot kind {kind!r}; have {sorted(SCHEMAS)}")
    expected = SCHEMAS[kind]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: no header row") from None
        missing = [c for c in expected if c not in header]
        if missing:
            raise MissingColumn(f"{path}: missing columns {missing} for kind {kind!r}")
        extra = [c for c in header if c not in expected]
        if extra:
            raise SchemaMismatch(f"{path}: unexpected columns {extra} for kind {kind!r}")
        idx = {c: header.index(c) for c in expected}
        rows = []
        for raw in reader:
            row = {}
            for c in expected:
                v = raw[idx[c]]
                if c in _INT_COLUMNS:
                    row[c] = int(v)
                elif c in _FLOAT_COLUMNS:
                    row[c] = float(v)
                else:
                    row[c] = v
            rows.append(row)
    if not rows:
        raise EmptyData(f"{path}: no data rows")
    return rows
