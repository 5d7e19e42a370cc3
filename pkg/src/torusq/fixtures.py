"""Built-in matrix fixtures and JSON loading helpers."""

from __future__ import annotations

import json
from importlib import resources

from .errors import InputError
from .rational import IntSymplectic, ObservableSpec

FIXTURE_NAMES = ("catmap", "order4", "block_scar", "sp4_irreducible", "phi10")


def fixture_path(name: str):
    if name not in FIXTURE_NAMES:
        raise InputError(f"unknown fixture {name!r}; have {FIXTURE_NAMES}")
    return resources.files("torusq.fixtures_data").joinpath(name + ".json")


def load_fixture(name: str) -> dict:
    with fixture_path(name).open("r") as fh:
        return json.load(fh)


def fixture_matrix(name: str) -> IntSymplectic:
    return IntSymplectic.from_json_dict(load_fixture(name))


def fixture_isotropic_basis(name: str):
    data = load_fixture(name)
    if "isotropic_basis" not in data:
        raise InputError(f"fixture {name!r} carries no isotropic subspace")
    return [list(map(int, row)) for row in data["isotropic_basis"]]


def load_matrix_json(path: str) -> IntSymplectic:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read matrix JSON {path}: {e}") from e
    return IntSymplectic.from_json_dict(data)


def load_observable_json(path: str) -> ObservableSpec:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read observable JSON {path}: {e}") from e
    return ObservableSpec.from_json_list(data)
