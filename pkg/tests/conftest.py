"""Shared fixtures: matrices and cached Hecke bases (they are expensive)."""

import pytest

from torusq.fixtures import fixture_matrix
from torusq.statslab import hecke_basis_at


@pytest.fixture(scope="session")
def catmap():
    return fixture_matrix("catmap")


@pytest.fixture(scope="session")
def order4():
    return fixture_matrix("order4")


@pytest.fixture(scope="session")
def block_scar():
    return fixture_matrix("block_scar")


@pytest.fixture(scope="session")
def sp4():
    return fixture_matrix("sp4_irreducible")


@pytest.fixture(scope="session")
def phi10():
    return fixture_matrix("phi10")


_BASIS_CACHE = {}


@pytest.fixture(scope="session")
def basis_at():
    """basis_at(matrix, p) -> (orbits, HeckeBasis), memoized per session."""

    def fetch(A, p):
        key = (tuple(map(tuple, A.entries)), p)
        if key not in _BASIS_CACHE:
            _BASIS_CACHE[key] = hecke_basis_at(A, p)
        return _BASIS_CACHE[key]

    return fetch
