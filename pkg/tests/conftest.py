import pytest

from pingpong.catalog import build_generators, builtin_catalog, detect_power_structure
from pingpong.certify import verify_case


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def gens_by_id(catalog):
    return {case.id: build_generators(case) for case in catalog}


@pytest.fixture(scope="session")
def power_by_id(catalog, gens_by_id):
    return {case.id: detect_power_structure(gens_by_id[case.id]) for case in catalog}


@pytest.fixture(scope="session")
def verdicts(catalog):
    return {case.id: verify_case(case) for case in catalog}
