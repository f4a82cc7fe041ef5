"""
Pytest configuration and fixtures for group computations.
"""
import numpy as np
import pytest

from grouplens.config import Settings, get_settings
from grouplens.core.catalog import build_catalog, shipped_extensions, shipped_transfers
from grouplens.core.groups import (
    Group,
    Subgroup,
    derived_subgroup,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_symmetric,
    subgroup_closure,
    whole_group,
)


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """Settings are cached per process; tests that patch the environment need a fresh read."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def small_settings() -> Settings:
    """Settings with reduced sample sizes for the self-check."""
    return Settings(SAMPLE_COUNT=50, CONTEXT_COUNT=40, SEED=7)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def z2() -> Group:
    return make_cyclic(2)


@pytest.fixture
def z3() -> Group:
    return make_cyclic(3)


@pytest.fixture
def z4() -> Group:
    return make_cyclic(4)


@pytest.fixture
def z6() -> Group:
    return make_cyclic(6)


@pytest.fixture
def s3() -> Group:
    return make_symmetric(3)


@pytest.fixture
def s4() -> Group:
    return make_symmetric(4)


@pytest.fixture
def a4() -> Group:
    return make_alternating(4)


@pytest.fixture
def d4() -> Group:
    return make_dihedral(4)


@pytest.fixture
def a3(s3: Group) -> Subgroup:
    """The rotations {012, 120, 201} of S3."""
    return subgroup_closure(s3, [s3.element("120")])


@pytest.fixture
def v4(a4: Group) -> Subgroup:
    return derived_subgroup(a4, whole_group(a4))


@pytest.fixture(scope="session")
def catalog() -> dict[str, Group]:
    return build_catalog()


@pytest.fixture(scope="session")
def extensions():
    return {e.name: e for e in shipped_extensions()}


@pytest.fixture(scope="session")
def transfers():
    return {t.name: t for t in shipped_transfers()}
