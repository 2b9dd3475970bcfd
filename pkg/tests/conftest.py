import pytest
from hypothesis import HealthCheck, settings

from tileshift.puzzleio import load_bundled

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def chroma2():
    return load_bundled("chroma2")


@pytest.fixture(scope="session")
def chroma3():
    return load_bundled("chroma3")


@pytest.fixture(scope="session")
def chroma336():
    return load_bundled("chroma3-3-6")


@pytest.fixture(scope="session")
def cross():
    return load_bundled("cross-1-4-4")


@pytest.fixture(scope="session")
def grid5_hole():
    return load_bundled("grid5-hole")
