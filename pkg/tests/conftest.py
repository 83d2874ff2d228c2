import pytest

from equidyn.polynomial import build_equivariant_map


@pytest.fixture(scope="session")
def maps():
    """Equivariant maps for k = 1..4, built once per session."""
    return {k: build_equivariant_map(k) for k in range(1, 5)}
