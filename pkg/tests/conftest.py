from pathlib import Path

import pytest

from quivcover.exactlin import Field
from quivcover.textio import load

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "quivcover" / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.quiver"


@pytest.fixture
def load_fixture():
    def _load(name: str, p: int | None = None):
        return load(fixture_path(name), field_override=Field.prime(p) if p else None)
    return _load


@pytest.fixture(scope="session")
def e1_algebra():
    return load(fixture_path("e1-algebra")).presentation


@pytest.fixture(scope="session")
def e1_cover():
    return load(fixture_path("e1-cover")).presentation
