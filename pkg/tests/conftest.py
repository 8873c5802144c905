import pathlib

import pytest

import dimertools
from dimertools.surface import dualize, load_file

FIXTURES = pathlib.Path(dimertools.__file__).parent / "fixtures"

ALL_FIXTURES = sorted(p.stem for p in FIXTURES.glob("*.dimer"))
# fixtures passing the geometric consistency check
CONSISTENT = ("hexagonal", "conifold", "memeg")
# fixtures with at least one perfect matching
NONDEGENERATE = ("hexagonal", "conifold", "nonmin_conifold", "memeg",
                 "examplestp", "xyloops")


def fixture_path(name: str) -> pathlib.Path:
    return FIXTURES / f"{name}.dimer"


@pytest.fixture
def load_fixture():
    def _load(name):
        return load_file(fixture_path(name))
    return _load


@pytest.fixture
def load_quiver():
    def _load(name):
        g = load_file(fixture_path(name))
        return g, dualize(g)
    return _load
