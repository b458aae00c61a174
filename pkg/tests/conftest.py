import pytest

from hydrogen_ladder import AtomConfig


@pytest.fixture
def au():
    return AtomConfig.atomic_units()


@pytest.fixture
def paper():
    return AtomConfig(constants_mode="paper")
