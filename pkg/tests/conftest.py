import numpy as np
import pytest

from kennelgrid import CageSpec, DoorSpec, ShelterSpec, Wall


@pytest.fixture
def demo_spec() -> ShelterSpec:
    """Small cat shelter: 20x25 cells at half-meter resolution, three doors."""
    return ShelterSpec(
        length_m=10.0,
        width_m=12.5,
        resolution_m=0.5,
        cage=CageSpec(length_m=1.5, width_m=0.75, clearance_m=2.5),
        requested_cages=20,
        doors=(
            DoorSpec(Wall.SOUTH, 2.0, 1.0),
            DoorSpec(Wall.SOUTH, 7.0, 1.0),
            DoorSpec(Wall.NORTH, 4.5, 1.0),
        ),
    )


@pytest.fixture
def square_spec() -> ShelterSpec:
    """Obstacle-free 40x40-cell square shelter with a single known cage model."""
    return ShelterSpec(
        length_m=20.0,
        width_m=20.0,
        resolution_m=0.5,
        cage=CageSpec(length_m=1.5, width_m=0.75, clearance_m=2.5),
        requested_cages=1,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
