"""Problem-instance and layout data types shared across the optimizer.

The shelter floor is discretized into square cells of side ``resolution_m``.
All placement, pathing and scoring logic runs on that grid. Coordinates are
cell indices with the origin at the shelter's south-west corner; x grows
east, y grows north. A cage is a rectangle whose door sits centered on one
short end, so its facing direction fully determines where the body, the
door clearance and the access cell lie relative to the anchor corner.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

# Cell states of an occupancy grid.
FREE = 0
CAGE_BODY = 1
OBSTACLE = 2

# Criterion column order used in every table and decision matrix.
CRITERIA_NAMES = ("AC", "LSP", "ASP", "CF", "IC")

_EPS = 1e-9


class LayoutError(Exception):
    """Base class for layout-domain errors."""


class OverlapError(LayoutError):
    """Two cage bodies (or a body and an obstacle) claim the same cell."""


class OutOfBoundsError(LayoutError):
    """A footprint (body or door clearance) extends outside the grid."""


class Orientation(Enum):
    """Direction a cage's door faces."""

    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> Orientation:
        return _OPPOSITE[self]

    @property
    def step(self) -> tuple[int, int]:
        """Unit grid step in the facing direction."""
        return _STEP[self]

    @property
    def vertical(self) -> bool:
        """True when the cage's length axis runs north-south."""
        return self in (Orientation.UP, Orientation.DOWN)


_OPPOSITE = {
    Orientation.UP: Orientation.DOWN,
    Orientation.DOWN: Orientation.UP,
    Orientation.LEFT: Orientation.RIGHT,
    Orientation.RIGHT: Orientation.LEFT,
}
_STEP = {
    Orientation.UP: (0, 1),
    Orientation.DOWN: (0, -1),
    Orientation.LEFT: (-1, 0),
    Orientation.RIGHT: (1, 0),
}

ORIENTATIONS = (Orientation.UP, Orientation.DOWN, Orientation.LEFT, Orientation.RIGHT)


class Wall(Enum):
    """Shelter wall a door sits on."""

    NORTH = "north"
    SOUTH = "south"
    EAST = "east"
    WEST = "west"

    @property
    def horizontal(self) -> bool:
        """True for the north/south walls (door offsets measured from west)."""
        return self in (Wall.NORTH, Wall.SOUTH)


@dataclass(frozen=True)
class DoorSpec:
    """A door in a shelter wall.

    ``offset_m`` is measured from the wall's west corner for the north and
    south walls, and from the south corner for the east and west walls.
    """

    wall: Wall
    offset_m: float
    width_m: float


@dataclass(frozen=True)
class CageSpec:
    """Cage dimensions in meters; the door is on one short end."""

    length_m: float
    width_m: float
    clearance_m: float  # required free depth in front of the door


@dataclass(frozen=True)
class ColumnSpec:
    """Axis-aligned rectangular obstacle, meters from the south-west corner."""

    x_m: float
    y_m: float
    length_m: float  # extent along x
    width_m: float  # extent along y


@dataclass(frozen=True)
class ShelterSpec:
    """One shelter: geometry, doors, obstacles, cage model and target count."""

    length_m: float
    width_m: float
    resolution_m: float
    cage: CageSpec
    requested_cages: int
    doors: tuple[DoorSpec, ...] = ()
    columns: tuple[ColumnSpec, ...] = ()


@dataclass(frozen=True)
class Placement:
    """One cage: lower-left body corner in cells plus facing direction."""

    x: int
    y: int
    orientation: Orientation


class IdSequence:
    """Run-scoped chromosome labels: a prefix plus a monotonic counter."""

    def __init__(self, prefix: str = "c") -> None:
        self._prefix = prefix
        self._counter = itertools.count(1)

    def __next__(self) -> str:
        return f"{self._prefix}{next(self._counter)}"


_FALLBACK_IDS = IdSequence("anon")


@dataclass(frozen=True)
class Chromosome:
    """A candidate layout: an ordered gene sequence of cage placements."""

    placements: tuple[Placement, ...] = ()
    id: str = ""


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """Cell matrix with values FREE, CAGE_BODY or OBSTACLE.

    The wrapped array is shaped (x, y) and must be treated as read-only.
    """

    cells: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return self.cells.shape  # type: ignore[return-value]


@dataclass(frozen=True)
class CriteriaVector:
    """One decision-matrix row: accessibility and confrontation criteria.

    ``lsp``/``asp`` are measured in unit-weight path edges (cells) and take
    the sentinel value x*y when no cage is accessible, which is strictly
    worse than any achievable path on the grid.
    """

    ac: int
    lsp: int
    asp: float
    cf: float
    ic: int

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.ac, self.lsp, self.asp, self.cf, self.ic)


def cell_count(extent_m: float, resolution_m: float) -> int:
    """Cells covered by an extent: ceil with a fuzz guard for float division."""
    return max(0, math.ceil(extent_m / resolution_m - _EPS))


def derive_grid_dims(spec: ShelterSpec) -> tuple[int, int]:
    """Grid dimensions (x, y) of the discretized shelter floor."""
    return (
        cell_count(spec.length_m, spec.resolution_m),
        cell_count(spec.width_m, spec.resolution_m),
    )


@lru_cache(maxsize=256)
def cage_cells(spec: ShelterSpec) -> tuple[int, int, int]:
    """Cage footprint in cells: (length, width, clearance depth)."""
    r = spec.resolution_m
    return (
        cell_count(spec.cage.length_m, r),
        cell_count(spec.cage.width_m, r),
        cell_count(spec.cage.clearance_m, r),
    )


def span_cells(lo_m: float, hi_m: float, resolution_m: float) -> tuple[int, int]:
    """Half-open cell range [a, b) covered by the meter interval (lo, hi)."""
    a = math.floor(lo_m / resolution_m + _EPS)
    b = math.ceil(hi_m / resolution_m - _EPS)
    return a, max(a, b)


def door_span(spec: ShelterSpec, door: DoorSpec) -> tuple[int, int]:
    """Half-open range of wall cells covered by a door, along its wall axis."""
    return span_cells(door.offset_m, door.offset_m + door.width_m, spec.resolution_m)


@lru_cache(maxsize=256)
def obstacle_grid(spec: ShelterSpec) -> np.ndarray:
    """Read-only grid template with the shelter's columns rasterized."""
    dims = derive_grid_dims(spec)
    cells = np.zeros(dims, dtype=np.uint8)
    for col in spec.columns:
        x0, x1 = span_cells(col.x_m, col.x_m + col.length_m, spec.resolution_m)
        y0, y1 = span_cells(col.y_m, col.y_m + col.width_m, spec.resolution_m)
        cells[max(0, x0) : x1, max(0, y0) : y1] = OBSTACLE
    cells.setflags(write=False)
    return cells


def stamp_body(cells: np.ndarray, placement: Placement, spec: ShelterSpec) -> None:
    """Mark a placement's body cells as CAGE_BODY in a writable grid."""
    x0, y0, x1, y1 = body_box(placement, spec)
    dims = cells.shape
    if x0 < 0 or y0 < 0 or x1 > dims[0] or y1 > dims[1]:
        raise OutOfBoundsError(f"body {(x0, y0, x1, y1)} outside grid {dims}")
    window = cells[x0:x1, y0:y1]
    if window.any():
        raise OverlapError(f"cage body at {(placement.x, placement.y)} collides")
    window[:] = CAGE_BODY


def body_box(placement: Placement, spec: ShelterSpec) -> tuple[int, int, int, int]:
    """Half-open cell box (x0, y0, x1, y1) of a placement's body."""
    c_len, c_wid, _ = cage_cells(spec)
    if placement.orientation.vertical:
        bw, bh = c_wid, c_len
    else:
        bw, bh = c_len, c_wid
    return (placement.x, placement.y, placement.x + bw, placement.y + bh)


def rasterize(chrom: Chromosome, spec: ShelterSpec) -> OccupancyGrid:
    """Render a chromosome onto the shelter grid.

    Columns become OBSTACLE, cage bodies become CAGE_BODY, everything else
    stays FREE. Clearance zones are not marked: they constrain placement,
    not movement. Raises OverlapError when two bodies (or a body and an
    obstacle) share a cell.
    """
    cells = obstacle_grid(spec).copy()
    for placement in chrom.placements:
        stamp_body(cells, placement, spec)
    cells.setflags(write=False)
    return OccupancyGrid(cells)
