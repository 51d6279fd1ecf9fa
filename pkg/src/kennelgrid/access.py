"""Reachability over free cells: entrances, distance field, access criteria.

Movement is 4-adjacent between free cells, every step costing one. The
distance field holds, per cell, the length of the shortest walk from the
nearest shelter entrance, so accessibility of a cage is just a lookup at
its access cell.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .model import (
    FREE,
    Chromosome,
    CriteriaVector,
    LayoutError,
    OccupancyGrid,
    ShelterSpec,
    Wall,
    derive_grid_dims,
    door_span,
)
from .placement import footprint

UNREACHABLE = -1

Cell = tuple[int, int]


class NoEntranceError(LayoutError):
    """Every entrance cell is blocked (or the shelter has no doors)."""


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Per-cell shortest distance to the nearest entrance, in path edges.

    Non-free cells and free cells cut off from every entrance hold
    UNREACHABLE.
    """

    dist: np.ndarray  # int32, shape (x, y)

    @property
    def dims(self) -> tuple[int, int]:
        return self.dist.shape  # type: ignore[return-value]

    def at(self, cell: Cell) -> int:
        x, y = cell
        if 0 <= x < self.dist.shape[0] and 0 <= y < self.dist.shape[1]:
            return int(self.dist[x, y])
        return UNREACHABLE


@lru_cache(maxsize=256)
def entrance_cells(spec: ShelterSpec) -> frozenset[Cell]:
    """Interior cells adjacent to each door's span on its wall."""
    dims = derive_grid_dims(spec)
    cells: set[Cell] = set()
    for door in spec.doors:
        a, b = door_span(spec, door)
        if door.wall.horizontal:
            a, b = max(0, a), min(dims[0], b)
            row = 0 if door.wall is Wall.SOUTH else dims[1] - 1
            cells.update((c, row) for c in range(a, b))
        else:
            a, b = max(0, a), min(dims[1], b)
            col = 0 if door.wall is Wall.WEST else dims[0] - 1
            cells.update((col, c) for c in range(a, b))
    return frozenset(cells)


def unreachable_field(dims: tuple[int, int]) -> DistanceField:
    """Field where nothing is reachable (degenerate layouts)."""
    dist = np.full(dims, UNREACHABLE, dtype=np.int32)
    dist.setflags(write=False)
    return DistanceField(dist)


def _passable_mask(cells: np.ndarray, dilation: int) -> np.ndarray:
    """Free cells, optionally shrunk by a square dilation of the blocked set.

    With ``dilation`` > 0 a free cell also needs every cell within that
    Chebyshev radius to be free, modeling walkers that keep a margin from
    obstacles.
    """
    passable = cells == FREE
    if dilation <= 0:
        return passable
    blocked = ~passable
    x, y = cells.shape
    grown = np.zeros_like(blocked)
    for dx in range(-dilation, dilation + 1):
        for dy in range(-dilation, dilation + 1):
            sx0, sx1 = max(0, dx), min(x, x + dx)
            tx0, tx1 = max(0, -dx), min(x, x - dx)
            sy0, sy1 = max(0, dy), min(y, y + dy)
            ty0, ty1 = max(0, -dy), min(y, y - dy)
            grown[tx0:tx1, ty0:ty1] |= blocked[sx0:sx1, sy0:sy1]
    # Cells hugging the boundary also count as within range of the walls.
    grown[:dilation, :] = True
    grown[-dilation:, :] = True
    grown[:, :dilation] = True
    grown[:, -dilation:] = True
    return passable & ~grown


def build_distance_field(
    grid: OccupancyGrid, entrances: Iterable[Cell], dilation: int = 0
) -> DistanceField:
    """Multi-source breadth-first distances over free cells.

    Entrance cells that are not free (after optional obstacle dilation) are
    dropped from the source set; raises NoEntranceError when no source
    remains.
    """
    cells = grid.cells
    x, y = cells.shape
    passable = _passable_mask(cells, dilation)
    sources = [
        (cx, cy)
        for cx, cy in sorted(entrances)
        if 0 <= cx < x and 0 <= cy < y and passable[cx, cy]
    ]
    if not sources:
        raise NoEntranceError("no free entrance cell")
    dist = np.full((x, y), UNREACHABLE, dtype=np.int32)
    queue: deque[Cell] = deque()
    for cx, cy in sources:
        dist[cx, cy] = 0
        queue.append((cx, cy))
    while queue:
        cx, cy = queue.popleft()
        d = dist[cx, cy] + 1
        for nx, ny in ((cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1)):
            if 0 <= nx < x and 0 <= ny < y and passable[nx, ny] and dist[nx, ny] < 0:
                dist[nx, ny] = d
                queue.append((nx, ny))
    dist.setflags(write=False)
    return DistanceField(dist)


def access_metrics(
    chrom: Chromosome, field: DistanceField, spec: ShelterSpec
) -> CriteriaVector:
    """Accessibility columns of the criteria vector (cf stays zero here).

    A cage's distance is the field value at its access cell; cages whose
    access cell is unreachable, covered by another body, or off-grid count
    as inaccessible. With no accessible cage the path criteria take the
    sentinel x*y.
    """
    distances: list[int] = []
    inaccessible = 0
    for placement in chrom.placements:
        d = field.at(footprint(placement, spec).access)
        if d == UNREACHABLE:
            inaccessible += 1
        else:
            distances.append(d)
    x, y = derive_grid_dims(spec)
    if distances:
        lsp = max(distances)
        asp = sum(distances) / len(distances)
    else:
        lsp = x * y
        asp = float(x * y)
    return CriteriaVector(
        ac=len(distances), lsp=lsp, asp=asp, cf=0.0, ic=inaccessible
    )
