"""Line-of-sight scoring between cage access points.

Two cages confront each other when their orientations differ and the
straight segment joining their access-cell centers crosses no cage body and
no obstacle. Blocking is geometric: a cell blocks exactly when the segment
touches its closed square (supercover semantics), including corner grazes,
so the result agrees with exact continuous intersection tests. The two
access cells themselves never block, and cells outside the grid block
(boundary walls are implicit).
"""

from __future__ import annotations

import math
from typing import Callable

from .model import Chromosome, FREE, OccupancyGrid, Placement, ShelterSpec
from .placement import footprint

Cell = tuple[int, int]


def _walk(a: Cell, b: Cell, visit: Callable[[int, int], bool]) -> None:
    """Visit every cell the closed segment between cell centers touches.

    Works on doubled integer coordinates so all boundary comparisons are
    exact; a crossing that hits a cell corner visits both side cells before
    stepping diagonally. ``visit`` returns True to stop early.
    """
    ax, ay = a
    bx, by = b
    if visit(ax, ay):
        return
    if (ax, ay) == (bx, by):
        return
    # Doubled coordinates: centers are odd, cell boundaries are even.
    x0, y0 = 2 * ax + 1, 2 * ay + 1
    dx, dy = 2 * bx + 1 - x0, 2 * by + 1 - y0
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1
    adx, ady = abs(dx), abs(dy)
    cx, cy = ax, ay
    while (cx, cy) != (bx, by):
        # Distance (in doubled units) from the segment start to the next
        # cell boundary along each axis, compared exactly via cross products.
        ux = sx * ((2 * cx + 1 + sx) - x0)
        uy = sy * ((2 * cy + 1 + sy) - y0)
        tx = ux * ady
        ty = uy * adx
        if ady == 0 or (adx != 0 and tx < ty):
            cx += sx
        elif adx == 0 or tx > ty:
            cy += sy
        else:
            # Exactly through a corner: the segment touches both side cells.
            if visit(cx + sx, cy) or visit(cx, cy + sy):
                return
            cx += sx
            cy += sy
        if visit(cx, cy):
            return


def supercover_cells(a: Cell, b: Cell) -> list[Cell]:
    """All cells the closed segment between two cell centers touches."""
    out: list[Cell] = []

    def collect(x: int, y: int) -> bool:
        out.append((x, y))
        return False

    _walk(a, b, collect)
    return out


def _straight_clear(
    blocked: list[list[bool]], dims: tuple[int, int], a: Cell, b: Cell
) -> bool:
    """Axis-aligned segment: scan the cells strictly between the endpoints."""
    x_max, y_max = dims
    ax, ay = a
    bx, by = b
    if ax == bx:
        lo, hi = (ay, by) if ay < by else (by, ay)
        if hi - lo <= 1:
            return True
        if not 0 <= ax < x_max:
            return False
        column = blocked[ax]
        for y in range(lo + 1, hi):
            if not 0 <= y < y_max or column[y]:
                return False
        return True
    lo, hi = (ax, bx) if ax < bx else (bx, ax)
    if hi - lo <= 1:
        return True
    if not 0 <= ay < y_max:
        return False
    for x in range(lo + 1, hi):
        if not 0 <= x < x_max or blocked[x][ay]:
            return False
    return True


def _diagonal_clear(
    blocked: list[list[bool]], dims: tuple[int, int], a: Cell, b: Cell
) -> bool:
    """Supercover walk with the blocking test inlined (both deltas nonzero)."""
    x_max, y_max = dims
    ax, ay = a
    bx, by = b
    x0, y0 = 2 * ax + 1, 2 * ay + 1
    dx, dy = 2 * bx + 1 - x0, 2 * by + 1 - y0
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1
    adx, ady = abs(dx), abs(dy)
    cx, cy = ax, ay
    while True:
        ux = sx * ((2 * cx + 1 + sx) - x0)
        uy = sy * ((2 * cy + 1 + sy) - y0)
        tx = ux * ady
        ty = uy * adx
        if tx < ty:
            cx += sx
        elif tx > ty:
            cy += sy
        else:
            # Corner graze: both side cells are touched by the segment.
            for px, py in ((cx + sx, cy), (cx, cy + sy)):
                if (px, py) != a and (px, py) != b:
                    if not (0 <= px < x_max and 0 <= py < y_max) or blocked[px][py]:
                        return False
            cx += sx
            cy += sy
        if cx == bx and cy == by:
            return True
        if not (0 <= cx < x_max and 0 <= cy < y_max) or blocked[cx][cy]:
            return False


def _segment_clear(
    blocked: list[list[bool]], dims: tuple[int, int], a: Cell, b: Cell
) -> bool:
    """True when no blocking cell lies on the segment (endpoints exempt)."""
    if a == b:
        return True
    if a[0] == b[0] or a[1] == b[1]:
        return _straight_clear(blocked, dims, a, b)
    return _diagonal_clear(blocked, dims, a, b)


def has_eye_contact(
    i: Placement, j: Placement, grid: OccupancyGrid, spec: ShelterSpec
) -> bool:
    """True when two differently oriented cages can see each other's door."""
    if i.orientation == j.orientation:
        return False
    a = footprint(i, spec).access
    b = footprint(j, spec).access
    blocked = (grid.cells != FREE).tolist()
    return _segment_clear(blocked, grid.dims, a, b)


def cf_score(chrom: Chromosome, grid: OccupancyGrid, spec: ShelterSpec) -> float:
    """Sum of inverse eye-contact distances over all ordered cage pairs.

    Distances are Euclidean between access-cell centers, in meters. The
    relation is symmetric, so the ordered-pair sum is twice the sum over
    unordered pairs. Pairs whose access cells coincide contribute nothing
    (there is no vector to measure).
    """
    placements = chrom.placements
    if len(placements) < 2:
        return 0.0
    points = [(footprint(p, spec).access, p.orientation) for p in placements]
    x_max, y_max = grid.dims
    blocked_grid = grid.cells != FREE
    blocked = blocked_grid.tolist()
    dims = grid.dims
    # Prefix counts make axis-aligned sight lines O(1); they are the common
    # and the longest (hence costliest to walk) case in packed layouts.
    col_cum = blocked_grid.cumsum(axis=1).tolist()
    row_cum = blocked_grid.cumsum(axis=0).tolist()
    r = spec.resolution_m
    total = 0.0
    for ii in range(len(points)):
        a, oa = points[ii]
        ax, ay = a
        a_in = 0 <= ax < x_max and 0 <= ay < y_max
        for jj in range(ii + 1, len(points)):
            b, ob = points[jj]
            if oa == ob or a == b:
                continue
            bx, by = b
            if a_in and 0 <= bx < x_max and 0 <= by < y_max:
                if ax == bx:
                    lo, hi = (ay, by) if ay < by else (by, ay)
                    count = col_cum[ax][hi - 1] - col_cum[ax][lo]
                    clear = count == 0
                elif ay == by:
                    lo, hi = (ax, bx) if ax < bx else (bx, ax)
                    count = row_cum[hi - 1][ay] - row_cum[lo][ay]
                    clear = count == 0
                else:
                    clear = _diagonal_clear(blocked, dims, a, b)
            else:
                clear = _segment_clear(blocked, dims, a, b)
            if clear:
                total += 2.0 / (r * math.hypot(bx - ax, by - ay))
    return total
