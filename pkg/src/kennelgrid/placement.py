"""Cage placement: footprints, feasibility, sampling strategies and counting.

A placement is feasible when its body sits on free cells, its door
clearance contains no body or obstacle, and no body cell covers the apron
in front of a shelter door. Clearance zones of different cages may overlap
each other; an aisle shared door-to-door is the normal case.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .model import (
    FREE,
    ORIENTATIONS,
    Chromosome,
    IdSequence,
    OccupancyGrid,
    Orientation,
    OutOfBoundsError,
    Placement,
    ShelterSpec,
    _FALLBACK_IDS,
    cage_cells,
    derive_grid_dims,
    door_span,
    obstacle_grid,
    stamp_body,
)

Box = tuple[int, int, int, int]  # half-open cell box (x0, y0, x1, y1)


class Strategy(Enum):
    """How the next cage is positioned relative to the existing layout."""

    TOTAL_RANDOMNESS = "total_randomness"
    CONFRONTATION = "confrontation"
    NEIGHBOURHOOD = "neighbourhood"
    BACK_TO_BACK = "back_to_back"
    ALIGNED = "aligned"


STRATEGIES = tuple(Strategy)


@dataclass(frozen=True)
class StrategyMix:
    """Sampling weights for the placement strategies (normalized before use)."""

    total_randomness: float = 1.0
    confrontation: float = 1.0
    neighbourhood: float = 1.0
    back_to_back: float = 1.0
    aligned: float = 1.0

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (
            self.total_randomness,
            self.confrontation,
            self.neighbourhood,
            self.back_to_back,
            self.aligned,
        )

    def validate(self) -> None:
        weights = self.as_tuple()
        if any(w < 0 for w in weights):
            raise ValueError(f"strategy weights must be non-negative, got {weights}")
        if sum(weights) <= 0:
            raise ValueError("at least one strategy weight must be positive")

    def probabilities(self) -> tuple[float, ...]:
        weights = self.as_tuple()
        total = sum(weights)
        return tuple(w / total for w in weights)


@dataclass(frozen=True)
class Footprint:
    """Cell geometry of one placement: body box, clearance box, access cell.

    The access cell is the clearance cell directly in front of the door's
    center column (ties broken toward the lower coordinate). With zero
    clearance depth the clearance box is empty and the access cell may fall
    outside the grid, in which case the cage can never be reached.
    """

    body: Box
    clearance: Box
    access: tuple[int, int]

    def body_cells(self) -> frozenset[tuple[int, int]]:
        return _box_cells(self.body)

    def clearance_cells(self) -> frozenset[tuple[int, int]]:
        return _box_cells(self.clearance)


def _box_cells(box: Box) -> frozenset[tuple[int, int]]:
    x0, y0, x1, y1 = box
    return frozenset((x, y) for x in range(x0, x1) for y in range(y0, y1))


def _boxes(placement: Placement, spec: ShelterSpec) -> Footprint:
    c_len, c_wid, c_clr = cage_cells(spec)
    x, y, o = placement.x, placement.y, placement.orientation
    center = (c_wid - 1) // 2
    if o is Orientation.UP:
        body = (x, y, x + c_wid, y + c_len)
        clearance = (x, y + c_len, x + c_wid, y + c_len + c_clr)
        access = (x + center, y + c_len)
    elif o is Orientation.DOWN:
        body = (x, y, x + c_wid, y + c_len)
        clearance = (x, y - c_clr, x + c_wid, y)
        access = (x + center, y - 1)
    elif o is Orientation.RIGHT:
        body = (x, y, x + c_len, y + c_wid)
        clearance = (x + c_len, y, x + c_len + c_clr, y + c_wid)
        access = (x + c_len, y + center)
    else:
        body = (x, y, x + c_len, y + c_wid)
        clearance = (x - c_clr, y, x, y + c_wid)
        access = (x - 1, y + center)
    return Footprint(body, clearance, access)


def _box_empty(box: Box) -> bool:
    return box[0] >= box[2] or box[1] >= box[3]


def _box_in_bounds(box: Box, dims: tuple[int, int]) -> bool:
    return box[0] >= 0 and box[1] >= 0 and box[2] <= dims[0] and box[3] <= dims[1]


def footprint(placement: Placement, spec: ShelterSpec) -> Footprint:
    """Cell footprint of a placement; the door must open into the shelter.

    Raises OutOfBoundsError when the body or a non-empty clearance extends
    outside the grid.
    """
    dims = derive_grid_dims(spec)
    fp = _boxes(placement, spec)
    if not _box_in_bounds(fp.body, dims):
        raise OutOfBoundsError(f"body {fp.body} outside grid {dims}")
    if not _box_empty(fp.clearance) and not _box_in_bounds(fp.clearance, dims):
        raise OutOfBoundsError(f"clearance {fp.clearance} outside grid {dims}")
    return fp


@lru_cache(maxsize=256)
def door_apron_mask(spec: ShelterSpec) -> np.ndarray:
    """Boolean grid of entrance aprons: cells in front of each shelter door,
    to the cage clearance depth, that no cage body may cover."""
    dims = derive_grid_dims(spec)
    _, _, c_clr = cage_cells(spec)
    mask = np.zeros(dims, dtype=bool)
    for door in spec.doors:
        a, b = door_span(spec, door)
        if door.wall.horizontal:
            a, b = max(0, a), min(dims[0], b)
            if door.wall.value == "south":
                mask[a:b, 0 : min(dims[1], c_clr)] = True
            else:
                mask[a:b, max(0, dims[1] - c_clr) :] = True
        else:
            a, b = max(0, a), min(dims[1], b)
            if door.wall.value == "west":
                mask[0 : min(dims[0], c_clr), a:b] = True
            else:
                mask[max(0, dims[0] - c_clr) :, a:b] = True
    mask.setflags(write=False)
    return mask


def _feasible(placement: Placement, cells: np.ndarray, spec: ShelterSpec) -> bool:
    dims = cells.shape
    fp = _boxes(placement, spec)
    if not _box_in_bounds(fp.body, dims):
        return False
    if not _box_empty(fp.clearance) and not _box_in_bounds(fp.clearance, dims):
        return False
    bx0, by0, bx1, by1 = fp.body
    if cells[bx0:bx1, by0:by1].any():
        return False
    if door_apron_mask(spec)[bx0:bx1, by0:by1].any():
        return False
    cx0, cy0, cx1, cy1 = fp.clearance
    if cx0 < cx1 and cy0 < cy1 and cells[cx0:cx1, cy0:cy1].any():
        return False
    return True


def is_feasible(placement: Placement, grid: OccupancyGrid, spec: ShelterSpec) -> bool:
    """True iff the placement can be added to the rasterized layout."""
    return _feasible(placement, grid.cells, spec)


def _window_open(blocked: np.ndarray, w: int, h: int) -> np.ndarray:
    """Boolean map over window origins: True where a w*h window is all clear."""
    x, y = blocked.shape
    if w > x or h > y or w <= 0 or h <= 0:
        return np.zeros((max(0, x - w + 1), max(0, y - h + 1)), dtype=bool)
    padded = np.zeros((x + 1, y + 1), dtype=np.int32)
    padded[1:, 1:] = blocked.astype(np.int32).cumsum(axis=0).cumsum(axis=1)
    counts = (
        padded[w:, h:]
        - padded[: x - w + 1, h:]
        - padded[w:, : y - h + 1]
        + padded[: x - w + 1, : y - h + 1]
    )
    return counts == 0


def _anchor_maps(
    cells: np.ndarray, spec: ShelterSpec
) -> list[tuple[Orientation, np.ndarray, int, int]]:
    """Per orientation: boolean map of feasible anchors plus its (x, y) offset."""
    c_len, c_wid, c_clr = cage_cells(spec)
    x, y = cells.shape
    body_blocked = (cells != FREE) | door_apron_mask(spec)
    clr_blocked = cells != FREE
    out: list[tuple[Orientation, np.ndarray, int, int]] = []
    for o in ORIENTATIONS:
        if o.vertical:
            bw, bh = c_wid, c_len
            cw, ch = c_wid, c_clr
        else:
            bw, bh = c_len, c_wid
            cw, ch = c_clr, c_wid
        body_open = _window_open(body_blocked, bw, bh)
        if body_open.size == 0:
            continue
        if c_clr == 0:
            out.append((o, body_open, 0, 0))
            continue
        clr_open = _window_open(clr_blocked, cw, ch)
        if clr_open.size == 0:
            continue
        if o is Orientation.UP:
            span = y - c_len - c_clr + 1
            if span <= 0:
                continue
            feasible = body_open[:, :span] & clr_open[:, c_len : c_len + span]
            out.append((o, feasible, 0, 0))
        elif o is Orientation.DOWN:
            span = y - c_len - c_clr + 1
            if span <= 0:
                continue
            feasible = body_open[:, c_clr : c_clr + span] & clr_open[:, :span]
            out.append((o, feasible, 0, c_clr))
        elif o is Orientation.RIGHT:
            span = x - c_len - c_clr + 1
            if span <= 0:
                continue
            feasible = body_open[:span, :] & clr_open[c_len : c_len + span, :]
            out.append((o, feasible, 0, 0))
        else:
            span = x - c_len - c_clr + 1
            if span <= 0:
                continue
            feasible = body_open[c_clr : c_clr + span, :] & clr_open[:span, :]
            out.append((o, feasible, c_clr, 0))
    return out


def place_total_random(
    grid: OccupancyGrid, spec: ShelterSpec, rng: np.random.Generator
) -> Optional[Placement]:
    """Sample uniformly from all feasible (x, y, orientation) triples."""
    maps = _anchor_maps(grid.cells, spec)
    counts = [int(m.sum()) for _, m, _, _ in maps]
    total = sum(counts)
    if total == 0:
        return None
    pick = int(rng.integers(total))
    for (o, feasible, ox, oy), n in zip(maps, counts):
        if pick >= n:
            pick -= n
            continue
        xs, ys = np.nonzero(feasible)
        return Placement(int(xs[pick]) + ox, int(ys[pick]) + oy, o)
    raise AssertionError("unreachable")


def _relative_candidates(
    anchor: Placement, spec: ShelterSpec, strategy: Strategy
) -> tuple[Placement, ...]:
    c_len, c_wid, c_clr = cage_cells(spec)
    x, y, o = anchor.x, anchor.y, anchor.orientation
    dx, dy = o.step
    if strategy is Strategy.CONFRONTATION:
        shift = c_len + c_clr
        return (Placement(x + dx * shift, y + dy * shift, o.opposite),)
    if strategy is Strategy.BACK_TO_BACK:
        return (Placement(x - dx * c_len, y - dy * c_len, o.opposite),)
    if strategy is Strategy.ALIGNED:
        shift = c_len + c_clr
        return (Placement(x - dx * shift, y - dy * shift, o),)
    if strategy is Strategy.NEIGHBOURHOOD:
        if o.vertical:
            return (Placement(x - c_wid, y, o), Placement(x + c_wid, y, o))
        return (Placement(x, y - c_wid, o), Placement(x, y + c_wid, o))
    raise ValueError(f"{strategy} is not a relative strategy")


def _place_relative(
    grid: OccupancyGrid,
    placed: Sequence[Placement],
    spec: ShelterSpec,
    rng: np.random.Generator,
    strategy: Strategy,
) -> Optional[Placement]:
    """Pick an anchor uniformly among cages with a feasible slot, then a slot.

    Scanning a random permutation and taking the first anchor that works is
    equivalent to sampling uniformly over the anchors that have a slot.
    """
    if not placed:
        return None
    cells = grid.cells
    for i in rng.permutation(len(placed)):
        candidates = [
            c
            for c in _relative_candidates(placed[i], spec, strategy)
            if _feasible(c, cells, spec)
        ]
        if candidates:
            if len(candidates) == 1:
                return candidates[0]
            return candidates[int(rng.integers(len(candidates)))]
    return None


def place_confrontation(
    grid: OccupancyGrid,
    placed: Sequence[Placement],
    spec: ShelterSpec,
    rng: np.random.Generator,
) -> Optional[Placement]:
    """Door-to-door across the anchor's clearance aisle, opposite orientation."""
    return _place_relative(grid, placed, spec, rng, Strategy.CONFRONTATION)


def place_neighbourhood(
    grid: OccupancyGrid,
    placed: Sequence[Placement],
    spec: ShelterSpec,
    rng: np.random.Generator,
) -> Optional[Placement]:
    """Laterally adjacent to the anchor, sharing a body edge, same orientation."""
    return _place_relative(grid, placed, spec, rng, Strategy.NEIGHBOURHOOD)


def place_back_to_back(
    grid: OccupancyGrid,
    placed: Sequence[Placement],
    spec: ShelterSpec,
    rng: np.random.Generator,
) -> Optional[Placement]:
    """Rear wall abutting the anchor's rear wall, opposite orientation."""
    return _place_relative(grid, placed, spec, rng, Strategy.BACK_TO_BACK)


def place_aligned(
    grid: OccupancyGrid,
    placed: Sequence[Placement],
    spec: ShelterSpec,
    rng: np.random.Generator,
) -> Optional[Placement]:
    """Behind the anchor with the same orientation, own clearance in between."""
    return _place_relative(grid, placed, spec, rng, Strategy.ALIGNED)


def _sample_strategy(probs: tuple[float, ...], rng: np.random.Generator) -> Strategy:
    u = rng.random()
    acc = 0.0
    for strategy, p in zip(STRATEGIES, probs):
        acc += p
        if u < acc:
            return strategy
    return STRATEGIES[-1]


def fill_layout(
    partial: Chromosome,
    spec: ShelterSpec,
    mix: StrategyMix,
    rng: np.random.Generator,
    max_attempts: int = 200,
    ids: IdSequence | None = None,
) -> Chromosome:
    """Top a layout up toward the requested cage count.

    Strategies are sampled by mix weight; relative strategies fall back to
    total randomness while the layout is empty. Stops after ``max_attempts``
    consecutive failed attempts, or as soon as no feasible placement exists
    anywhere, so a shorter-than-requested chromosome is a legal outcome.
    """
    mix.validate()
    cells = obstacle_grid(spec).copy()
    placed = list(partial.placements)
    for p in placed:
        stamp_body(cells, p, spec)
    grid = OccupancyGrid(cells)
    probs = mix.probabilities()
    failures = 0
    while len(placed) < spec.requested_cages and failures < max_attempts:
        strategy = _sample_strategy(probs, rng)
        if strategy is not Strategy.TOTAL_RANDOMNESS and not placed:
            strategy = Strategy.TOTAL_RANDOMNESS
        if strategy is Strategy.TOTAL_RANDOMNESS:
            candidate = place_total_random(grid, spec, rng)
            if candidate is None:
                break  # no feasible triple left anywhere: layout is saturated
        else:
            candidate = _place_relative(grid, placed, spec, rng, strategy)
        if candidate is None:
            failures += 1
            continue
        stamp_body(cells, candidate, spec)
        placed.append(candidate)
        failures = 0
    return Chromosome(tuple(placed), next(ids or _FALLBACK_IDS))


def count_placements_closed_form(spec: ShelterSpec) -> int:
    """Number of possible single-cage placements in an obstacle-free shelter.

    Factors that would go negative clamp to zero (cage larger than grid).
    """
    x, y = derive_grid_dims(spec)
    c_len, c_wid, c_clr = cage_cells(spec)
    horizontal = 2 * max(0, x - c_len - c_clr + 1) * max(0, y - c_wid + 1)
    vertical = 2 * max(0, x - c_wid + 1) * max(0, y - c_len - c_clr + 1)
    return horizontal + vertical


def count_placements_brute_force(spec: ShelterSpec) -> int:
    """Exact enumeration oracle for the closed-form placement count.

    Doors and columns are stripped first so both sides count the same thing.
    """
    bare = replace(spec, doors=(), columns=())
    x, y = derive_grid_dims(bare)
    cells = np.zeros((x, y), dtype=np.uint8)
    count = 0
    for o in ORIENTATIONS:
        for px in range(x):
            for py in range(y):
                if _feasible(Placement(px, py, o), cells, bare):
                    count += 1
    return count


def feasibility_violations(
    placements: Sequence[Placement], spec: ShelterSpec
) -> list[str]:
    """Full audit of a gene sequence; empty list means the layout is sound.

    Replays the genes in order against an incrementally built grid, exactly
    the way repair would, so any overlap, clearance conflict, bounds breach
    or door-apron violation is reported.
    """
    cells = obstacle_grid(spec).copy()
    violations: list[str] = []
    for index, p in enumerate(placements):
        if _feasible(p, cells, spec):
            stamp_body(cells, p, spec)
        else:
            violations.append(f"gene {index}: infeasible placement {p}")
    if len(placements) > spec.requested_cages:
        violations.append(
            f"{len(placements)} placements exceed requested {spec.requested_cages}"
        )
    return violations
