"""Scenario configuration: JSON loading, validation and bundled presets.

Field names carry their unit (``length_m``, ``resolution_m``) so files stay
unambiguous and diffable. Only the ``shelter`` block is required; search,
weights, output and render settings all have working defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .ga import GaConfig
from .model import (
    CageSpec,
    ColumnSpec,
    DoorSpec,
    ShelterSpec,
    Wall,
    derive_grid_dims,
)
from .placement import StrategyMix, count_placements_closed_form
from .topsis import criteria_from_weights, validate_criteria


class ConfigError(Exception):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    """The file is not syntactically usable (bad JSON, missing field, bad type)."""


class ValidationError(ConfigError):
    """A parsed value violates a domain invariant."""


@dataclass(frozen=True)
class RenderOptions:
    px_per_cell: int = 16
    show_paths: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one optimization run needs."""

    shelter: ShelterSpec
    ga: GaConfig = field(default_factory=GaConfig)
    output_dir: str = "out"
    render: RenderOptions = field(default_factory=RenderOptions)

    def to_dict(self) -> dict[str, Any]:
        s = self.shelter
        return {
            "shelter": {
                "length_m": s.length_m,
                "width_m": s.width_m,
                "resolution_m": s.resolution_m,
                "cage": {
                    "length_m": s.cage.length_m,
                    "width_m": s.cage.width_m,
                    "clearance_m": s.cage.clearance_m,
                },
                "requested_cages": s.requested_cages,
                "doors": [
                    {
                        "wall": d.wall.value,
                        "offset_m": d.offset_m,
                        "width_m": d.width_m,
                    }
                    for d in s.doors
                ],
                "columns": [
                    {
                        "x_m": c.x_m,
                        "y_m": c.y_m,
                        "length_m": c.length_m,
                        "width_m": c.width_m,
                    }
                    for c in s.columns
                ],
            },
            "ga": {
                "population_size": self.ga.population_size,
                "crossover_children": self.ga.crossover_children,
                "mutation_children": self.ga.mutation_children,
                "elite_fraction": self.ga.elite_fraction,
                "iterations": self.ga.iterations,
                "seed": self.ga.seed,
                "max_attempts": self.ga.max_attempts,
                "strategy_mix": {
                    "total_randomness": self.ga.strategy_mix.total_randomness,
                    "confrontation": self.ga.strategy_mix.confrontation,
                    "neighbourhood": self.ga.strategy_mix.neighbourhood,
                    "back_to_back": self.ga.strategy_mix.back_to_back,
                    "aligned": self.ga.strategy_mix.aligned,
                },
            },
            "criteria_weights": [c.weight for c in self.ga.criteria],
            "output_dir": self.output_dir,
            "render": {
                "px_per_cell": self.render.px_per_cell,
                "show_paths": self.render.show_paths,
            },
        }


def _require(mapping: dict, key: str, context: str) -> Any:
    if key not in mapping:
        raise ParseError(f"{context}: missing field {key!r}")
    return mapping[key]


def _parse_shelter(data: dict) -> ShelterSpec:
    cage_data = _require(data, "cage", "shelter")
    cage = CageSpec(
        length_m=float(_require(cage_data, "length_m", "cage")),
        width_m=float(_require(cage_data, "width_m", "cage")),
        clearance_m=float(_require(cage_data, "clearance_m", "cage")),
    )
    try:
        doors = tuple(
            DoorSpec(
                wall=Wall(_require(d, "wall", "door")),
                offset_m=float(_require(d, "offset_m", "door")),
                width_m=float(_require(d, "width_m", "door")),
            )
            for d in data.get("doors", [])
        )
    except ValueError as exc:
        raise ParseError(f"door: {exc}") from exc
    columns = tuple(
        ColumnSpec(
            x_m=float(_require(c, "x_m", "column")),
            y_m=float(_require(c, "y_m", "column")),
            length_m=float(_require(c, "length_m", "column")),
            width_m=float(_require(c, "width_m", "column")),
        )
        for c in data.get("columns", [])
    )
    return ShelterSpec(
        length_m=float(_require(data, "length_m", "shelter")),
        width_m=float(_require(data, "width_m", "shelter")),
        resolution_m=float(_require(data, "resolution_m", "shelter")),
        cage=cage,
        requested_cages=int(_require(data, "requested_cages", "shelter")),
        doors=doors,
        columns=columns,
    )


def _parse_ga(data: dict, weights: list[float]) -> GaConfig:
    mix_data = data.get("strategy_mix", {})
    mix = StrategyMix(
        total_randomness=float(mix_data.get("total_randomness", 1.0)),
        confrontation=float(mix_data.get("confrontation", 1.0)),
        neighbourhood=float(mix_data.get("neighbourhood", 1.0)),
        back_to_back=float(mix_data.get("back_to_back", 1.0)),
        aligned=float(mix_data.get("aligned", 1.0)),
    )
    defaults = GaConfig()
    return GaConfig(
        population_size=int(data.get("population_size", defaults.population_size)),
        crossover_children=int(
            data.get("crossover_children", defaults.crossover_children)
        ),
        mutation_children=int(
            data.get("mutation_children", defaults.mutation_children)
        ),
        elite_fraction=float(data.get("elite_fraction", defaults.elite_fraction)),
        iterations=int(data.get("iterations", defaults.iterations)),
        strategy_mix=mix,
        criteria=criteria_from_weights(weights),
        seed=int(data.get("seed", defaults.seed)),
        max_attempts=int(data.get("max_attempts", defaults.max_attempts)),
    )


def config_from_dict(data: dict[str, Any]) -> ScenarioConfig:
    """Build and fully validate a scenario from parsed JSON."""
    if not isinstance(data, dict):
        raise ParseError("top-level config must be a JSON object")
    try:
        shelter = _parse_shelter(_require(data, "shelter", "config"))
        weights = [float(w) for w in data.get("criteria_weights", [])] or list(
            w.weight for w in GaConfig().criteria
        )
        ga = _parse_ga(data.get("ga", {}), weights)
        render_data = data.get("render", {})
        render = RenderOptions(
            px_per_cell=int(render_data.get("px_per_cell", 16)),
            show_paths=bool(render_data.get("show_paths", False)),
        )
        config = ScenarioConfig(
            shelter=shelter,
            ga=ga,
            output_dir=str(data.get("output_dir", "out")),
            render=render,
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed config: {exc}") from exc
    validate_config(config)
    return config


def load_config(path: str | Path) -> ScenarioConfig:
    """Load and validate a scenario config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return config_from_dict(data)


def validate_shelter(spec: ShelterSpec) -> None:
    """Check every shelter invariant, raising ValidationError on the first."""
    if spec.resolution_m <= 0:
        raise ValidationError("resolution_m must be positive")
    if spec.length_m <= 0 or spec.width_m <= 0:
        raise ValidationError("shelter dimensions must be positive")
    cage = spec.cage
    if cage.length_m <= 0 or cage.width_m <= 0:
        raise ValidationError("cage dimensions must be positive")
    if cage.clearance_m < 0:
        raise ValidationError("cage clearance must be non-negative")
    if spec.requested_cages < 0:
        raise ValidationError("requested_cages must be non-negative")
    if count_placements_closed_form(spec) < 1:
        raise ValidationError("the cage does not fit anywhere in the shelter")
    walls: dict[Wall, list[tuple[float, float]]] = {}
    for door in spec.doors:
        wall_len = spec.length_m if door.wall.horizontal else spec.width_m
        if door.offset_m < 0 or door.offset_m + door.width_m > wall_len + 1e-9:
            raise ValidationError(
                f"door on {door.wall.value} wall exceeds the wall length"
            )
        if door.width_m < spec.resolution_m:
            raise ValidationError(
                "door width must be at least one grid cell "
                f"({door.width_m} < {spec.resolution_m})"
            )
        walls.setdefault(door.wall, []).append(
            (door.offset_m, door.offset_m + door.width_m)
        )
    for spans in walls.values():
        spans.sort()
        for (_, hi), (lo, _) in zip(spans, spans[1:]):
            if lo < hi - 1e-9:
                raise ValidationError("doors on the same wall overlap")
    for col in spec.columns:
        if col.length_m <= 0 or col.width_m <= 0:
            raise ValidationError("column dimensions must be positive")
        if (
            col.x_m < 0
            or col.y_m < 0
            or col.x_m + col.length_m > spec.length_m + 1e-9
            or col.y_m + col.width_m > spec.width_m + 1e-9
        ):
            raise ValidationError("column lies outside the shelter")


def validate_config(config: ScenarioConfig) -> None:
    validate_shelter(config.shelter)
    try:
        config.ga.validate()
        validate_criteria(config.ga.criteria)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    if config.render.px_per_cell < 1:
        raise ValidationError("px_per_cell must be at least 1")
    x, y = derive_grid_dims(config.shelter)
    if x < 1 or y < 1:
        raise ValidationError("shelter grid is empty")


def bundled_config_path(name: str) -> Path:
    """Path of a preset shipped with the package (name without extension)."""
    candidate = resources.files("kennelgrid").joinpath("configs", f"{name}.json")
    with resources.as_file(candidate) as path:
        if not path.exists():
            raise ParseError(f"no bundled config named {name!r}")
        return path


def load_bundled_config(name: str) -> ScenarioConfig:
    return load_config(bundled_config_path(name))
