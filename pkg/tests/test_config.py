import json

import pytest

from kennelgrid import (
    ParseError,
    ValidationError,
    load_bundled_config,
    load_config,
)
from kennelgrid.config import config_from_dict, validate_shelter


def minimal_config() -> dict:
    return {
        "shelter": {
            "length_m": 10.0,
            "width_m": 12.5,
            "resolution_m": 0.5,
            "cage": {"length_m": 1.5, "width_m": 0.75, "clearance_m": 2.5},
            "requested_cages": 20,
            "doors": [{"wall": "south", "offset_m": 2.0, "width_m": 1.0}],
        }
    }


class TestLoadConfig:
    def test_bundled_dog_scenario(self):
        config = load_bundled_config("shelter_d_scenario1")
        assert config.ga.population_size == 24
        assert config.ga.crossover_children == 6
        assert config.ga.mutation_children == 6
        assert config.ga.elite_fraction == 0.5
        assert config.ga.iterations == 100
        assert config.shelter.resolution_m == 1.4
        assert [c.weight for c in config.ga.criteria] == [
            0.44, -0.04, -0.04, -0.44, -0.04,
        ]
        assert config.ga.strategy_mix.confrontation == 0.0

    def test_bundled_cat_shelter(self):
        config = load_bundled_config("shelter_a")
        assert (config.shelter.length_m, config.shelter.width_m) == (25.0, 20.0)
        assert len(config.shelter.doors) == 2
        assert config.shelter.resolution_m == 1.0
        assert config.ga.iterations == 200

    def test_all_bundled_configs_valid(self):
        for name in (
            "demo_small",
            "shelter_a",
            "shelter_b",
            "shelter_d_scenario1",
            "shelter_d_scenario2",
            "square20",
        ):
            load_bundled_config(name)

    def test_defaults_fill_optional_sections(self):
        config = config_from_dict(minimal_config())
        assert config.ga.population_size == 24
        assert config.output_dir == "out"
        assert config.render.px_per_cell == 16

    def test_round_trip_is_lossless(self):
        config = load_bundled_config("shelter_d_scenario2")
        assert config_from_dict(config.to_dict()) == config

    def test_missing_field_is_parse_error(self, tmp_path):
        data = minimal_config()
        del data["shelter"]["resolution_m"]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ParseError):
            load_config(path)

    def test_bad_json_is_parse_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_config(path)

    def test_unnormalized_weights_rejected(self):
        data = minimal_config()
        data["criteria_weights"] = [0.9, -0.5, -0.02, -0.03, -0.03]
        with pytest.raises(ValidationError):
            config_from_dict(data)


class TestValidateShelter:
    def base(self):
        return config_from_dict(minimal_config()).shelter

    def test_valid_spec_passes(self):
        validate_shelter(self.base())

    def test_overlapping_doors_rejected(self):
        import dataclasses

        from kennelgrid import DoorSpec, Wall

        spec = dataclasses.replace(
            self.base(),
            doors=(
                DoorSpec(Wall.SOUTH, 2.0, 1.0),
                DoorSpec(Wall.SOUTH, 2.5, 1.0),
            ),
        )
        with pytest.raises(ValidationError):
            validate_shelter(spec)

    def test_door_wider_than_wall_rejected(self):
        import dataclasses

        from kennelgrid import DoorSpec, Wall

        spec = dataclasses.replace(
            self.base(), doors=(DoorSpec(Wall.SOUTH, 8.0, 5.0),)
        )
        with pytest.raises(ValidationError):
            validate_shelter(spec)

    def test_door_narrower_than_cell_rejected(self):
        import dataclasses

        from kennelgrid import DoorSpec, Wall

        spec = dataclasses.replace(
            self.base(), doors=(DoorSpec(Wall.SOUTH, 2.0, 0.25),)
        )
        with pytest.raises(ValidationError):
            validate_shelter(spec)

    def test_column_outside_shelter_rejected(self):
        import dataclasses

        from kennelgrid import ColumnSpec

        spec = dataclasses.replace(
            self.base(), columns=(ColumnSpec(9.5, 0.0, 2.0, 1.0),)
        )
        with pytest.raises(ValidationError):
            validate_shelter(spec)

    def test_cage_that_cannot_fit_rejected(self):
        data = minimal_config()
        data["shelter"]["cage"] = {
            "length_m": 11.0,
            "width_m": 0.75,
            "clearance_m": 2.5,
        }
        with pytest.raises(ValidationError):
            config_from_dict(data)
