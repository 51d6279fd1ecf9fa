"""Animal-shelter cage layout synthesis.

A genetic search places rectangular cages on a discretized shelter floor;
candidate layouts are scored on accessibility (graph distances from the
entrances), mutual visibility between doors, and capacity, then ranked by
closeness to the ideal solution each generation.
"""

from .access import (
    DistanceField,
    NoEntranceError,
    UNREACHABLE,
    access_metrics,
    build_distance_field,
    entrance_cells,
)
from .confrontation import cf_score, has_eye_contact, supercover_cells
from .config import (
    ConfigError,
    ParseError,
    RenderOptions,
    ScenarioConfig,
    ValidationError,
    load_bundled_config,
    load_config,
    validate_shelter,
)
from .ga import (
    GaConfig,
    GenerationLog,
    LayoutEvaluator,
    audit_population,
    crossover,
    evolve,
    init_population,
    mutate,
    repair,
    roulette_select,
)
from .model import (
    CAGE_BODY,
    CRITERIA_NAMES,
    CageSpec,
    Chromosome,
    ColumnSpec,
    CriteriaVector,
    DoorSpec,
    FREE,
    IdSequence,
    LayoutError,
    OBSTACLE,
    OccupancyGrid,
    Orientation,
    OutOfBoundsError,
    OverlapError,
    Placement,
    ShelterSpec,
    Wall,
    cage_cells,
    derive_grid_dims,
    rasterize,
)
from .placement import (
    Footprint,
    Strategy,
    StrategyMix,
    count_placements_brute_force,
    count_placements_closed_form,
    feasibility_violations,
    fill_layout,
    footprint,
    is_feasible,
    place_aligned,
    place_back_to_back,
    place_confrontation,
    place_neighbourhood,
    place_total_random,
)
from .topsis import (
    CAPACITY_WEIGHTS,
    CriterionSpec,
    DimensionMismatchError,
    EmptyMatrixError,
    RankedPopulation,
    RankedRow,
    WELFARE_WEIGHTS,
    criteria_from_weights,
    rank,
)

__version__ = "0.1.0"
