"""Generational layout search: selection, crossover with repair, mutation.

Every generation is evaluated on all five criteria, ranked by closeness,
and rebuilt as elites plus freshly bred children. Closeness is relative to
the current population (columns are normalized per matrix), so the best
score is not monotone across generations; elite survival is.

All randomness flows from one seed. Breeding draws selection decisions from
one per-generation stream and gives every offspring its own substream, so
evaluation order or parallelism cannot change a run.
"""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .access import (
    NoEntranceError,
    access_metrics,
    build_distance_field,
    entrance_cells,
    unreachable_field,
)
from .confrontation import cf_score
from .model import (
    Chromosome,
    CriteriaVector,
    IdSequence,
    Placement,
    ShelterSpec,
    derive_grid_dims,
    obstacle_grid,
    rasterize,
    stamp_body,
)
from .placement import StrategyMix, _feasible, feasibility_violations, fill_layout
from .topsis import (
    CAPACITY_WEIGHTS,
    CriterionSpec,
    RankedPopulation,
    criteria_from_weights,
    rank,
    validate_criteria,
)

log = logging.getLogger(__name__)

Observer = Callable[[int, list[Chromosome], RankedPopulation], None]


@dataclass(frozen=True)
class GaConfig:
    """Search configuration.

    Replacement arithmetic must reconcile: elites plus crossover plus
    mutation children rebuild exactly ``population_size`` individuals.
    """

    population_size: int = 24
    crossover_children: int = 6
    mutation_children: int = 6
    elite_fraction: float = 0.5
    iterations: int = 50
    strategy_mix: StrategyMix = field(default_factory=StrategyMix)
    criteria: tuple[CriterionSpec, ...] = criteria_from_weights(CAPACITY_WEIGHTS)
    seed: int = 0
    max_attempts: int = 200

    @property
    def elite_count(self) -> int:
        return int(self.elite_fraction * self.population_size)

    def validate(self) -> None:
        if self.population_size < 1:
            raise ValueError("population_size must be at least 1")
        if not 0.0 <= self.elite_fraction <= 1.0:
            raise ValueError("elite_fraction must lie in [0, 1]")
        if self.crossover_children < 0 or self.crossover_children % 2:
            raise ValueError("crossover_children must be even and non-negative")
        if self.mutation_children < 0:
            raise ValueError("mutation_children must be non-negative")
        children = self.crossover_children + self.mutation_children
        if self.elite_count + children != self.population_size:
            raise ValueError(
                f"elites ({self.elite_count}) + children ({children}) must equal "
                f"population_size ({self.population_size})"
            )
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        self.strategy_mix.validate()
        validate_criteria(self.criteria)


@dataclass(frozen=True)
class CriterionStats:
    best: float
    mean: float
    median: float


@dataclass(frozen=True)
class GenerationLog:
    """Per-iteration population statistics; best is direction-aware."""

    iteration: int
    best_id: str
    ac: CriterionStats
    lsp: CriterionStats
    asp: CriterionStats
    cf: CriterionStats
    ic: CriterionStats

    def stats(self) -> tuple[CriterionStats, ...]:
        return (self.ac, self.lsp, self.asp, self.cf, self.ic)


def _generation_log(
    iteration: int, ranked: RankedPopulation, criteria: Sequence[CriterionSpec]
) -> GenerationLog:
    columns = list(zip(*(row.criteria.as_tuple() for row in ranked.rows)))
    stats = []
    for spec_, values in zip(criteria, columns):
        best = max(values) if spec_.weight > 0 else min(values)
        stats.append(
            CriterionStats(float(best), statistics.fmean(values), float(statistics.median(values)))
        )
    return GenerationLog(iteration, ranked.rows[0].id, *stats)


class LayoutEvaluator:
    """Computes criteria vectors of layouts, cached by gene sequence."""

    def __init__(self, spec: ShelterSpec) -> None:
        self.spec = spec
        self._cache: dict[tuple[Placement, ...], CriteriaVector] = {}

    def evaluate(self, chrom: Chromosome) -> CriteriaVector:
        cached = self._cache.get(chrom.placements)
        if cached is not None:
            return cached
        grid = rasterize(chrom, self.spec)
        try:
            distfield = build_distance_field(grid, entrance_cells(self.spec))
        except NoEntranceError:
            distfield = unreachable_field(derive_grid_dims(self.spec))
        vector = access_metrics(chrom, distfield, self.spec)
        vector = replace(vector, cf=cf_score(chrom, grid, self.spec))
        self._cache[chrom.placements] = vector
        return vector


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def init_population(
    spec: ShelterSpec,
    cfg: GaConfig,
    rng: np.random.Generator,
    ids: IdSequence | None = None,
) -> list[Chromosome]:
    """Fresh chromosomes, each grown from an empty layout."""
    return [
        fill_layout(
            Chromosome(), spec, cfg.strategy_mix, rng, cfg.max_attempts, ids=ids
        )
        for _ in range(cfg.population_size)
    ]


def roulette_select(ranked: RankedPopulation, rng: np.random.Generator) -> str:
    """Pick a chromosome id with probability proportional to closeness."""
    total = sum(row.closeness for row in ranked.rows)
    if total <= 0:
        return ranked.rows[int(rng.integers(len(ranked.rows)))].id
    u = rng.random() * total
    acc = 0.0
    for row in ranked.rows:
        acc += row.closeness
        if u < acc:
            return row.id
    return ranked.rows[-1].id


def repair(
    chrom: Chromosome,
    spec: ShelterSpec,
    mix: StrategyMix,
    rng: np.random.Generator,
    max_attempts: int = 200,
    ids: IdSequence | None = None,
) -> Chromosome:
    """Drop conflicting genes in scan order, then top the layout back up.

    A gene survives only if it is feasible against the genes kept before
    it, so the output always passes the full feasibility audit.
    """
    cells = obstacle_grid(spec).copy()
    kept: list[Placement] = []
    for placement in chrom.placements:
        if len(kept) >= spec.requested_cages:
            break
        if _feasible(placement, cells, spec):
            stamp_body(cells, placement, spec)
            kept.append(placement)
    return fill_layout(
        Chromosome(tuple(kept), chrom.id), spec, mix, rng, max_attempts, ids=ids
    )


def split_at_cut(
    a: Chromosome, b: Chromosome, axis: int, cut: int
) -> tuple[Chromosome, Chromosome]:
    """Exchange parent genes across a cut plane (0 = x axis, 1 = y axis).

    A cage belongs to the side its lower-left corner falls on; within each
    side the parents' gene order is preserved.
    """
    coord = (lambda p: p.x) if axis == 0 else (lambda p: p.y)
    low_a = [p for p in a.placements if coord(p) < cut]
    high_a = [p for p in a.placements if coord(p) >= cut]
    low_b = [p for p in b.placements if coord(p) < cut]
    high_b = [p for p in b.placements if coord(p) >= cut]
    return Chromosome(tuple(low_a + high_b)), Chromosome(tuple(low_b + high_a))


def crossover(
    a: Chromosome,
    b: Chromosome,
    spec: ShelterSpec,
    mix: StrategyMix,
    rng: np.random.Generator,
    max_attempts: int = 200,
    ids: IdSequence | None = None,
) -> tuple[Chromosome, Chromosome]:
    """Split both parents at a random axis cut and swap the halves.

    The cut coordinate is uniform over the grid interior. Each child is
    repaired, so conflicting inherited genes are replaced and short
    children are refilled.
    """
    dims = derive_grid_dims(spec)
    axis = int(rng.integers(2))
    size = dims[axis]
    cut = int(rng.integers(1, size)) if size > 1 else 1
    child_ab, child_ba = split_at_cut(a, b, axis, cut)
    return (
        repair(child_ab, spec, mix, rng, max_attempts, ids=ids),
        repair(child_ba, spec, mix, rng, max_attempts, ids=ids),
    )


def inherited_indices(n: int, rng: np.random.Generator) -> list[int]:
    """Gene positions a mutation child inherits: a uniformly random subset
    of uniformly random size k in {1, ..., n-1}, in original order."""
    k = int(rng.integers(1, n))
    return sorted(int(i) for i in rng.choice(n, size=k, replace=False))


def mutate(
    parent: Chromosome,
    spec: ShelterSpec,
    mix: StrategyMix,
    rng: np.random.Generator,
    max_attempts: int = 200,
    ids: IdSequence | None = None,
) -> Chromosome:
    """Keep a random strict subset of the parent's genes and refill.

    A parent with fewer than two genes degenerates to a fresh fill from
    empty.
    """
    n = len(parent.placements)
    if n < 2:
        return fill_layout(Chromosome(), spec, mix, rng, max_attempts, ids=ids)
    kept = tuple(parent.placements[i] for i in inherited_indices(n, rng))
    return fill_layout(Chromosome(kept), spec, mix, rng, max_attempts, ids=ids)


def evolve(
    spec: ShelterSpec,
    cfg: GaConfig,
    observer: Optional[Observer] = None,
) -> tuple[RankedPopulation, list[GenerationLog]]:
    """Run the full generational search.

    Returns the final generation's ranking plus one log entry per evaluated
    generation (0 through ``iterations`` inclusive). ``observer`` is called
    with (iteration, population, ranking) after each evaluation.
    """
    cfg.validate()
    ids = IdSequence("c")
    evaluator = LayoutEvaluator(spec)
    population = init_population(spec, cfg, _stream(cfg.seed, 0, 0), ids=ids)

    def ranked_population(pop: list[Chromosome]) -> RankedPopulation:
        return rank([(ch.id, evaluator.evaluate(ch)) for ch in pop], cfg.criteria)

    logs: list[GenerationLog] = []
    for iteration in range(cfg.iterations):
        ranked = ranked_population(population)
        if observer is not None:
            observer(iteration, population, ranked)
        logs.append(_generation_log(iteration, ranked, cfg.criteria))
        log.info(
            "generation %d: best=%s ac=%d", iteration, ranked.rows[0].id,
            ranked.rows[0].criteria.ac,
        )
        by_id = {ch.id: ch for ch in population}
        elites = [by_id[row.id] for row in ranked.rows[: cfg.elite_count]]
        selector = _stream(cfg.seed, iteration + 1, 0)
        children: list[Chromosome] = []
        for pair in range(cfg.crossover_children // 2):
            parent_a = by_id[roulette_select(ranked, selector)]
            parent_b = by_id[roulette_select(ranked, selector)]
            first, second = crossover(
                parent_a,
                parent_b,
                spec,
                cfg.strategy_mix,
                _stream(cfg.seed, iteration + 1, 1, pair),
                cfg.max_attempts,
                ids=ids,
            )
            children.extend((first, second))
        for child in range(cfg.mutation_children):
            parent = by_id[roulette_select(ranked, selector)]
            children.append(
                mutate(
                    parent,
                    spec,
                    cfg.strategy_mix,
                    _stream(cfg.seed, iteration + 1, 2, child),
                    cfg.max_attempts,
                    ids=ids,
                )
            )
        population = elites + children
    ranked = ranked_population(population)
    if observer is not None:
        observer(cfg.iterations, population, ranked)
    logs.append(_generation_log(cfg.iterations, ranked, cfg.criteria))
    return ranked, logs


def audit_population(population: Sequence[Chromosome], spec: ShelterSpec) -> list[str]:
    """Feasibility violations across a whole population (empty = sound)."""
    problems: list[str] = []
    for chrom in population:
        for violation in feasibility_violations(chrom.placements, spec):
            problems.append(f"{chrom.id}: {violation}")
    return problems
