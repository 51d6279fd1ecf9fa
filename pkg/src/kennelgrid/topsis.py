"""Closeness-to-ideal ranking of criteria matrices.

Each criterion carries a signed weight: the sign gives the direction
(positive = benefit, negative = cost) and the magnitude is the step-3
weight. Columns are vector-normalized per matrix, so scores are relative to
the candidate set being ranked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import CRITERIA_NAMES, CriteriaVector


class DimensionMismatchError(ValueError):
    """Criteria list does not match the decision-vector arity."""


class EmptyMatrixError(ValueError):
    """A decision matrix needs at least one row."""


@dataclass(frozen=True)
class CriterionSpec:
    """Name plus signed weight of one ranking criterion."""

    name: str
    weight: float


def criteria_from_weights(weights: Sequence[float]) -> tuple[CriterionSpec, ...]:
    """Build the five standard criteria from signed weights (AC, LSP, ASP, CF, IC)."""
    if len(weights) != len(CRITERIA_NAMES):
        raise DimensionMismatchError(
            f"expected {len(CRITERIA_NAMES)} weights, got {len(weights)}"
        )
    return tuple(
        CriterionSpec(name, float(w)) for name, w in zip(CRITERIA_NAMES, weights)
    )


def normalize_criteria(
    criteria: Sequence[CriterionSpec],
) -> tuple[CriterionSpec, ...]:
    """Rescale weight magnitudes to sum to one, keeping signs."""
    total = sum(abs(c.weight) for c in criteria)
    if total <= 0:
        raise ValueError("criterion weights must not all be zero")
    return tuple(CriterionSpec(c.name, c.weight / total) for c in criteria)


def validate_criteria(criteria: Sequence[CriterionSpec], tol: float = 1e-9) -> None:
    """Require |weights| to sum to one within tolerance."""
    total = sum(abs(c.weight) for c in criteria)
    if abs(total - 1.0) > tol:
        raise ValueError(f"criterion weight magnitudes sum to {total!r}, expected 1")


# The two reference weightings: welfare trades capacity against confrontation,
# capacity maximizes accessible cages almost exclusively.
WELFARE_WEIGHTS = (0.44, -0.04, -0.04, -0.44, -0.04)
CAPACITY_WEIGHTS = (0.90, -0.02, -0.02, -0.03, -0.03)


@dataclass(frozen=True)
class RankedRow:
    id: str
    criteria: CriteriaVector
    closeness: float


@dataclass(frozen=True)
class RankedPopulation:
    """Rows sorted by closeness, best first; ties keep input order."""

    rows: tuple[RankedRow, ...]

    def ids(self) -> tuple[str, ...]:
        return tuple(row.id for row in self.rows)

    def position(self, id: str) -> int:
        """1-based rank of a row id."""
        for index, row in enumerate(self.rows):
            if row.id == id:
                return index + 1
        raise KeyError(id)

    def rescaled(self) -> tuple[float, ...]:
        """Scores divided by the best score, shaping tables with a 1.0 top row."""
        top = self.rows[0].closeness if self.rows else 0.0
        if top <= 0:
            return tuple(0.0 for _ in self.rows)
        return tuple(row.closeness / top for row in self.rows)


def rank(
    entries: Sequence[tuple[str, CriteriaVector]],
    criteria: Sequence[CriterionSpec],
) -> RankedPopulation:
    """Rank decision rows by relative closeness to the ideal solution.

    Steps: vector-normalize each column, weight by |w|, take per-column
    ideal/anti-ideal according to the weight sign, measure Euclidean
    distances to both, and sort by closeness S-/(S- + S+) descending. An
    all-zero column normalizes to zeros (neutral); a row with zero distance
    to both poles (single row, or all rows identical) gets closeness 1.
    """
    if not entries:
        raise EmptyMatrixError("decision matrix has no rows")
    vectors = [vector for _, vector in entries]
    arity = len(vectors[0].as_tuple())
    if len(criteria) != arity:
        raise DimensionMismatchError(
            f"{len(criteria)} criteria for {arity}-column vectors"
        )
    matrix = np.array([v.as_tuple() for v in vectors], dtype=float)
    weights = np.array([c.weight for c in criteria], dtype=float)

    norms = np.sqrt((matrix**2).sum(axis=0))
    normalized = matrix / np.where(norms == 0, 1.0, norms)
    weighted = normalized * np.abs(weights)
    ideal = np.where(weights > 0, weighted.max(axis=0), weighted.min(axis=0))
    anti = np.where(weights > 0, weighted.min(axis=0), weighted.max(axis=0))
    s_plus = np.sqrt(((weighted - ideal) ** 2).sum(axis=1))
    s_minus = np.sqrt(((weighted - anti) ** 2).sum(axis=1))
    denom = s_plus + s_minus
    closeness = np.where(denom == 0, 1.0, s_minus / np.where(denom == 0, 1.0, denom))

    order = sorted(range(len(entries)), key=lambda i: -closeness[i])
    rows = tuple(
        RankedRow(entries[i][0], entries[i][1], float(closeness[i])) for i in order
    )
    return RankedPopulation(rows)
