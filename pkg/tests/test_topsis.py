import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kennelgrid import (
    CriteriaVector,
    CriterionSpec,
    DimensionMismatchError,
    EmptyMatrixError,
    criteria_from_weights,
    rank,
)
from kennelgrid.topsis import normalize_criteria, validate_criteria
from reference_rankings import (
    CAPACITY_MATRIX,
    CAPACITY_WEIGHTS,
    WELFARE_MATRIX,
    WELFARE_WEIGHTS,
    as_entries,
)


def vec(ac, lsp, asp, cf, ic):
    return CriteriaVector(ac=ac, lsp=lsp, asp=asp, cf=cf, ic=ic)


class TestWeights:
    def test_normalize_preserves_signs(self):
        criteria = normalize_criteria(criteria_from_weights((2.0, -1.0, -1.0, 0.0, 0.0)))
        assert [c.weight for c in criteria] == [0.5, -0.25, -0.25, 0.0, 0.0]

    def test_validate_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            validate_criteria(criteria_from_weights((0.9, -0.2, -0.02, -0.03, -0.03)))

    def test_wrong_arity_rejected(self):
        with pytest.raises(DimensionMismatchError):
            criteria_from_weights((1.0, 1.0))


class TestRankBasics:
    def test_empty_matrix_rejected(self):
        with pytest.raises(EmptyMatrixError):
            rank([], criteria_from_weights(CAPACITY_WEIGHTS))

    def test_criteria_arity_must_match(self):
        entries = [("a", vec(1, 1, 1.0, 1.0, 1))]
        with pytest.raises(DimensionMismatchError):
            rank(entries, (CriterionSpec("AC", 1.0),))

    def test_single_row_scores_one(self):
        entries = [("only", vec(5, 3, 2.0, 1.0, 0))]
        ranked = rank(entries, criteria_from_weights(CAPACITY_WEIGHTS))
        assert ranked.rows[0].closeness == 1.0

    def test_identical_rows_tie_in_input_order(self):
        entries = [("first", vec(3, 2, 2.0, 0.0, 1)), ("second", vec(3, 2, 2.0, 0.0, 1))]
        ranked = rank(entries, criteria_from_weights(CAPACITY_WEIGHTS))
        assert ranked.ids() == ("first", "second")
        assert ranked.rows[0].closeness == ranked.rows[1].closeness == 1.0

    def test_zero_column_is_neutral(self):
        with_zeros = [
            ("a", vec(5, 2, 2.0, 0.0, 0)),
            ("b", vec(3, 4, 3.0, 0.0, 1)),
        ]
        ranked = rank(with_zeros, criteria_from_weights(CAPACITY_WEIGHTS))
        assert ranked.ids() == ("a", "b")
        assert all(0.0 <= row.closeness <= 1.0 for row in ranked.rows)

    def test_dominating_row_scores_one(self):
        entries = [
            ("best", vec(10, 1, 1.0, 0.0, 0)),
            ("worst", vec(1, 9, 9.0, 50.0, 9)),
        ]
        ranked = rank(entries, criteria_from_weights(CAPACITY_WEIGHTS))
        assert ranked.ids() == ("best", "worst")
        assert ranked.rows[0].closeness == pytest.approx(1.0)
        assert ranked.rows[1].closeness == pytest.approx(0.0)


class TestReferenceMatrices:
    def test_welfare_matrix_full_order(self):
        ranked = rank(as_entries(WELFARE_MATRIX), criteria_from_weights(WELFARE_WEIGHTS))
        assert list(ranked.ids()) == [row[0] for row in WELFARE_MATRIX]

    def test_welfare_matrix_rescaled_scores_match_reference(self):
        reference = [
            1.0, 0.9844, 0.9837, 0.8883, 0.8883, 0.8163, 0.8163, 0.8163,
            0.7455, 0.6507, 0.6152, 0.5268, 0.4740, 0.4328, 0.4163, 0.3567,
            0.3248, 0.3218, 0.3213, 0.3213, 0.2941, 0.2652, 0.2516, 0.1926,
        ]
        ranked = rank(as_entries(WELFARE_MATRIX), criteria_from_weights(WELFARE_WEIGHTS))
        for ours, expected in zip(ranked.rescaled(), reference):
            assert ours == pytest.approx(expected, abs=1e-3)

    def test_capacity_matrix_top_row(self):
        ranked = rank(
            as_entries(CAPACITY_MATRIX), criteria_from_weights(CAPACITY_WEIGHTS)
        )
        assert ranked.ids()[0] == "a32320"

    def test_capacity_weights_on_welfare_population(self):
        # Re-scoring the welfare-run population under capacity weights drops
        # the welfare winner to sixth place.
        ranked = rank(
            as_entries(WELFARE_MATRIX), criteria_from_weights(CAPACITY_WEIGHTS)
        )
        assert ranked.ids()[0] == "a32320"
        assert ranked.position("a4474") == 6


class TestRankProperties:
    @given(scale=st.floats(0.1, 100.0), column=st.integers(0, 4))
    @settings(max_examples=40)
    def test_column_scaling_keeps_order(self, scale, column):
        entries = as_entries(WELFARE_MATRIX)
        criteria = criteria_from_weights(WELFARE_WEIGHTS)
        base = rank(entries, criteria).ids()
        scaled_entries = []
        for id_, v in entries:
            values = list(v.as_tuple())
            values[column] = values[column] * scale
            scaled_entries.append(
                (id_, CriteriaVector(values[0], values[1], values[2], values[3], values[4]))
            )
        assert rank(scaled_entries, criteria).ids() == base

    def test_weight_sign_flip_complements_scores(self):
        entries = as_entries(WELFARE_MATRIX)
        criteria = criteria_from_weights(WELFARE_WEIGHTS)
        flipped = criteria_from_weights(tuple(-w for w in WELFARE_WEIGHTS))
        forward = {row.id: row.closeness for row in rank(entries, criteria).rows}
        backward = {row.id: row.closeness for row in rank(entries, flipped).rows}
        for id_ in forward:
            assert backward[id_] == pytest.approx(1.0 - forward[id_], abs=1e-12)

    @given(seed=st.integers(0, 1000))
    @settings(max_examples=30)
    def test_row_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        entries = as_entries(WELFARE_MATRIX)
        criteria = criteria_from_weights(WELFARE_WEIGHTS)
        base = {row.id: row.closeness for row in rank(entries, criteria).rows}
        perm = rng.permutation(len(entries))
        shuffled = [entries[i] for i in perm]
        permuted = {row.id: row.closeness for row in rank(shuffled, criteria).rows}
        # Column norms are float sums, so permutation shifts the last ulp.
        for id_ in base:
            assert permuted[id_] == pytest.approx(base[id_], rel=1e-12)

    def test_rerank_is_idempotent(self):
        entries = as_entries(WELFARE_MATRIX)
        criteria = criteria_from_weights(WELFARE_WEIGHTS)
        once = rank(entries, criteria)
        again = rank([(row.id, row.criteria) for row in once.rows], criteria)
        assert once.ids() == again.ids()

    def test_scores_within_unit_interval(self):
        for matrix, weights in (
            (WELFARE_MATRIX, WELFARE_WEIGHTS),
            (CAPACITY_MATRIX, CAPACITY_WEIGHTS),
        ):
            ranked = rank(as_entries(matrix), criteria_from_weights(weights))
            assert all(0.0 <= row.closeness <= 1.0 for row in ranked.rows)
            rescaled = ranked.rescaled()
            assert rescaled[0] == pytest.approx(1.0)
