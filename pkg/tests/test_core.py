from fractions import Fraction as F

import pytest

from affine_verifiers import (
    AffineOperator,
    AffineState,
    Interval,
    ProbabilityInterval,
    apply,
    basis,
    identity,
    validate_operator,
    validate_state,
    weight,
)
from affine_verifiers.core import as_rational, abs_bounds
from affine_verifiers.errors import ColumnSumNotOne, DimensionMismatch, SumNotOne


class TestAffineState:
    def test_negative_entries_allowed(self):
        v = validate_state([F(3, 2), F(-1, 2)])
        assert v.entries == (F(3, 2), F(-1, 2))
        assert v.norm == 2

    def test_sum_must_be_one(self):
        with pytest.raises(SumNotOne) as info:
            validate_state([F(1, 2), F(1, 3)])
        assert info.value.actual == F(5, 6)

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            validate_state([0.5, 0.5])

    def test_strings_parse_as_rationals(self):
        assert validate_state(["1/3", "2/3"]).entries == (F(1, 3), F(2, 3))
        assert as_rational("7/21") == F(1, 3)

    def test_empty_state(self):
        with pytest.raises(DimensionMismatch):
            AffineState(())

    def test_basis(self):
        assert basis(3, 2).entries == (0, 1, 0)
        with pytest.raises(DimensionMismatch):
            basis(3, 4)


class TestAffineOperator:
    def test_plain_column_sums(self):
        op = validate_operator([[2, 0], [-1, 1]])
        assert op.dim == 2
        assert op.column(1) == (2, -1)

    def test_bad_column_sum_names_column(self):
        with pytest.raises(ColumnSumNotOne) as info:
            validate_operator([[1, F(1, 2)], [0, F(1, 3)]])
        assert info.value.col_index == 2
        assert info.value.actual == F(5, 6)

    def test_abs_column_sum_is_not_enough(self):
        # |2| + |-1| = 3 but the signed sum is 1, so it is accepted; the reverse fails
        validate_operator([[2, 0], [-1, 1]])
        with pytest.raises(ColumnSumNotOne):
            validate_operator([[F(1, 2), 0], [F(1, 2) - 1, 1]])

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            validate_operator([[1, 0, 0], [0, 1, 0]])

    def test_apply_by_hand(self):
        op = validate_operator([[1, 0, 0], [1, 2, 0], [-1, -1, 1]])
        v = validate_state([1, 3, -3])
        # (1, 1 + 6, -1 - 3 - 3)
        assert apply(op, v).entries == (1, 7, -7)

    def test_apply_dimension(self):
        with pytest.raises(DimensionMismatch):
            apply(identity(2), basis(3, 1))

    def test_composition_matches_sequential_apply(self):
        a = validate_operator([[2, 0], [-1, 1]])
        b = validate_operator([[F(1, 2), 3], [F(1, 2), -2]])
        v = validate_state([F(5, 7), F(2, 7)])
        assert apply(a @ b, v) == apply(a, apply(b, v))

    def test_power(self):
        a = validate_operator([[2, 0], [-1, 1]])
        assert (a ** 3).rows == ((8, 0), (-7, 1))
        assert a ** 0 == identity(2)


class TestWeighting:
    def test_probabilities_are_relative_l1(self):
        outcomes = weight(validate_state([F(3, 2), F(-1, 2)]))
        assert [(o.index, o.probability) for o in outcomes] == [(1, F(3, 4)), (2, F(1, 4))]
        assert outcomes[0].post_state == basis(2, 1)

    def test_zero_entries_have_no_outcome(self):
        outcomes = weight(validate_state([0, 1, 0]))
        assert [(o.index, o.probability) for o in outcomes] == [(2, 1)]

    def test_accepting_weight_of_protocol_shape(self):
        # (1, K, -K, b, -b) with K = 0: accept entry 1 with 1 / (1 + 2|b|)
        b = F(1, 7)
        outcomes = weight(validate_state([1, 0, 0, b, -b]))
        assert outcomes[0].probability == 1 / (1 + 2 * b)


class TestIntervals:
    def test_arithmetic(self):
        x = Interval(F(1, 3), F(1, 2))
        assert x * 6 - 1 == Interval(1, 2)
        assert x * -2 == Interval(-1, F(-2, 3))
        assert (x * Interval(-1, 2)) == Interval(F(-1, 2), 1)

    def test_abs_bounds_straddling_zero(self):
        assert Interval(-1, 2).abs_bounds() == (0, 2)
        assert abs_bounds(Interval(F(-3), F(-1))) == (1, 3)
        assert abs_bounds(F(-2, 5)) == (F(2, 5), F(2, 5))

    def test_probability_interval_range(self):
        with pytest.raises(ValueError):
            ProbabilityInterval(F(-1, 10), F(1, 2))
        with pytest.raises(ValueError):
            ProbabilityInterval(F(1, 2), F(11, 10))
        assert ProbabilityInterval.point(F(2, 7)).is_point

    def test_empty_interval(self):
        with pytest.raises(ValueError):
            Interval(1, 0)

    def test_operator_str_is_grid(self):
        text = str(AffineOperator(((2, 0), (-1, 1))))
        assert text.splitlines() == [" 2  0", "-1  1"]
