from fractions import Fraction

import pytest

from hdring.combinatorics import (
    delete_entry_at,
    delete_jrow,
    delete_svec_entry,
    delete_value,
    e_symbol,
    entry_position,
    first_position,
    flatten,
    lemma_basis_indices,
    merge_jrows,
    normalize_svec,
    solution_indices,
    solution_weight,
    upper_sequences,
)
from hdring.params import Truncation


class TestSolutionWeight:
    def test_pure_multiplicity_is_one(self):
        for s in range(5):
            assert solution_weight({}, (s,)) == 1

    def test_single_row_inverse(self):
        for j in range(1, 5):
            assert solution_weight({(1, 1): j}, ()) == Fraction(1, j)
        assert solution_weight({(1, 1): 2, (1, 2): 1}, ()) == Fraction(1, 3)

    def test_empty_data(self):
        assert solution_weight({}, ()) == 1

    def test_padding_invariance(self):
        base = solution_weight({(1, 1): 2}, (1, 1))
        assert solution_weight({(1, 1): 2, (2, 1): 0, (1, 3): 0}, (1, 1, 0, 0)) == base

    def test_mixed_example(self):
        # rows {1: 1}, svec (1,): one odd factor in row 0 and one h in row 1
        assert solution_weight({(1, 1): 1}, (1,)) == Fraction(1, 2)


class TestESymbol:
    def test_sorting_sign(self):
        assert e_symbol((2,), (1,)) == (-1, (1, 2))

    def test_duplicate_vanishes(self):
        assert e_symbol((1,), (1,)) is None

    def test_empty_gives_empty_set(self):
        assert e_symbol((), ()) == (1, ())

    def test_adjacent_swap_flips_sign(self):
        s1, set1 = e_symbol((3,), (1, 2))
        s2, set2 = e_symbol((3,), (2, 1))
        assert set1 == set2 and s1 == -s2


class TestPositions:
    def test_first_position(self):
        iseq = ((3, 5), ())
        assert first_position(3, iseq) == 0
        assert first_position(5, iseq) == 1

    def test_first_position_three(self):
        assert first_position(7, ((2,), (4, 7))) == 2

    def test_missing_value_is_an_error(self):
        with pytest.raises(ValueError):
            first_position(9, ((1,),))

    def test_entry_position(self):
        iseq = ((2,), (1, 2))
        assert entry_position(iseq, 0, 1) == 0
        assert entry_position(iseq, 1, 1) == 1
        assert entry_position(iseq, 1, 2) == 2


class TestSurgeries:
    def test_merge_rows(self):
        assert merge_jrows({(1, 1): 1, (2, 1): 1}, 1) == {(1, 1): 2}

    def test_delete_svec_entry(self):
        assert delete_svec_entry((0, 1), 0) == (1,)

    def test_delete_value(self):
        assert delete_value(5, ((3, 5),)) == ((3,),)

    def test_delete_jrow(self):
        assert delete_jrow({(1, 1): 2, (2, 2): 1}, 1) == {(1, 2): 1}

    def test_delete_entry_at_respects_blocks(self):
        assert delete_entry_at(((2,), (2,)), 1) == ((2,), ())

    def test_normalize_strips_trailing_zeros(self):
        assert normalize_svec((1, 0, 0)) == (1,)


class TestEnumerations:
    def test_r0_s1_listing(self):
        p = Truncation(2, 1, 3)
        got = list(solution_indices(0, 1, p))
        assert got == [({}, (1,), ((1,),)), ({}, (1,), ((2,),))]

    def test_r0_s0_single(self):
        assert list(solution_indices(0, 0, Truncation(1, 1, 3))) == [({}, (), ())]

    def test_r1_s0_count(self):
        got = list(solution_indices(1, 0, Truncation(1, 1, 3)))
        assert len(got) == 2
        assert sorted(sum(j.values()) for j, _, _ in got) == [1, 2]

    def test_streams_deterministic_and_duplicate_free(self):
        p = Truncation(2, 2, 4)
        one = list(solution_indices(2, 1, p))
        two = list(solution_indices(2, 1, p))
        assert one == two
        frozen = [(tuple(sorted(j.items())), s, i) for j, s, i in one]
        assert len(set(frozen)) == len(frozen)

    def test_degree_bound_respected(self):
        p = Truncation(2, 2, 4)
        for j, svec, _ in solution_indices(1, 1, p):
            assert sum(j.values()) + sum(svec) < p.m

    def test_lemma_basis_includes_empty_rows(self):
        p = Truncation(2, 2, 4)
        full = list(lemma_basis_indices(1, 1, p))
        assert any(not j for j, _, _ in full)
        narrowed = list(solution_indices(1, 1, p))
        assert all(j for j, _, _ in narrowed)
        assert len(full) > len(narrowed)


class TestUpperSequences:
    def test_single_supported_column(self):
        assert list(upper_sequences(1, {(1, 1): 2})) == [(1,)]

    def test_product_of_supports(self):
        j = {(1, 1): 1, (2, 1): 1, (2, 2): 1}
        assert list(upper_sequences(2, j)) == [(1, 1), (1, 2)]

    def test_r0_yields_empty(self):
        assert list(upper_sequences(0, {})) == [()]

    def test_unsupported_row_yields_nothing(self):
        assert list(upper_sequences(2, {(1, 1): 1})) == []
