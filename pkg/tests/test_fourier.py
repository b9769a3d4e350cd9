from fractions import Fraction
from math import factorial

import pytest

from semiqueens.characters import CharacterMultiset, enumerate_orbits
from semiqueens.errors import LimitExceeded, MemoCapacityExceeded
from semiqueens.fourier import (
    FourierRecursion,
    cube_sum,
    fourier_by_partitions,
    fourier_by_recursion,
    parseval_sum,
    spectrum,
    squarefree_coefficient_check,
)
from semiqueens.oracles import count_orthomorphisms, count_triples_direct, fourier_brute


def opposite_pair_character(n: int, r: int = 1) -> CharacterMultiset:
    return CharacterMultiset.from_pairs(n, [(r, 1), (n - r, 1), (0, n - 2)])


class TestPartitionFormula:
    def test_opposite_pair_closed_form(self):
        for n in (3, 5, 7, 9):
            value = fourier_by_partitions(opposite_pair_character(n)).value
            assert value == Fraction(-n * factorial(n - 2), n**n)

    def test_matches_n3_brute(self):
        assert fourier_by_partitions(CharacterMultiset.from_values(3, [1, 2, 0])).value == Fraction(-1, 9)

    def test_zero_sum_false_vanishes(self):
        chi = CharacterMultiset.from_pairs(7, [(1, 1), (2, 1), (0, 5)])
        assert fourier_by_partitions(chi).value == 0

    def test_two_pair_value_against_brute(self):
        n = 7
        chi = CharacterMultiset.from_pairs(n, [(1, 1), (6, 1), (2, 1), (5, 1), (0, 3)])
        value = fourier_by_partitions(chi).value
        assert value * n**n == fourier_brute(chi).to_int()
        # sign is positive and the size is (n-4)! n^2-ish
        assert value > 0

    def test_agrees_with_brute_on_all_small_orbits(self):
        for n in (5, 7):
            for chi in enumerate_orbits(n, max_sparsity=4):
                assert fourier_by_partitions(chi).value * n**n == fourier_brute(chi).to_int()


class TestRecursion:
    def test_base_cases(self):
        n = 7
        zero = CharacterMultiset.from_pairs(n, [(0, n)])
        assert fourier_by_recursion(zero).value == Fraction(factorial(n), n**n)
        one_sparse = CharacterMultiset.from_pairs(n, [(3, 1), (0, n - 1)])
        assert fourier_by_recursion(one_sparse).value == 0

    def test_opposite_pair_single_step(self):
        n = 9
        value = fourier_by_recursion(opposite_pair_character(n)).value
        assert value == Fraction(-factorial(n), (n - 1) * n**n)
        assert value == Fraction(-n * factorial(n - 2), n**n)

    def test_matches_partition_formula_everywhere(self):
        for n in (5, 7):
            engine = FourierRecursion(n)
            for chi in enumerate_orbits(n):
                assert engine.coefficient(chi).scaled == fourier_by_partitions(chi).scaled, chi.text()

    def test_random_m4_at_n11(self):
        n = 11
        engine = FourierRecursion(n)
        for chi in enumerate_orbits(n, max_sparsity=4, limit=11, stride=97):
            assert engine.coefficient(chi).scaled == fourier_by_partitions(chi).scaled

    def test_memo_reuse(self):
        engine = FourierRecursion(7)
        for chi in enumerate_orbits(7, max_sparsity=3):
            engine.coefficient(chi)
        stats = engine.stats()
        assert stats["hits"] > 0 and stats["size"] > 0

    def test_memo_capacity(self):
        engine = FourierRecursion(7, memo_limit=2)
        with pytest.raises(MemoCapacityExceeded):
            for chi in enumerate_orbits(7, max_sparsity=5):
                engine.coefficient(chi)

    def test_even_n_keys_not_shift_folded(self):
        # at even order a dual shift flips the sign: (1/2,1/2) vs (0,0) at n=2
        n = 4
        chi = CharacterMultiset.from_pairs(n, [(2, 2), (0, 2)])
        value = fourier_by_recursion(chi, FourierRecursion(n)).value
        brute = fourier_brute(chi).to_int()
        assert value * n**n == brute


class TestInvariants:
    def test_shift_invariance_exhaustive(self):
        for n in (3, 5, 7):
            for chi in enumerate_orbits(n):
                base = fourier_by_partitions(chi).scaled
                for t in range(1, n):
                    assert fourier_by_partitions(chi.shift(t)).scaled == base

    def test_trivial_bound(self):
        for n in (5, 7):
            cap = Fraction(factorial(n), n**n)
            for chi, value in spectrum(n):
                assert abs(value) <= cap

    def test_vanishing_off_zero_sum(self):
        for chi, value in spectrum(7):
            if not chi.zero_sum:
                assert value == 0


class TestAggregates:
    def test_parseval_exact(self):
        assert parseval_sum(3) == Fraction(6, 27)
        assert parseval_sum(5) == Fraction(120, 5**5)
        assert parseval_sum(7) == Fraction(5040, 7**7)

    def test_cube_sum_counts_triples(self):
        assert cube_sum(3) * 3**6 == 18
        assert cube_sum(5) * 5**10 == 1800
        assert cube_sum(7) * 7**14 == count_triples_direct(7)

    def test_cube_sum_matches_orthomorphism_oracle(self):
        assert cube_sum(7) * 7**14 == count_orthomorphisms(7).s_n

    def test_spectrum_limit(self):
        with pytest.raises(LimitExceeded):
            spectrum(9)


class TestSquarefreeCoefficientIdentity:
    def test_n3(self):
        assert squarefree_coefficient_check(CharacterMultiset.from_values(3, [1, 2, 0]))

    def test_constant_character(self):
        assert squarefree_coefficient_check(CharacterMultiset.from_values(3, [0, 0, 0]))

    def test_even_diagnostic_n4(self):
        chi = CharacterMultiset.from_pairs(4, [(2, 2), (0, 2)])
        assert squarefree_coefficient_check(chi)

    def test_all_orbits_n4(self):
        for chi in enumerate_orbits(4):
            assert squarefree_coefficient_check(chi), chi.text()

    def test_size_guard(self):
        with pytest.raises(LimitExceeded):
            squarefree_coefficient_check(CharacterMultiset.from_pairs(6, [(0, 6)]))
