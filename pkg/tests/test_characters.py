import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiqueens.characters import CharacterMultiset, CyclicGroup, enumerate_orbits, orbit_count
from semiqueens.errors import LimitExceeded


class TestCanonicalize:
    def test_sorting_example(self):
        chi = CharacterMultiset.from_values(3, [Fraction(1, 3), 0, Fraction(2, 3)])
        assert chi.pairs == ((0, 1), (1, 1), (2, 1))
        assert chi.sparsity == 2
        assert chi.k == 3

    def test_constant_character(self):
        chi = CharacterMultiset.from_values(5, [0] * 5)
        assert chi.pairs == ((0, 5),)
        assert chi.sparsity == 0
        assert chi.entropy == 0.0

    def test_zero_sum_flag(self):
        chi = CharacterMultiset.from_values(5, [1, 1, 4, 4, 0])
        assert chi.pairs == ((0, 1), (1, 2), (4, 2))
        assert chi.zero_sum  # 2*1 + 2*4 = 10 = 0 mod 5

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            CharacterMultiset.from_values(4, [0, 1, 2])

    @given(st.data())
    @settings(max_examples=120, deadline=None)
    def test_permutation_invariance_and_idempotence(self, data):
        n = data.draw(st.integers(min_value=1, max_value=9))
        values = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
        perm = data.draw(st.permutations(values))
        chi1 = CharacterMultiset.from_values(n, values)
        chi2 = CharacterMultiset.from_values(n, perm)
        assert chi1 == chi2
        again = CharacterMultiset.from_values(n, chi1.values())
        assert again == chi1


class TestShiftNormalize:
    def test_single_value_shifts_to_zero(self):
        chi = CharacterMultiset.from_values(5, [1] * 5)
        normalized, t = chi.shift_normalized()
        assert normalized.pairs == ((0, 5),)
        assert t == 4  # adding 4/5 moves 1/5 to 0

    def test_identity_when_zero_dominates(self):
        chi = CharacterMultiset.from_pairs(5, [(0, 3), (1, 2)])
        normalized, t = chi.shift_normalized()
        assert t == 0
        assert normalized == chi

    def test_tie_break_is_lexicographic(self):
        chi = CharacterMultiset.from_pairs(5, [(0, 2), (1, 2), (2, 1)])
        normalized, t = chi.shift_normalized()
        # candidates t=0 keeps ((0,2),(1,2),(2,1)); t=4 gives ((0,2),(1,1),(4,2))
        assert t == 4
        assert normalized.pairs == ((0, 2), (1, 1), (4, 2))

    def test_entropy_and_orbit_invariant_under_shift(self):
        chi = CharacterMultiset.from_pairs(7, [(0, 4), (2, 2), (5, 1)])
        for t in range(7):
            shifted = chi.shift(t)
            assert shifted.orbit_size == chi.orbit_size
            assert shifted.entropy == chi.entropy


class TestDerivedQuantities:
    def test_entropy_examples(self):
        chi = CharacterMultiset.from_pairs(4, [(1, 2), (0, 2)])
        assert abs(chi.entropy - math.log(6) / 4) < 1e-12
        chi6 = CharacterMultiset.from_pairs(6, [(1, 2), (2, 2), (0, 2)])
        assert abs(chi6.entropy - math.log(90) / 6) < 1e-12

    def test_orbit_size_examples(self):
        n = 6
        assert CharacterMultiset.from_pairs(n, [(1, 1), (0, n - 1)]).orbit_size == n
        assert CharacterMultiset.from_pairs(n, [(0, n)]).orbit_size == 1
        assert CharacterMultiset.from_pairs(7, [(1, 2), (2, 2), (0, 3)]).orbit_size == 210

    def test_orbit_sizes_sum_to_n_to_the_n(self):
        for n in range(1, 8):
            assert sum(chi.orbit_size for chi in enumerate_orbits(n)) == n**n


class TestEnumeration:
    def test_orbit_counts(self):
        assert orbit_count(3) == 10
        assert orbit_count(7) == 1716
        assert len(list(enumerate_orbits(3))) == 10
        assert len(list(enumerate_orbits(7))) == 1716

    def test_sparsity_filter(self):
        orbits = list(enumerate_orbits(5, max_sparsity=2))
        assert all(chi.sparsity <= 2 for chi in orbits)
        # multisets with >= 3 zeros: C(4+1,2) choices of 2 nonzero + smaller
        assert len(orbits) == 1 + 4 + 10

    def test_zero_sum_filter_and_entropy_range(self):
        for chi in enumerate_orbits(5, zero_sum_only=True):
            assert chi.zero_sum
        for chi in enumerate_orbits(5, entropy_range=(0.1, 0.9)):
            assert 0.1 <= chi.entropy <= 0.9

    def test_limit_guard(self):
        with pytest.raises(LimitExceeded):
            list(enumerate_orbits(10))

    def test_partitioned_streams_cover_everything(self):
        whole = [chi.text() for chi in enumerate_orbits(6)]
        pieces = []
        for offset in range(3):
            pieces.extend(chi.text() for chi in enumerate_orbits(6, offset=offset, stride=3))
        assert sorted(pieces) == sorted(whole)

    def test_uniqueness(self):
        seen = [chi.text() for chi in enumerate_orbits(6)]
        assert len(seen) == len(set(seen))


class TestTextForm:
    def test_canonical_text(self):
        chi = CharacterMultiset.from_pairs(7, [(0, 3), (1, 2), (3, 2)])
        assert chi.text() == "n=7;(0^3,1/7^2,3/7^2)"

    def test_parse_roundtrip(self):
        text = "n=7;(0^3,1/7^2,3/7^2)"
        assert CharacterMultiset.parse(text).text() == text

    def test_parse_reduced_fractions(self):
        chi = CharacterMultiset.parse("n=33;(1/3^11,2/3^11,0^11)")
        assert chi.pairs == ((0, 11), (11, 11), (22, 11))

    def test_parse_without_exponent(self):
        chi = CharacterMultiset.parse("n=3;(0,1/3,2/3)")
        assert chi.pairs == ((0, 1), (1, 1), (2, 1))

    def test_malformed_rejected(self):
        with pytest.raises(ValueError):
            CharacterMultiset.parse("nope")


class TestCyclicGroup:
    def test_arithmetic(self):
        g = CyclicGroup(7)
        assert g.add(5, 4) == 2
        assert g.neg(3) == 4
        assert g.element_sum() == 0

    def test_even_order_element_sum(self):
        assert CyclicGroup(6).element_sum() == 3
