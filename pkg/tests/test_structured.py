from fractions import Fraction
from math import factorial

import mpmath as mp
import pytest

from semiqueens.characters import CharacterMultiset, enumerate_orbits
from semiqueens.errors import LimitExceeded
from semiqueens.fourier import fourier_by_partitions
from semiqueens.oracles import fourier_brute
from semiqueens.structured import (
    structured_coefficient,
    structured_data,
    third_division_character,
)

N33_SCALED = -187884911996935901282304000000  # pinned from the dp route, checked against dft below


class TestStructuredData:
    def test_third_division(self):
        chi = third_division_character(33)
        assert chi.text() == "n=33;(0^11,1/3^11,2/3^11)"
        d, values, mults = structured_data(chi)
        assert (d, values, mults) == (3, (0, 1, 2), (11, 11, 11))

    def test_nontrivial_gcd(self):
        chi = CharacterMultiset.from_pairs(6, [(2, 3), (4, 2), (0, 1)])
        d, values, mults = structured_data(chi)
        assert d == 3 and values == (0, 1, 2)


class TestDpRoute:
    def test_n3(self):
        chi = CharacterMultiset.from_values(3, [1, 2, 0])
        assert structured_coefficient(chi, strategy="dp").scaled == -3

    def test_matches_brute_on_divisor_characters(self):
        # n=6, d in {2,3,6} characters with k <= 3 distinct values
        for chi in enumerate_orbits(6):
            d, values, _ = structured_data(chi)
            if len(values) <= 3:
                got = structured_coefficient(chi, strategy="dp").scaled
                want = fourier_brute(chi).to_int()
                if want is None:
                    want = fourier_brute(chi)
                assert got == want, chi.text()

    def test_constant_character(self):
        chi = CharacterMultiset.from_pairs(9, [(0, 9)])
        assert structured_coefficient(chi, strategy="dp").scaled == factorial(9)

    def test_n33_value(self):
        assert structured_coefficient(third_division_character(33), strategy="dp").scaled == N33_SCALED

    def test_matches_partition_formula_midsize(self):
        chi = CharacterMultiset.from_pairs(15, [(5, 2), (10, 2), (0, 11)])
        got = structured_coefficient(chi, strategy="dp").scaled
        assert got == fourier_by_partitions(chi).scaled

    def test_k_limit(self):
        chi = CharacterMultiset.from_pairs(8, [(1, 1), (2, 1), (3, 1), (6, 5)])
        with pytest.raises(LimitExceeded):
            structured_coefficient(chi, strategy="dp")


class TestDftRoute:
    def test_n3(self):
        chi = CharacterMultiset.from_values(3, [1, 2, 0])
        value = structured_coefficient(chi, strategy="dft")
        scaled = value.approx.re * 27
        assert abs(scaled - (-3)) < 1e-40
        assert value.approx.imag_bound() < 1e-40

    def test_dp_dft_cross_agreement_n33(self):
        chi = third_division_character(33)
        dp = structured_coefficient(chi, strategy="dp")
        dft = structured_coefficient(chi, strategy="dft", rel_tol=1e-22)
        with mp.workprec(512):
            exact = mp.mpf(dp.scaled) / mp.mpf(33) ** 33
            rel = abs(dft.approx.re - exact) / abs(exact)
            assert rel < 1e-20
        # the reported ball contains the exact value
        assert dft.approx.contains_exact(Fraction(dp.scaled, 33**33))

    def test_two_distinct_values_path(self):
        # k = 2: one grid variable; n=4, d=2, chi = ((1/2)^2, 0^2)
        chi = CharacterMultiset.from_pairs(4, [(2, 2), (0, 2)])
        dft = structured_coefficient(chi, strategy="dft")
        want = fourier_brute(chi).to_int()
        assert abs(dft.approx.re * 4**4 - want) < 1e-30

    def test_zero_sum_false_short_circuits(self):
        chi = CharacterMultiset.from_pairs(6, [(2, 1), (0, 5)])
        value = structured_coefficient(chi, strategy="dft")
        assert value.scaled == 0

    def test_escalation_metadata(self):
        chi = third_division_character(9)
        value = structured_coefficient(chi, strategy="dft", precision=64)
        assert value.meta["escalations"][0]["precision"] == 64
        brute = fourier_brute(chi).to_int()
        assert abs(value.approx.re * mp.mpf(9) ** 9 - brute) < 1e-6

    def test_grid_budget_guard(self):
        # the 3003 grid (3004^2 ~ 9e6 points) is inside the budget; a k=4 grid is not
        chi4 = CharacterMultiset.from_pairs(600, [(150, 2), (300, 2), (450, 2), (0, 594)])
        with pytest.raises(LimitExceeded):
            structured_coefficient(chi4, strategy="dft")

    def test_threaded_result_identical(self):
        chi = third_division_character(12)
        one = structured_coefficient(chi, strategy="dft", threads=1)
        four = structured_coefficient(chi, strategy="dft", threads=4)
        assert one.approx.re == four.approx.re
        assert one.approx.err == four.approx.err


class TestAuto:
    def test_auto_prefers_dp_small(self):
        chi = third_division_character(33)
        assert structured_coefficient(chi).method == "structured-dp"

    def test_divisor_validation(self):
        chi = third_division_character(33)
        d, _, _ = structured_data(chi)
        assert 33 % d == 0
