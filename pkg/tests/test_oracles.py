import cmath
import itertools
from math import factorial, gcd

import pytest

from semiqueens.characters import CharacterMultiset, enumerate_orbits
from semiqueens.errors import EvenOrderError, LimitExceeded
from semiqueens.exactnum import Cyclotomic
from semiqueens.oracles import (
    GroupSpec,
    count_general_group,
    count_orthomorphisms,
    count_triples_direct,
    fourier_brute,
    monte_carlo_collision,
)


def reference_orthomorphism_count(n: int) -> int:
    """All n! permutations checked directly; the slow inline referee."""
    count = 0
    for pi in itertools.permutations(range(n)):
        if len({(pi[x] - x) % n for x in range(n)}) == n:
            count += 1
    return count


class TestOrthomorphisms:
    def test_small_counts_against_inline_referee(self):
        for n in (1, 2, 3, 4, 5, 6):
            assert count_orthomorphisms(n).orthomorphisms == reference_orthomorphism_count(n)

    def test_n3(self):
        result = count_orthomorphisms(3)
        assert result.orthomorphisms == 3
        assert result.s_n == 18

    def test_even_is_zero(self):
        assert count_orthomorphisms(4).orthomorphisms == 0
        assert count_orthomorphisms(4).s_n == 0

    def test_n5(self):
        result = count_orthomorphisms(5)
        assert result.orthomorphisms == 15
        assert result.s_n == 1800

    def test_known_larger_counts(self):
        # pinned from this same oracle; n=7 cross-checked by the quadratic
        # counter below, n=9 by the general-group oracle
        assert count_orthomorphisms(7).orthomorphisms == 133
        assert count_orthomorphisms(9).orthomorphisms == 2025

    def test_count_divisible_by_n(self):
        for n in (3, 5, 7, 9):
            assert count_orthomorphisms(n).orthomorphisms % n == 0

    def test_shift_symmetry_reduction_matches(self):
        for n in (3, 5, 7, 9, 11):
            full = count_orthomorphisms(n).orthomorphisms
            reduced = count_orthomorphisms(n, use_shift_symmetry=True).orthomorphisms
            assert full == reduced

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            count_orthomorphisms(16)


class TestDirectTriples:
    def test_small(self):
        assert count_triples_direct(2) == 0
        assert count_triples_direct(3) == 18

    def test_matches_backtracking(self):
        for n in (1, 3, 5):
            assert count_triples_direct(n) == count_orthomorphisms(n).s_n

    def test_n7_matches_backtracking(self):
        assert count_triples_direct(7) == factorial(7) * 133

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            count_triples_direct(8)


class TestGeneralGroups:
    def test_cyclic_cases_match(self):
        assert count_general_group(GroupSpec.cyclic(3)) == 18
        assert count_general_group(GroupSpec.cyclic(5)) == 1800
        assert count_general_group(GroupSpec.cyclic(9)) == factorial(9) * 2025

    def test_three_by_three(self):
        # pinned by this backtracking oracle before anything else consumed it
        assert count_general_group(GroupSpec.parse("3x3")) == factorial(9) * 2241

    def test_even_rejected_with_distinct_error(self):
        with pytest.raises(EvenOrderError):
            count_general_group(GroupSpec.parse("2x3"))

    def test_order_limit(self):
        with pytest.raises(LimitExceeded):
            count_general_group(GroupSpec.cyclic(11))


class TestMonteCarlo:
    def test_seeded_reproducibility_and_worker_independence(self):
        a = monte_carlo_collision(9, 10_000, seed=7)
        b = monte_carlo_collision(9, 10_000, seed=7)
        c = monte_carlo_collision(9, 10_000, seed=7, threads=4)
        assert a == b == c

    def test_even_n_exact_zero(self):
        p, err = monte_carlo_collision(8, 10_000, seed=1)
        assert p == 0.0 and err == 0.0

    def test_n3_close_to_half(self):
        p, err = monte_carlo_collision(3, 100_000, seed=11)
        assert abs(p - 0.5) <= 3 * err

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            monte_carlo_collision(5, 10, seed=0)


def reference_scaled_coefficient(values, n) -> complex:
    """Literal injection sum via floating complex exponentials."""
    m = len(values)
    total = 0j
    for xs in itertools.permutations(range(n), m):
        phase = sum(b * x for b, x in zip(values, xs))
        total += cmath.exp(-2j * cmath.pi * phase / n)
    return total * factorial(n - m)


class TestBruteFourier:
    def test_n3_hand_value(self):
        chi = CharacterMultiset.from_values(3, [1, 2, 0])
        scaled = fourier_brute(chi)
        assert scaled == Cyclotomic(3, (0, 3, 3))  # 3 zeta + 3 zeta^2
        assert scaled.to_int() == -3

    def test_non_zero_sum_vanishes(self):
        chi = CharacterMultiset.from_values(5, [1, 0, 0, 0, 0])
        assert fourier_brute(chi).is_zero()

    def test_constant_character_counts_bijections(self):
        for n in (3, 4, 5):
            chi = CharacterMultiset.from_values(n, [0] * n)
            assert fourier_brute(chi).to_int() == factorial(n)

    def test_sparse_and_full_paths_agree(self):
        for n in (5, 7):
            for chi in enumerate_orbits(n, max_sparsity=4):
                sparse = fourier_brute(chi, path="sparse")
                full = fourier_brute(chi, path="full")
                assert sparse == full, chi.text()

    def test_matches_reference_complex_sum(self):
        for n in (5, 6, 7):
            for chi in list(enumerate_orbits(n, max_sparsity=3))[:25]:
                got = fourier_brute(chi).to_tracked(96)
                want = reference_scaled_coefficient(chi.nonzero_values(), n)
                assert abs(complex(float(got.re), float(got.im)) - want) < 1e-6

    def test_realness(self):
        for chi in enumerate_orbits(7, max_sparsity=3):
            assert fourier_brute(chi).is_real()

    def test_automorphism_invariance(self):
        for n in (5, 7):
            for chi in enumerate_orbits(n, max_sparsity=3):
                base = fourier_brute(chi)
                for u in range(2, n):
                    if gcd(u, n) == 1:
                        assert fourier_brute(chi.scale(u)) == base

    def test_infeasible_raises(self):
        chi = CharacterMultiset.from_pairs(49, [(1, 6), (43, 3), (0, 40)])
        with pytest.raises(LimitExceeded):
            fourier_brute(chi, path="sparse")
