import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from semiqueens.exactnum import (
    Cyclotomic,
    LogMagnitude,
    TrackedComplex,
    cyclotomic_polynomial,
    log_combinatorial,
    multinomial,
)


class TestCyclotomic:
    def test_phi_polynomials(self):
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(2) == (1, 1)
        assert cyclotomic_polynomial(3) == (1, 1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)

    def test_root_sum_vanishes(self):
        v = Cyclotomic.from_int(3, 1) + Cyclotomic.root(3, 1) + Cyclotomic.root(3, 2)
        assert v.is_zero()

    def test_zeta4_squared_is_minus_one(self):
        v = Cyclotomic.root(4, 1) * Cyclotomic.root(4, 1)
        assert v == Cyclotomic.from_int(4, -1)

    def test_one_plus_zeta5_nonzero(self):
        v = Cyclotomic.from_int(5, 1) + Cyclotomic.root(5, 1)
        assert not v.is_zero()

    def test_conjugation_fixes_reals(self):
        v = Cyclotomic(5, (2, 3, -1, -1, 3))  # palindromic coefficients: real value
        assert v.is_real()
        assert v.conjugate() == v

    def test_to_int(self):
        v = Cyclotomic(3, (0, 3, 3))  # 3(zeta + zeta^2) = -3
        assert v.to_int() == -3
        assert Cyclotomic.root(5, 1).to_int() is None

    def test_embedding_and_mixed_orders(self):
        half = Cyclotomic.root(2, 1)  # -1
        v = Cyclotomic.root(4, 2)
        assert half == v
        product = Cyclotomic.root(3, 1) * Cyclotomic.root(2, 1)
        assert product.order == 6

    def test_zero_eval_and_tracked(self):
        v = Cyclotomic.root(3, 1)
        t = v.to_tracked(128)
        with mp.workprec(192):
            assert abs(t.re + mp.mpf(1) / 2) < mp.mpf(2) ** -120
            assert abs(t.im - mp.sin(2 * mp.pi / 3)) < mp.mpf(2) ** -120
        assert float(t.err) < 1e-36

    def test_tracked_of_real_combination(self):
        # 3 zeta_3 + 3 zeta_3^2 evaluates to -3
        v = Cyclotomic(3, (0, 3, 3)).to_tracked(128)
        assert v.contains_exact(Fraction(-3))
        assert float(v.imag_bound()) < 1e-35

    def test_serialization_roundtrip(self):
        v = Cyclotomic(6, (1, -2, 0, 4, 0, 0))
        assert Cyclotomic.deserialize(v.serialize()) == v


class TestTrackedComplex:
    def test_ball_soundness_random_trials(self):
        rng = random.Random(20240809)
        with mp.workprec(64):  # deliberately coarse so rounding terms matter
            for _ in range(10_000):
                a = Fraction(rng.randint(-999, 999), rng.randint(1, 99))
                b = Fraction(rng.randint(-999, 999), rng.randint(1, 99))
                c = Fraction(rng.randint(-999, 999), rng.randint(1, 99))
                d = Fraction(rng.randint(-999, 999), rng.randint(1, 99))
                x = TrackedComplex.from_exact(a, b)
                y = TrackedComplex.from_exact(c, d)
                z = x * y + x - y.conjugate()
                exact_re = a * c - b * d + a - c
                exact_im = a * d + b * c + b + d
                assert z.contains_exact(exact_re, exact_im)

    def test_is_zero_consistency(self):
        v = Cyclotomic.from_int(7, 1) - Cyclotomic.from_int(7, 1)
        assert v.is_zero()
        t = v.to_tracked(128)
        assert t.abs_upper() <= t.err + mp.mpf(2) ** -100


class TestLogMagnitude:
    def test_multiplication_adds_logs(self):
        a = LogMagnitude.from_fraction(Fraction(3, 4))
        b = LogMagnitude.from_fraction(Fraction(-8, 9))
        c = a * b
        assert c.sign == -1
        assert abs(float(c.ln_abs) - math.log(2 / 3)) < 1e-12

    def test_zero_and_pow(self):
        z = LogMagnitude.zero()
        assert (z * LogMagnitude.from_int(5)).sign == 0
        p = LogMagnitude.from_int(-2) ** 3
        assert p.sign == -1
        assert abs(float(p.ln_abs) - 3 * math.log(2)) < 1e-12

    def test_serialize_has_15_digits(self):
        doc = LogMagnitude.from_int(10**6).serialize()
        assert doc["sign"] == 1
        assert len(doc["ln_abs"].replace(".", "").replace("-", "").lstrip("0")) >= 14

    def test_to_float(self):
        v = LogMagnitude.from_fraction(Fraction(-1, 8))
        assert abs(v.to_float() + 0.125) < 1e-15


class TestLogCombinatorial:
    def test_factorial_small(self):
        v = log_combinatorial("factorial", 5)
        assert abs(float(v.ln_abs) - math.log(120)) < 1e-12

    def test_multinomial_identity(self):
        assert multinomial(7, [2, 2, 3]) == 210
        v = log_combinatorial("multinomial", 6, (2, 2, 2))
        assert abs(float(v.ln_abs) - math.log(90)) < 1e-12

    def test_multinomial_of_whole_set_is_zero_log(self):
        v = log_combinatorial("multinomial", 9, (9,))
        assert float(v.ln_abs) == 0.0

    def test_paper_half_log_multinomial_3003(self):
        v = log_combinatorial("multinomial", 3003, (1001, 1001, 1001))
        half = -float(v.ln_abs) / 2
        assert abs(half - (-1645.46757758)) < 1e-6

    def test_factorial_exceeds_n_over_e_power(self):
        for n in range(1, 400, 13):
            v = float(log_combinatorial("factorial", n).ln_abs)
            assert v > n * math.log(n) - n

    def test_binomial(self):
        v = log_combinatorial("binomial", 30, 12)
        assert abs(float(v.ln_abs) - math.log(math.comb(30, 12))) < 1e-12
