"""Main-term machinery: pairing structure, sparse cube sums, singular series.

For even m the sum of coeff(chi)^3 over m-sparse characters is governed
by characters killed by a unique perfect pairing; their count and common
value produce the main term

    (-1)^(m/2) / (2^(m/2) (m/2)!) * n!^3 / n^(3n),

and the alternating series sum_m (-1)^m / (2^m m!) converges to e^(-1/2),
the constant in the final count.  Everything here is exact rational
except the explicitly transcendental series value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Sequence

import mpmath as mp

from .characters import CharacterMultiset
from .errors import LimitExceeded
from .exactnum import LogMagnitude, multinomial
from .fourier import fourier_by_partitions, scaled_partition_sum, spectrum
from .partitions import killing_partitions
from .reports import BoundReport

SPARSE_TUPLE_LIMIT_M = 4
SPARSE_TUPLE_LIMIT_N = 31


@dataclass(frozen=True)
class MainTermReport:
    m: int
    n: int
    coefficient: Fraction  # (-1)^(m/2)/(2^(m/2)(m/2)!), or 0 for odd m
    main_value: Fraction  # coefficient * n!^3 / n^(3n)
    exact_sum: Fraction | None = None

    @property
    def error_ratio(self) -> float | None:
        """|exact - main| * n * n^(3n) / n!^3, the measured O_m(1/n) constant."""
        if self.exact_sum is None:
            return None
        diff = abs(self.exact_sum - self.main_value)
        return float(diff * self.n * Fraction(self.n ** (3 * self.n), factorial(self.n) ** 3))

    def main_log(self) -> LogMagnitude:
        return LogMagnitude.from_fraction(self.main_value)


def main_term(m: int, n: int) -> MainTermReport:
    if m % 2:
        coeff = Fraction(0)
    else:
        half = m // 2
        coeff = Fraction((-1) ** half, 2**half * factorial(half))
    scale = Fraction(factorial(n) ** 3, n ** (3 * n))
    return MainTermReport(m, n, coeff, coeff * scale)


def perfect_pairing_count(m: int) -> int:
    """(m-1)(m-3)...1, the number of perfect pairings of m labelled points."""
    if m < 0 or m % 2:
        raise ValueError("perfect pairings need even m >= 0")
    return factorial(m) // (2 ** (m // 2) * factorial(m // 2))


def sparse_cube_sum(m: int, n: int, long: bool = False) -> Fraction:
    """Exact sum of coeff(chi)^3 over characters with exactly m nonzero values.

    Small n traverses the full spectrum; beyond that the permutation
    factor C(n,m) multiplies an orbit-reduced sum over value multisets
    computed with the partition formula (m <= 4, n <= 31).
    """
    if m == 0:
        return Fraction(factorial(n), n**n) ** 3
    if n <= (9 if long else 7):
        total = Fraction(0)
        for chi, value in spectrum(n, long):
            if chi.sparsity == m:
                total += chi.orbit_size * value**3
        return total
    if m > SPARSE_TUPLE_LIMIT_M or n > SPARSE_TUPLE_LIMIT_N:
        raise LimitExceeded(
            f"sparse cube sums need m <= {SPARSE_TUPLE_LIMIT_M} and n <= {SPARSE_TUPLE_LIMIT_N} beyond the exhaustive range"
        )
    total = Fraction(0)
    scale = Fraction(1, n**n) ** 3
    for values in combinations_with_replacement(range(1, n), m):
        if sum(values) % n:
            continue  # coefficient vanishes off the zero-sum hyperplane
        counts: dict[int, int] = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        orderings = multinomial(m, list(counts.values()))
        scaled = scaled_partition_sum(values, n)
        total += orderings * Fraction(scaled) ** 3 * scale
    return comb(n, m) * total


def main_vs_exact(m: int, n: int, long: bool = False) -> MainTermReport:
    base = main_term(m, n)
    return MainTermReport(m, n, base.coefficient, base.main_value, sparse_cube_sum(m, n, long))


def singular_series(terms: int) -> mp.mpf:
    """sum_{m=0}^{terms} (-1)^m / (2^m m!); converges to e^(-1/2)."""
    total = Fraction(0)
    for m in range(terms + 1):
        term = Fraction(1, 2**m * factorial(m))
        total += -term if m % 2 else term
    with mp.workdps(40):
        return mp.mpf(total.numerator) / total.denominator


# ---------------------------------------------------------------------------
# Pointwise structure checks
# ---------------------------------------------------------------------------


def max_parts_bound_report(chi: CharacterMultiset) -> BoundReport:
    """|coeff| <= (n-m)!/n^n * (sum_P |mu(P)|) * n^k, k = max killing-partition parts."""
    n, m = chi.n, chi.sparsity
    values = chi.nonzero_values()
    parts = list(killing_partitions(values, n))
    abs_mu = sum(abs(p.mobius()) for p in parts)
    max_parts = max((len(p) for p in parts), default=0)
    bound = Fraction(factorial(n - m), n**n) * abs_mu * n**max_parts if parts else Fraction(0)
    measured = abs(fourier_by_partitions(chi).value)
    report = BoundReport.build(
        f"max-parts {chi.text()}",
        LogMagnitude.from_fraction(measured),
        LogMagnitude.from_fraction(bound),
        k=max_parts,
        killing_partitions=len(parts),
        exact_ok=measured <= bound,
    )
    return report


def uniquely_paired_character(n: int, m: int) -> CharacterMultiset:
    """(1, -1, 2, -2, ..., m/2, -m/2, 0^(n-m)): killed by a unique perfect pairing."""
    if m % 2 or m < 2:
        raise ValueError("need even m >= 2")
    if n <= 2 * (m // 2) + 1:
        raise ValueError("n too small for distinct pairs")
    pairs = [(j, 1) for j in range(1, m // 2 + 1)]
    pairs += [(n - j, 1) for j in range(1, m // 2 + 1)]
    pairs.append((0, n - m))
    return CharacterMultiset.from_pairs(n, pairs)


def unique_pairing_report(chi: CharacterMultiset, pin: float | Fraction = 2) -> BoundReport:
    """Exact relative error E of coeff against the perfect-pairing prediction.

    Requires the killing structure to contain exactly one perfect pairing;
    reports n*|E| against the pinned per-m constant so grids across n
    expose the O(1/n) decay as a regression test.
    """
    n, m = chi.n, chi.sparsity
    if m % 2 or m == 0 or m > 8:
        raise ValueError("unique-pairing analysis needs even m with 2 <= m <= 8")
    pairings = [p for p in killing_partitions(chi.nonzero_values(), n) if all(len(b) == 2 for b in p.blocks)]
    if len(pairings) != 1:
        raise ValueError(f"character is killed by {len(pairings)} perfect pairings, need exactly 1")
    value = fourier_by_partitions(chi).value
    predicted = Fraction((-1) ** (m // 2), n ** (m // 2)) * Fraction(factorial(n), n**n)
    rel_error = value / predicted - 1
    n_abs_e = abs(rel_error) * n
    return BoundReport.build(
        f"pairing m={m} {chi.text()}",
        LogMagnitude.from_fraction(n_abs_e) if n_abs_e else LogMagnitude.zero(),
        LogMagnitude.from_fraction(Fraction(pin)),
        e_times_n=n_abs_e,
        value=value,
        predicted=predicted,
    )


def pairing_error_grid(m: int, n_values: Sequence[int]) -> list[tuple[int, Fraction]]:
    """n * |E| over an n-grid of uniquely paired characters."""
    out = []
    for n in n_values:
        chi = uniquely_paired_character(n, m)
        report = unique_pairing_report(chi)
        out.append((n, report.extra["e_times_n"]))
    return out
