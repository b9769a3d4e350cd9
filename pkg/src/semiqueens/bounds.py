"""Pointwise and aggregate bound verification over exhaustive spectra.

Each suite walks the exact per-orbit coefficients of a small board and
checks one inequality family, emitting one BoundReport per subject.
Bounds mixing rationals with transcendentals are compared in log
arithmetic with a 1e-9 slack biased toward reporting failure; purely
rational comparisons are also asserted exactly where tests want them.

Bounds whose stated form hides an unspecified absolute constant are
checked against pinned constants from ``config`` (measured once by an
oracle sweep, then enforced as regressions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath as mp

from .characters import CharacterMultiset
from .config import PINNED
from .errors import LimitExceeded
from .exactnum import LogMagnitude, log_combinatorial
from .fourier import spectrum
from .majorarcs import main_term
from .reports import BoundReport

# ---------------------------------------------------------------------------
# Pointwise bound sweeps
# ---------------------------------------------------------------------------


def entropy_bound_reports(n: int, long: bool = False) -> list[BoundReport]:
    """|coeff| <= multinomial^(-1/2) (n!/n^n)^(1/2) for every orbit."""
    trivial = Fraction(factorial(n), n**n)
    out = []
    for chi, value in spectrum(n, long):
        bound_sq = trivial / chi.orbit_size
        measured = LogMagnitude.from_fraction(value).abs()
        bound = LogMagnitude.from_fraction(bound_sq).sqrt()
        out.append(
            BoundReport.build(
                f"entropy {chi.text()}",
                measured,
                bound,
                exact_ok=value * value <= bound_sq,
            )
        )
    return out


def sqrt_cancellation_reports(n: int, long: bool = False) -> list[BoundReport]:
    """|coeff| <= C(n+k-1, k-1)^(1/2) multinomial^(-1/2) n!/n^n, margins kept."""
    trivial = Fraction(factorial(n), n**n)
    out = []
    for chi, value in spectrum(n, long):
        bound_sq = Fraction(comb(n + chi.k - 1, chi.k - 1), chi.orbit_size) * trivial**2
        measured = LogMagnitude.from_fraction(value).abs()
        bound = LogMagnitude.from_fraction(bound_sq).sqrt()
        out.append(
            BoundReport.build(
                f"sqrt-cancellation {chi.text()}",
                measured,
                bound,
                k=chi.k,
                exact_ok=value * value <= bound_sq,
            )
        )
    return out


def tail_bound_report(n: int, threshold: float, long: bool = False) -> BoundReport:
    """sum over H(chi) >= threshold of |coeff|^3 <= e^((3-R)n/2) (n!/n^n)^3."""
    total = Fraction(0)
    count = 0
    for chi, value in spectrum(n, long):
        if chi.entropy >= threshold:
            total += chi.orbit_size * abs(value) ** 3
            count += 1
    with mp.workdps(50):
        ln_bound = mp.mpf(3 - threshold) * n / 2 + 3 * (log_combinatorial("factorial", n).ln_abs - n * mp.log(n))
    return BoundReport.build(
        f"tail R={threshold} n={n}",
        LogMagnitude.from_fraction(total),
        LogMagnitude.from_ln(1, ln_bound),
        orbits_in_range=count,
    )


def linfty_ratio_reports(n: int, pinned_c: float | None = None, long: bool = False) -> list[BoundReport]:
    """ln(|coeff| 2^(m/2) C(n,m)^(1/2) n^n/n!) <= c (m^(3/2)/sqrt(n) + sqrt(m)).

    c is the pinned constant from the initial oracle sweep; sparse orbits
    with vanishing coefficient pass vacuously.
    """
    c = PINNED["linfty_c"] if pinned_c is None else pinned_c
    trivial = Fraction(factorial(n), n**n)
    out = []
    for chi, value in spectrum(n, long):
        m = chi.sparsity
        if not 1 <= m <= (2 * n) // 3:
            continue
        ratio_sq = (value / trivial) ** 2 * 2**m * comb(n, m)
        measured = LogMagnitude.from_fraction(ratio_sq).sqrt()
        with mp.workdps(50):
            allowance = c * (mp.mpf(m) ** 1.5 / mp.sqrt(n) + mp.sqrt(m))
        out.append(
            BoundReport.build(
                f"linfty {chi.text()}",
                measured,
                LogMagnitude.from_ln(1, allowance),
                m=m,
                pinned_c=c,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Sparse-maximum recurrence table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseMaxBounds:
    """Upper bounds U_m for max |coeff| over m-sparse characters.

    Seeds: U_1 = 0 and U_2 = n (n-2)!/n^n (the exact 2-sparse maximum).
    For m >= 3 the table takes the recurrence with equality:
        U_m = max((m-1) U_(m-1), (m/2) U_(m-2) + (m/2 - 1) U_(m-1)) / (n-m+1),
    which dominates the true maxima by induction on the peel step.
    """

    n: int
    entries: tuple[Fraction, ...]  # entries[m] = U_m, entries[0] unused

    def bound(self, m: int) -> Fraction:
        return self.entries[m]


def solve_sparse_max_bounds(n: int, max_m: int) -> SparseMaxBounds:
    cap = max(2, n // 3)
    if not 2 <= max_m <= cap:
        raise LimitExceeded(f"need 2 <= M <= max(2, n//3) = {cap}, got M={max_m}")
    u = [Fraction(0), Fraction(0), Fraction(n * factorial(n - 2), n**n)]
    for m in range(3, max_m + 1):
        half = Fraction(m, 2)
        candidate = max((m - 1) * u[m - 1], half * u[m - 2] + (half - 1) * u[m - 1])
        u.append(candidate / (n - m + 1))
    return SparseMaxBounds(n, tuple(u[: max_m + 1]))


def sparse_max_domination_reports(n: int, max_m: int, long: bool = False) -> list[BoundReport]:
    """Measured m-sparse maxima against the recurrence table, per m <= M."""
    table = solve_sparse_max_bounds(n, max_m)
    best: dict[int, Fraction] = {m: Fraction(0) for m in range(1, max_m + 1)}
    for chi, value in spectrum(n, long):
        m = chi.sparsity
        if 1 <= m <= max_m and abs(value) > best[m]:
            best[m] = abs(value)
    out = []
    for m in range(1, max_m + 1):
        out.append(
            BoundReport.build(
                f"sparse-max m={m} n={n}",
                LogMagnitude.from_fraction(best[m]),
                LogMagnitude.from_fraction(table.bound(m)),
                exact_ok=best[m] <= table.bound(m),
                attained=best[m] == table.bound(m),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Exact 2x2 matrix identities behind the operator-norm step
# ---------------------------------------------------------------------------


class _QuadExt:
    """Elements q0 + q1 s1 + q2 s2 + q3 s1 s2 of Q[s1, s2], s1^2 = A, s2^2 = B."""

    __slots__ = ("q", "A", "B")

    def __init__(self, q, A: Fraction, B: Fraction) -> None:
        self.q = tuple(Fraction(x) for x in q)
        self.A = A
        self.B = B

    @classmethod
    def of(cls, value: Fraction, A: Fraction, B: Fraction) -> "_QuadExt":
        return cls((value, 0, 0, 0), A, B)

    def __add__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(tuple(a + b for a, b in zip(self.q, other.q)), self.A, self.B)

    def __sub__(self, other: "_QuadExt") -> "_QuadExt":
        return _QuadExt(tuple(a - b for a, b in zip(self.q, other.q)), self.A, self.B)

    def __mul__(self, other: "_QuadExt") -> "_QuadExt":
        a0, a1, a2, a3 = self.q
        b0, b1, b2, b3 = other.q
        A, B = self.A, self.B
        return _QuadExt(
            (
                a0 * b0 + A * (a1 * b1) + B * (a2 * b2) + A * B * (a3 * b3),
                a0 * b1 + a1 * b0 + B * (a2 * b3 + a3 * b2),
                a0 * b2 + a2 * b0 + A * (a1 * b3 + a3 * b1),
                a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
            ),
            A,
            B,
        )

    def rational(self) -> Fraction | None:
        if any(self.q[1:]):
            return None
        return self.q[0]


def matrix_identity_report(m: int, n: int) -> BoundReport:
    """Exact trace/determinant identities and coefficient bounds for the peel matrices.

    With alpha = m/(2(n-m+1)), beta = (m-2)/(2(n-m+1)), gamma = (m-1)/(n-m+1)
    and N = [[beta alpha^(-1/2), alpha^(1/2) alpha'^(-1/2)], [1, 0]]:
    det(N^T N) = alpha/alpha', trace(N^T N) = beta^2/alpha + alpha/alpha' + 1,
    and the easy bounds gamma^2/alpha <= 4m/n, beta^2/alpha <= m/n.
    The matrix products are carried out symbolically over Q(sqrt(alpha_m),
    sqrt(alpha_(m-1))), so the identities are checked, not assumed.
    """
    if not (3 <= m <= n / 3):
        raise LimitExceeded(f"matrix identities need 3 <= m <= n/3, got m={m}, n={n}")
    alpha = Fraction(m, 2 * (n - m + 1))
    alpha_prev = Fraction(m - 1, 2 * (n - m + 2))
    beta = Fraction(m - 2, 2 * (n - m + 1))
    gamma = Fraction(m - 1, n - m + 1)

    A, B = alpha, alpha_prev
    zero = _QuadExt.of(Fraction(0), A, B)
    one = _QuadExt.of(Fraction(1), A, B)
    s1 = _QuadExt((0, 1, 0, 0), A, B)
    s2 = _QuadExt((0, 0, 1, 0), A, B)
    inv_s1 = _QuadExt((0, Fraction(1) / A, 0, 0), A, B)  # s1 / A
    inv_s2 = _QuadExt((0, 0, Fraction(1) / B, 0), A, B)
    entry_00 = _QuadExt.of(beta, A, B) * inv_s1
    entry_01 = s1 * inv_s2
    matrix = ((entry_00, entry_01), (one, zero))
    mt_m = tuple(
        tuple(
            sum(
                (matrix[r2][r1] * matrix[r2][c1] for r2 in range(2)),
                zero,
            )
            for c1 in range(2)
        )
        for r1 in range(2)
    )
    trace = (mt_m[0][0] + mt_m[1][1]).rational()
    det = (mt_m[0][0] * mt_m[1][1] - mt_m[0][1] * mt_m[1][0]).rational()

    det_target = alpha / alpha_prev
    trace_target = beta**2 / alpha + alpha / alpha_prev + 1
    checks = {
        "det_exact": det == det_target,
        "trace_exact": trace == trace_target,
        "gamma_sq_bound": gamma**2 / alpha <= Fraction(4 * m, n),
        "beta_sq_bound": beta**2 / alpha <= Fraction(m, n),
    }
    ok = all(checks.values())
    report_value = LogMagnitude.from_fraction(trace_target)
    return BoundReport.build(
        f"matrix m={m} n={n}",
        report_value if ok else report_value * LogMagnitude.from_fraction(2),
        report_value,
        **checks,
    )


# ---------------------------------------------------------------------------
# Census and region decomposition
# ---------------------------------------------------------------------------


def entropy_census(n: int, thresholds: tuple[float, ...], long: bool = True) -> dict:
    """Exact character counts per half-open entropy bucket [t_i, t_(i+1)).

    Counts are numbers of characters (orbit sizes summed), so the bucket
    totals add up to n^n exactly.
    """
    edges = [0.0, *sorted(thresholds), math.inf]
    counts = [0] * (len(edges) - 1)
    for chi, _ in spectrum(n, long):
        h = chi.entropy
        for i in range(len(edges) - 1):
            if edges[i] <= h < edges[i + 1]:
                counts[i] += chi.orbit_size
                break
    return {
        "n": n,
        "buckets": [
            {"lo": edges[i], "hi": edges[i + 1], "characters": counts[i]} for i in range(len(edges) - 1)
        ],
        "total": sum(counts),
    }


def region_decomposition(n: int, epsilon: float, cut: float, series_terms: int | None = None) -> dict:
    """Exact cube-sum split into low (H <= eps), medium (eps < H <= cut), high (H > cut).

    Boundary ties go to the lower region.  The low region is compared to
    n times the partial singular series, the anticipated main term.
    """
    if not 0 < epsilon < cut:
        raise ValueError("need 0 < epsilon < cut")
    terms = PINNED["series_terms"] if series_terms is None else series_terms
    low = medium = high = Fraction(0)
    for chi, value in spectrum(n):
        cube = chi.orbit_size * value**3
        if chi.entropy <= epsilon:
            low += cube
        elif chi.entropy <= cut:
            medium += cube
        else:
            high += cube
    partial_main = sum((main_term(m, n).main_value for m in range(terms + 1)), Fraction(0)) * n
    return {
        "n": n,
        "epsilon": epsilon,
        "cut": cut,
        "low": low,
        "medium": medium,
        "high": high,
        "total": low + medium + high,
        "main_term_partial": partial_main,
        "low_vs_main_ratio": float(low / partial_main) if partial_main else None,
    }
