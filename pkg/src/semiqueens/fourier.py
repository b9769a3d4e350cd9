"""Exact Fourier coefficients of the bijection indicator on (Z/nZ)^n.

Writing coeff(chi) for the transform of the indicator of the set of
bijections {1..n} -> Z/nZ (normalized so coeff(0) = n!/n^n), this module
computes n^n * coeff(chi) exactly by two independent formula routes:

* the killing-partition sum
      coeff = (n-m)!/n^n * sum over killing partitions P of mu(P) n^|P|,
  valid for any character with m nonzero coordinates;
* the peel-one-coordinate recursion
      coeff(r_1..r_m) = -1/(n-m+1) * sum_i coeff(r_1..r_i+r_m..r_{m-1}),
  with memoized, shift-normalized children.

Both produce rational numbers (the scaled value n^n * coeff is a plain
integer); the brute enumeration in ``oracles`` provides the independent
cyclotomic cross-check.  Whole-spectrum aggregates (Parseval, cube sums)
and a symbolic squarefree-coefficient identity check live here too.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .cache import CoefficientCache
from .characters import CharacterMultiset, enumerate_orbits
from .errors import LimitExceeded, MemoCapacityExceeded
from .exactnum import Cyclotomic, LogMagnitude, TrackedComplex, log_combinatorial
from .partitions import killing_partitions

SPECTRUM_LIMIT = 7
SPECTRUM_LIMIT_LONG = 9
DEFAULT_MEMO_LIMIT = 2_000_000


@dataclass(frozen=True)
class FourierValue:
    """One computed coefficient: exact and/or tracked-numeric views."""

    char: CharacterMultiset
    method: str
    scaled: int | Cyclotomic | None = None  # exact n^n * coeff
    approx: TrackedComplex | None = None  # coeff itself, with error radius
    meta: dict = field(default_factory=dict)

    @property
    def value(self) -> Fraction | None:
        """coeff as an exact rational, when the scaled value is an integer."""
        if isinstance(self.scaled, int):
            return Fraction(self.scaled, self.char.n**self.char.n)
        if isinstance(self.scaled, Cyclotomic):
            as_int = self.scaled.to_int()
            if as_int is not None:
                return Fraction(as_int, self.char.n**self.char.n)
        return None

    def log_abs(self) -> LogMagnitude:
        """LogMagnitude of |coeff|."""
        value = self.value
        if value is not None:
            return LogMagnitude.from_fraction(value).abs()
        if self.approx is not None:
            import mpmath as mp

            lo = self.approx.abs_lower()
            if lo == 0:
                return LogMagnitude.zero()
            return LogMagnitude.from_ln(1, mp.log(mp.hypot(self.approx.re, self.approx.im)))
        raise ValueError("no usable view of the coefficient")

    def log_ratio(self) -> LogMagnitude:
        """LogMagnitude of |coeff| * n^n / n!, the ratio to the trivial bound."""
        n = self.char.n
        scale = LogMagnitude.from_int(n) ** n / log_combinatorial("factorial", n)
        return self.log_abs() * scale

    def to_dict(self) -> dict:
        doc: dict = {"char": self.char.text(), "method": self.method}
        if isinstance(self.scaled, int):
            doc["scaled_exact"] = str(self.scaled)
            doc["value"] = f"{self.value.numerator}/{self.value.denominator}"
        elif isinstance(self.scaled, Cyclotomic):
            doc["scaled_exact"] = self.scaled.serialize()
        if self.approx is not None:
            import mpmath as mp

            doc["approx"] = {
                "re": mp.nstr(self.approx.re, 25),
                "im": mp.nstr(self.approx.im, 25),
                "err": mp.nstr(self.approx.err, 5),
            }
        log_abs = self.log_abs()
        doc["log_abs"] = log_abs.serialize()
        doc["log_ratio"] = self.log_ratio().serialize()
        if self.meta:
            doc["meta"] = {k: v for k, v in sorted(self.meta.items())}
        return doc


# ---------------------------------------------------------------------------
# Partition-formula route
# ---------------------------------------------------------------------------


def scaled_partition_sum(values: tuple[int, ...], n: int) -> int:
    """(n-m)! * sum over killing partitions of mu(P) n^|P| (an integer)."""
    m = len(values)
    total = 0
    for part in killing_partitions(values, n):
        total += part.mobius() * n ** len(part)
    return factorial(n - m) * total


def fourier_by_partitions(chi: CharacterMultiset) -> FourierValue:
    """Exact coefficient through the killing-partition formula (m <= 12)."""
    if not chi.zero_sum:
        return FourierValue(chi, "partition", scaled=0)
    scaled = scaled_partition_sum(chi.nonzero_values(), chi.n)
    return FourierValue(chi, "partition", scaled=scaled)


# ---------------------------------------------------------------------------
# Recursion route
# ---------------------------------------------------------------------------


class FourierRecursion:
    """Memoized peel-one-coordinate recursion for a fixed n.

    Children are canonicalized (shift-normalized for odd n, where the
    coefficient is shift-invariant) before lookup; the memo can persist
    through a CoefficientCache.  All arithmetic is exact: every value in
    the recursion tree is an integer multiple of 1/n^n, asserted as such.
    """

    def __init__(self, n: int, memo_limit: int = DEFAULT_MEMO_LIMIT, cache: CoefficientCache | None = None) -> None:
        self.n = n
        self.memo_limit = memo_limit
        self.cache = cache
        self._memo: dict[tuple[int, ...], int] = {}
        self.hits = 0
        self.misses = 0
        if cache is not None and cache.n != n:
            raise ValueError(f"cache is for n={cache.n}, engine is for n={n}")

    def stats(self) -> dict:
        return {"n": self.n, "size": len(self._memo), "hits": self.hits, "misses": self.misses}

    def coefficient(self, chi: CharacterMultiset) -> FourierValue:
        if chi.n != self.n:
            raise ValueError(f"character has n={chi.n}, engine has n={self.n}")
        if not chi.zero_sum:
            return FourierValue(chi, "recursion", scaled=0)
        scaled = self._scaled(self._canonical_key(chi.nonzero_values()))
        return FourierValue(chi, "recursion", scaled=scaled, meta=self.stats())

    def _canonical_key(self, values: tuple[int, ...]) -> tuple[int, ...]:
        # dual shifts leave the coefficient unchanged only for odd n
        n = self.n
        m = len(values)
        if m == 0 or n % 2 == 0:
            return tuple(sorted(values))
        counts = Counter(values)
        if n - m > max(counts.values()):
            return tuple(sorted(values))  # zero is strictly most frequent: identity shift
        pairs = list(counts.items())
        if m < n:
            pairs.append((0, n - m))
        chi, _ = CharacterMultiset.from_pairs(n, pairs).shift_normalized()
        return chi.nonzero_values()

    def _scaled(self, values: tuple[int, ...]) -> int:
        n = self.n
        m = len(values)
        if m == 0:
            return factorial(n)
        if m == 1:
            return 0
        memo = self._memo
        found = memo.get(values)
        if found is not None:
            self.hits += 1
            return found
        if self.cache is not None:
            key = self._memo_text(values)
            cached = self.cache.get(key, "recursion")
            if isinstance(cached, int):
                memo[values] = cached
                return cached
        self.misses += 1

        # pivot minimizing the count of opposite values; ties -> least residue
        counts: dict[int, int] = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        pivot = min(counts, key=lambda p: (sum(c for w, c in counts.items() if (w + p) % n == 0), p))

        rest = list(values)
        rest.remove(pivot)
        rest_counts: dict[int, int] = {}
        for v in rest:
            rest_counts[v] = rest_counts.get(v, 0) + 1
        total = 0
        for v, count in sorted(rest_counts.items()):
            child = list(rest)
            child.remove(v)
            merged = (v + pivot) % n
            if merged:
                child.append(merged)
            total += count * self._scaled(self._canonical_key(tuple(sorted(child))))
        value = Fraction(-total, n - m + 1)
        if value.denominator != 1:
            raise AssertionError(f"recursion produced a non-integer scaled value at {values}")
        result = int(value)
        if len(memo) >= self.memo_limit:
            raise MemoCapacityExceeded(
                f"recursion memo exceeded {self.memo_limit} entries", stats=self.stats()
            )
        memo[values] = result
        if self.cache is not None:
            self.cache.put(self._memo_text(values), "recursion", result)
        return result

    def _memo_text(self, values: tuple[int, ...]) -> str:
        n = self.n
        pairs = [(b, 1) for b in values]
        if len(values) < n:
            pairs.append((0, n - len(values)))
        return CharacterMultiset.from_pairs(n, pairs).text()


@lru_cache(maxsize=8)
def _shared_engine(n: int) -> FourierRecursion:
    return FourierRecursion(n)


def fourier_by_recursion(chi: CharacterMultiset, engine: FourierRecursion | None = None) -> FourierValue:
    if engine is None:
        engine = _shared_engine(chi.n)
    return engine.coefficient(chi)


# ---------------------------------------------------------------------------
# Whole-spectrum aggregates
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4)
def spectrum(n: int, long: bool = False) -> tuple[tuple[CharacterMultiset, Fraction], ...]:
    """(orbit representative, exact coefficient) for every orbit at this n."""
    cap = SPECTRUM_LIMIT_LONG if long else SPECTRUM_LIMIT
    if n > cap:
        raise LimitExceeded(f"exhaustive spectrum for n={n} exceeds limit {cap} (long={long})")
    out = []
    scale = Fraction(1, n**n)
    for chi in enumerate_orbits(n, limit=cap):
        if chi.zero_sum:
            value = scaled_partition_sum(chi.nonzero_values(), n) * scale
        else:
            value = Fraction(0)
        out.append((chi, value))
    return tuple(out)


def parseval_sum(n: int, long: bool = False) -> Fraction:
    """sum over all characters of coeff^2; equals n!/n^n exactly."""
    return sum((chi.orbit_size * value * value for chi, value in spectrum(n, long)), Fraction(0))


def cube_sum(n: int, long: bool = False) -> Fraction:
    """sum over all characters of coeff^3; n^2n times it counts additive triples."""
    return sum((chi.orbit_size * value**3 for chi, value in spectrum(n, long)), Fraction(0))


# ---------------------------------------------------------------------------
# Squarefree-coefficient identity (symbolic surrogate for the moment identity)
# ---------------------------------------------------------------------------


def squarefree_coefficient_check(chi: CharacterMultiset) -> bool:
    """Expand prod_i (sum_x X_x zeta^(-b_i x))^(a_i) and take the all-ones coefficient.

    The extraction tracks squarefree monomials only (anything with a
    square can never reach the target monomial prod_x X_x).  Returns
    whether the symbolic coefficient equals the scaled brute coefficient.
    """
    n = chi.n
    if n > 5:
        raise LimitExceeded("symbolic expansion is limited to n <= 5")
    # one linear factor per coordinate of the character tuple
    factors = chi.values()
    states: dict[int, Cyclotomic] = {0: Cyclotomic.from_int(n, 1)}
    for b in factors:
        nxt: dict[int, Cyclotomic] = {}
        for mask, coeff in states.items():
            for x in range(n):
                bit = 1 << x
                if mask & bit:
                    continue
                term = coeff.shift((-b * x) % n)
                key = mask | bit
                if key in nxt:
                    nxt[key] = nxt[key] + term
                else:
                    nxt[key] = term
        states = nxt
    symbolic = states[(1 << n) - 1]

    from .oracles import fourier_brute

    return symbolic == fourier_brute(chi)
