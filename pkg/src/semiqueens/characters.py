"""Characters of (Z/nZ)^n up to coordinate permutation.

A character chi = (r_1, ..., r_n) with entries in the dual group, which we
identify with (1/n)Z/Z, is stored as a sorted multiset: pairs (b, a)
meaning the value b/n occurs a times.  Every quantity computed downstream
is invariant under permuting coordinates, so the multiset form is
lossless.  Dual elements are plain integer residues 0 <= b < n standing
for b/n.

The canonical text form, used both as CLI argument syntax and as cache
key, is ``n=7;(0^3,1/7^2,3/7^2)``: values ascending, fractions reduced,
explicit multiplicities.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement, islice
from typing import Iterable, Iterator, Sequence

from .errors import LimitExceeded
from .exactnum import multinomial

#: Full orbit enumeration is refused above this order unless overridden.
DEFAULT_ENUMERATION_LIMIT = 9

_CHAR_RE = re.compile(r"^n=(\d+);\((.*)\)$")


@dataclass(frozen=True)
class CyclicGroup:
    """Z/nZ with additive arithmetic on residues 0..n-1."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("group order must be positive")

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def neg(self, x: int) -> int:
        return (-x) % self.n

    def elements(self) -> range:
        return range(self.n)

    def element_sum(self) -> int:
        """Sum of all elements; zero exactly when n is odd."""
        return (self.n * (self.n - 1) // 2) % self.n


@dataclass(frozen=True)
class CharacterMultiset:
    """Sorted multiset of dual values with multiplicities summing to n."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        total = 0
        prev = -1
        for b, a in self.pairs:
            if not 0 <= b < self.n:
                raise ValueError(f"dual value {b} out of range mod {self.n}")
            if a < 1:
                raise ValueError("multiplicities must be positive")
            if b <= prev:
                raise ValueError("values must be strictly increasing")
            prev = b
            total += a
        if total != self.n:
            raise ValueError(f"multiplicities sum to {total}, expected {self.n}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_values(cls, n: int, values: Sequence[int | Fraction]) -> "CharacterMultiset":
        """Canonicalize a raw length-n tuple of dual values."""
        if len(values) != n:
            raise ValueError(f"need exactly {n} values, got {len(values)}")
        counts: dict[int, int] = {}
        for v in values:
            b = _to_residue(v, n)
            counts[b] = counts.get(b, 0) + 1
        return cls(n, tuple(sorted(counts.items())))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "CharacterMultiset":
        merged: dict[int, int] = {}
        for b, a in pairs:
            b %= n
            merged[b] = merged.get(b, 0) + a
        return cls(n, tuple(sorted(merged.items())))

    @classmethod
    def parse(cls, text: str) -> "CharacterMultiset":
        """Parse the canonical text form, e.g. ``n=7;(0^3,1/7^2,3/7^2)``."""
        m = _CHAR_RE.match(text.strip())
        if not m:
            raise ValueError(f"malformed character literal: {text!r}")
        n = int(m.group(1))
        pairs = []
        body = m.group(2).strip()
        if body:
            for item in body.split(","):
                item = item.strip()
                if "^" in item:
                    value_part, _, mult_part = item.rpartition("^")
                    mult = int(mult_part)
                else:
                    value_part, mult = item, 1
                pairs.append((_to_residue(Fraction(value_part), n), mult))
        return cls.from_pairs(n, pairs)

    # -- derived data -------------------------------------------------------

    @cached_property
    def k(self) -> int:
        """Number of distinct values, including zero when present."""
        return len(self.pairs)

    @cached_property
    def sparsity(self) -> int:
        """m, the number of coordinates carrying a nonzero value."""
        return self.n - self.zero_multiplicity

    @cached_property
    def zero_multiplicity(self) -> int:
        return self.pairs[0][1] if self.pairs and self.pairs[0][0] == 0 else 0

    @cached_property
    def zero_sum(self) -> bool:
        return sum(b * a for b, a in self.pairs) % self.n == 0

    @cached_property
    def orbit_size(self) -> int:
        """Number of coordinate permutations of the underlying tuple."""
        return multinomial(self.n, [a for _, a in self.pairs])

    @cached_property
    def entropy(self) -> float:
        """H = (1/n) ln multinomial(n; a_1..a_k), in nats, over all values."""
        return math.log(self.orbit_size) / self.n

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.pairs)

    def nonzero_values(self) -> tuple[int, ...]:
        """The m nonzero dual residues, with repetition, ascending."""
        out: list[int] = []
        for b, a in self.pairs:
            if b:
                out.extend([b] * a)
        return tuple(out)

    def values(self) -> tuple[int, ...]:
        out: list[int] = []
        for b, a in self.pairs:
            out.extend([b] * a)
        return tuple(out)

    # -- symmetries ---------------------------------------------------------

    def shift(self, t: int) -> "CharacterMultiset":
        """chi + t*(1,...,1): add t to every value."""
        return CharacterMultiset(self.n, tuple(sorted(((b + t) % self.n, a) for b, a in self.pairs)))

    def shift_normalized(self) -> tuple["CharacterMultiset", int]:
        """Shift so the most frequent value becomes 0.

        Ties between maximal multiplicities break toward the
        lexicographically least canonical pair sequence, giving
        deterministic memo keys.
        """
        best_mult = max(a for _, a in self.pairs)
        candidates = [(-b) % self.n for b, a in self.pairs if a == best_mult]
        best = min((self.shift(t), t) for t in candidates)
        return best

    def scale(self, u: int) -> "CharacterMultiset":
        """chi -> u * chi for a unit u (automorphism folding of the dual)."""
        if math.gcd(u, self.n) != 1:
            raise ValueError(f"{u} is not a unit mod {self.n}")
        return CharacterMultiset.from_pairs(self.n, (((b * u) % self.n, a) for b, a in self.pairs))

    def __lt__(self, other: "CharacterMultiset") -> bool:
        return (self.n, self.pairs) < (other.n, other.pairs)

    # -- text form ----------------------------------------------------------

    def text(self) -> str:
        items = []
        for b, a in self.pairs:
            frac = Fraction(b, self.n) if b else None
            value = "0" if frac is None else f"{frac.numerator}/{frac.denominator}"
            items.append(f"{value}^{a}")
        return f"n={self.n};({','.join(items)})"

    def __str__(self) -> str:
        return self.text()


def _to_residue(value: int | Fraction, n: int) -> int:
    """Dual element as an integer residue: ints are taken mod n, fractions p/q need q | n."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator % n
        if n % value.denominator:
            raise ValueError(f"{value} is not an n-division point for n={n}")
        return value.numerator * (n // value.denominator) % n
    return int(value) % n


def orbit_count(n: int) -> int:
    """Number of permutation orbits of characters: multisets of size n from n values."""
    return math.comb(2 * n - 1, n - 1)


def enumerate_orbits(
    n: int,
    *,
    max_sparsity: int | None = None,
    entropy_range: tuple[float, float] | None = None,
    zero_sum_only: bool = False,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    offset: int = 0,
    stride: int = 1,
) -> Iterator[CharacterMultiset]:
    """Yield one representative per permutation orbit, each exactly once.

    ``offset``/``stride`` slice the stream deterministically so parallel
    consumers can split it; results never depend on consumption order.
    """
    if n > limit:
        raise LimitExceeded(f"orbit enumeration for n={n} exceeds limit {limit}")
    if stride < 1 or offset < 0:
        raise ValueError("need stride >= 1 and offset >= 0")

    def generate() -> Iterator[CharacterMultiset]:
        for values in combinations_with_replacement(range(n), n):
            chi = CharacterMultiset.from_values(n, values)
            if max_sparsity is not None and chi.sparsity > max_sparsity:
                continue
            if zero_sum_only and not chi.zero_sum:
                continue
            if entropy_range is not None:
                lo, hi = entropy_range
                if not lo <= chi.entropy <= hi:
                    continue
            yield chi

    return islice(generate(), offset, None, stride)
