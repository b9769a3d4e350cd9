"""Set partitions of {0..m-1} with Mobius weights, and the zero-sum filter.

The partition sum that turns distinct-coordinate sums into unrestricted
ones weights each partition P by mu(P) = (-1)^(m-|P|) prod_B (|B|-1)!.
A partition "kills" a value tuple when every block sums to zero in Z/nZ;
only killing partitions survive in the sparse-coefficient formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterator, Sequence

from .errors import LimitExceeded

#: Bell-number enumeration cap for killing-partition streams.
MAX_PARTITION_SIZE = 12


@dataclass(frozen=True)
class SetPartition:
    """Partition of {0..size-1} into disjoint nonempty blocks covering it."""

    size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("blocks must be nonempty")
            if seen.intersection(block):
                raise ValueError("blocks must be disjoint")
            seen.update(block)
        if seen != set(range(self.size)):
            raise ValueError("blocks must cover the ground set")

    @classmethod
    def from_blocks(cls, size: int, blocks: Sequence[Sequence[int]]) -> "SetPartition":
        normal = tuple(sorted(tuple(sorted(b)) for b in blocks))
        return cls(size, normal)

    def __len__(self) -> int:
        return len(self.blocks)

    def mobius(self) -> int:
        """(-1)^(m - #blocks) * prod over blocks of (|B| - 1)!."""
        mu = -1 if (self.size - len(self.blocks)) % 2 else 1
        for block in self.blocks:
            mu *= factorial(len(block) - 1)
        return mu


@lru_cache(maxsize=None)
def bell_number(m: int) -> int:
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return 1
    from math import comb

    return sum(comb(m - 1, k) * bell_number(k) for k in range(m))


def all_set_partitions(m: int) -> Iterator[SetPartition]:
    """Every partition of {0..m-1}, via the block-of-least-element recursion."""
    if m > MAX_PARTITION_SIZE:
        raise LimitExceeded(f"partition enumeration for m={m} exceeds {MAX_PARTITION_SIZE}")

    def rec(remaining: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        for size in range(len(rest) + 1):
            for others in combinations(rest, size):
                block = (first, *others)
                left = tuple(i for i in rest if i not in others)
                for tail in rec(left):
                    yield (block, *tail)

    for blocks in rec(tuple(range(m))):
        yield SetPartition.from_blocks(m, blocks)


def killing_partitions(values: Sequence[int], n: int) -> Iterator[SetPartition]:
    """Partitions of the index set whose blocks all have zero value-sum mod n.

    Pruning happens as each block closes, so tuples with no small killing
    structure cost far less than a full Bell-number sweep.  Singleton
    blocks survive only on zero values, as the sum test implies.
    """
    m = len(values)
    if m > MAX_PARTITION_SIZE:
        raise LimitExceeded(f"killing-partition enumeration for m={m} exceeds {MAX_PARTITION_SIZE}")
    if sum(values) % n:
        return  # no partition can kill: block sums would total a nonzero value

    def rec(remaining: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        for size in range(len(rest) + 1):
            for others in combinations(rest, size):
                block = (first, *others)
                if sum(values[i] for i in block) % n:
                    continue
                left = tuple(i for i in rest if i not in others)
                for tail in rec(left):
                    yield (block, *tail)

    for blocks in rec(tuple(range(m))):
        yield SetPartition.from_blocks(m, blocks)
