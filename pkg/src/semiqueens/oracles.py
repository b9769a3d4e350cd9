"""Independent brute-force oracles.

Everything in this module computes its answer by direct enumeration or
simulation, deliberately sharing no machinery with the formula-based
engines it is used to check: orthomorphism backtracking, quadratic-cost
pair counting, direct root-of-unity sums over injections or over all
bijections, complete-mapping counts for general odd abelian groups, and
a seeded Monte Carlo estimate of the bijection-sum collision probability.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from itertools import permutations, product
from math import factorial, prod
from typing import Sequence

import numpy as np

from .characters import CharacterMultiset
from .errors import EvenOrderError, LimitExceeded
from .exactnum import Cyclotomic

#: Backtracking refuses larger boards by default (cost grows superexponentially).
BACKTRACK_LIMIT = 15
#: Direct pair iteration costs (n!)^2; n=7 is ~25M pairs.
DIRECT_LIMIT = 7
#: Injection enumeration budget for the sparse Fourier path.
SPARSE_OPS_LIMIT = 10**8
#: Monte Carlo samples are dealt out in fixed-size chunks with per-chunk
#: PRNG streams, so totals are independent of any worker layout.
MC_CHUNK = 50_000


@dataclass(frozen=True)
class CountResult:
    n: int
    orthomorphisms: int
    s_n: int
    elapsed_ms: float

    def __post_init__(self) -> None:
        if self.s_n != factorial(self.n) * self.orthomorphisms:
            raise ValueError("s_n must equal n! * orthomorphism count")


@dataclass(frozen=True)
class GroupSpec:
    """Finite abelian group given as a direct product of cyclic factors."""

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.factors or any(f < 1 for f in self.factors):
            raise ValueError("factors must be positive integers")

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls((n,))

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        return cls(tuple(int(p) for p in text.lower().split("x")))

    @property
    def order(self) -> int:
        return prod(self.factors)

    def elements(self) -> list[tuple[int, ...]]:
        return list(product(*(range(f) for f in self.factors)))

    def text(self) -> str:
        return "x".join(str(f) for f in self.factors)


def count_orthomorphisms(n: int, *, limit: int = BACKTRACK_LIMIT, use_shift_symmetry: bool = False) -> CountResult:
    """Exact number of permutations pi of Z/nZ with x -> pi(x) - x a permutation.

    Depth-first search assigning pi(0), pi(1), ... with two bitmasks: one
    for values already used by pi, one for differences already used by
    pi - id.  With ``use_shift_symmetry`` the search fixes pi(0) = 0 and
    multiplies by n (shifting pi by a constant preserves the property);
    off by default, and verified against full counts in the tests.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise LimitExceeded(f"orthomorphism backtracking for n={n} exceeds limit {limit}")
    t0 = time.perf_counter()
    if n % 2 == 0:
        count = 0
    else:
        count = _orthomorphism_search(n, use_shift_symmetry)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return CountResult(n, count, factorial(n) * count, elapsed)


def _orthomorphism_search(n: int, fix_first: bool) -> int:
    full = (1 << n) - 1
    diffbit = [[1 << ((v - x) % n) for v in range(n)] for x in range(n)]
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10 * n + 100))

    def rec(x: int, used_v: int, used_d: int) -> int:
        if x == n:
            return 1
        row = diffbit[x]
        total = 0
        free = full & ~used_v
        while free:
            bit = free & -free
            free ^= bit
            db = row[bit.bit_length() - 1]
            if not used_d & db:
                total += rec(x + 1, used_v | bit, used_d | db)
        return total

    if fix_first:
        # pi(0) = 0 uses value bit 0 and difference bit 0
        return n * rec(1, 1, 1)
    return rec(0, 0, 0)


def count_triples_direct(n: int) -> int:
    """s_n by iterating all (n!)^2 bijection pairs and testing the sum.

    Rows are whole permutations; the sum row is a bijection exactly when
    the OR of its value bits fills the board.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > DIRECT_LIMIT:
        raise LimitExceeded(f"direct triple counting for n={n} exceeds limit {DIRECT_LIMIT}")
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    full = (1 << n) - 1
    total = 0
    for row in perms:
        masks = np.bitwise_or.reduce(np.int64(1) << ((perms + row) % n), axis=1)
        total += int(np.count_nonzero(masks == full))
    return total


def count_general_group(spec: GroupSpec) -> int:
    """s(G): bijection pairs {1..|G|} -> G whose pointwise sum is a bijection.

    Computed as |G|! times the number of complete mappings of G (bijections
    f with x -> x + f(x) bijective), found by the same two-mask search as
    the cyclic case but over the group's addition table.
    """
    order = spec.order
    if order % 2 == 0:
        raise EvenOrderError(
            f"group {spec.text()} has even order {order}; the sum of two bijections is never a bijection"
        )
    if order > 9:
        raise LimitExceeded(f"general-group counting for |G|={order} exceeds limit 9")
    elems = spec.elements()
    index = {e: i for i, e in enumerate(elems)}
    add = [
        [index[tuple((a + b) % f for a, b, f in zip(x, y, spec.factors))] for y in elems]
        for x in elems
    ]
    full = (1 << order) - 1

    def rec(i: int, used_f: int, used_s: int) -> int:
        if i == order:
            return 1
        row = add[i]
        total = 0
        free = full & ~used_f
        while free:
            bit = free & -free
            free ^= bit
            sb = 1 << row[bit.bit_length() - 1]
            if not used_s & sb:
                total += rec(i + 1, used_f | bit, used_s | sb)
        return total

    return factorial(order) * rec(0, 0, 0)


def monte_carlo_collision(n: int, samples: int, seed: int, threads: int = 1) -> tuple[float, float]:
    """Estimate P(pi_1 + pi_2 is a bijection) for uniform random bijection pairs.

    Returns (p_hat, binomial standard error).  Sampling is chunked with
    one child PRNG stream per fixed-size chunk, so the result depends on
    (n, samples, seed) only, never on the number of workers.
    """
    if samples < 1000:
        raise ValueError("need at least 10^3 samples")
    if n % 2 == 0:
        return 0.0, 0.0  # the sum of two bijections is never a bijection for even n
    chunks = [(i, min(MC_CHUNK, samples - i * MC_CHUNK)) for i in range((samples + MC_CHUNK - 1) // MC_CHUNK)]

    def run_chunk(task: tuple[int, int]) -> int:
        idx, size = task
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, idx])))
        base = np.tile(np.arange(n, dtype=np.int64), (size, 1))
        a = rng.permuted(base, axis=1)
        b = rng.permuted(base, axis=1)
        masks = np.bitwise_or.reduce(np.int64(1) << ((a + b) % n), axis=1)
        return int(np.count_nonzero(masks == (1 << n) - 1))

    if threads > 1:
        from .parallel import parallel_map

        hits = sum(parallel_map(run_chunk, chunks, threads))
    else:
        hits = sum(run_chunk(c) for c in chunks)
    p_hat = hits / samples
    stderr = (p_hat * (1.0 - p_hat) / samples) ** 0.5
    return p_hat, stderr


# ---------------------------------------------------------------------------
# Direct Fourier sums
# ---------------------------------------------------------------------------


def fourier_brute(chi: CharacterMultiset, path: str = "auto") -> Cyclotomic:
    """n^n * (Fourier coefficient of the bijection indicator at chi), exactly.

    path "sparse": (n-m)! times the phase sum over injections of the m
    nonzero values (the zero coordinates are summed out).  path "full":
    the phase sum over all n! bijections.  Both are direct summations of
    the defining formula and agree wherever both apply.
    """
    n = chi.n
    if path == "auto":
        path = "sparse" if _sparse_feasible(n, chi.sparsity) else "full"
    if path == "sparse":
        return _brute_sparse(chi)
    if path == "full":
        return _brute_full(chi)
    raise ValueError(f"unknown brute path {path!r}")


def _sparse_feasible(n: int, m: int) -> bool:
    if m > 8 or n > 50:
        return False
    return n <= 13 or n**m <= SPARSE_OPS_LIMIT


def _brute_sparse(chi: CharacterMultiset) -> Cyclotomic:
    n, m = chi.n, chi.sparsity
    if not _sparse_feasible(n, m):
        raise LimitExceeded(f"sparse brute sum infeasible for n={n}, m={m}")
    values = chi.nonzero_values()
    if n <= 13:
        hist = _injection_histogram_masked(values, n)
    else:
        hist = [0] * n
        for xs in permutations(range(n), m):
            phase = 0
            for b, x in zip(values, xs):
                phase += b * x
            hist[(-phase) % n] += 1
    scale = factorial(n - m)
    return Cyclotomic(n, [scale * h for h in hist])


def _injection_histogram_masked(values: Sequence[int], n: int) -> list[int]:
    # Layered subset DP: layer j holds, per used-value bitmask of size j,
    # the phase histogram over injections of the first j positions.
    m = len(values)
    layer: dict[int, list[int]] = {0: [1] + [0] * (n - 1)}
    for j in range(m):
        b = values[j]
        nxt: dict[int, list[int]] = {}
        for mask, hist in layer.items():
            for x in range(n):
                bit = 1 << x
                if mask & bit:
                    continue
                rot = (-b * x) % n
                out = nxt.get(mask | bit)
                if out is None:
                    out = [0] * n
                    nxt[mask | bit] = out
                # add hist rotated by rot
                for p in range(n):
                    out[(p + rot) % n] += hist[p]
        layer = nxt
    total = [0] * n
    for hist in layer.values():
        for p in range(n):
            total[p] += hist[p]
    return total


def _brute_full(chi: CharacterMultiset) -> Cyclotomic:
    n = chi.n
    if n > 9:
        raise LimitExceeded(f"full bijection sum infeasible for n={n}")
    values = chi.values()
    hist = [0] * n
    for xs in permutations(range(n)):
        phase = 0
        for b, x in zip(values, xs):
            phase += b * x
        hist[(-phase) % n] += 1
    return Cyclotomic(n, hist)
