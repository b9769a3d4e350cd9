"""Structured coefficient extraction for characters on a d-division grid.

When every nonzero value of chi lies in (1/d)Z/Z with d | n, grouping the
group elements by residue class mod d turns the scaled coefficient into a
polynomial extraction:

    n^n * coeff(chi) = (prod_i a_i!) * [prod_i z_i^(a_i)]
                       prod_{j=0}^{d-1} (sum_i w_d^(-c_i j) z_i)^(n/d),

with one variable per distinct value (c_i = value numerator at
denominator d) and each residue class contributing n/d elements.  The
product is homogeneous of degree n, so one variable is eliminated before
extraction.

Two strategies:

* ``dp``   -- exact multivariate convolution over cyclotomic integers of
  order d, one linear factor at a time, exponents capped at the target.
* ``dft``  -- evaluate on (n+1)-th root-of-unity grids in the remaining
  k-1 variables with binary exponentiation for the class powers, then
  average.  Arithmetic is gmpy2 floating point at a requested precision;
  the returned error radius comes from a conservative forward analysis,
  and the precision doubles automatically until the relative budget is
  met.  The product polynomial has integer coefficients (the linear
  forms are closed under conjugation), so grid points pair off into
  conjugates and only half the grid is evaluated.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from math import factorial, gcd, prod

import gmpy2
import mpmath as mp

from .characters import CharacterMultiset
from .errors import LimitExceeded, PrecisionExhausted
from .exactnum import Cyclotomic, TrackedComplex
from .fourier import FourierValue

DP_MAX_DISTINCT = 3
DP_MAX_N = 400
DFT_DEFAULT_PRECISION = 256
DFT_PRECISION_CEILING = 32768
DFT_DEFAULT_REL_TOL = 1e-25
DFT_POINT_BUDGET = 2 * 10**7
MAX_DISTINCT = 6


def structured_data(chi: CharacterMultiset) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """(d, values at denominator d, multiplicities); d minimal with d | n."""
    n = chi.n
    g = n
    for b, _ in chi.pairs:
        g = gcd(g, b)
    d = n // g
    values = tuple(b // g for b, _ in chi.pairs)
    mults = tuple(a for _, a in chi.pairs)
    return d, values, mults


def structured_coefficient(
    chi: CharacterMultiset,
    strategy: str = "auto",
    precision: int | None = None,
    rel_tol: float = DFT_DEFAULT_REL_TOL,
    threads: int = 1,
) -> FourierValue:
    """Exact (dp) or rigorously error-bounded (dft) coefficient of chi."""
    n = chi.n
    d, values, mults = structured_data(chi)
    if n % d:
        raise LimitExceeded(f"character denominator {d} does not divide n={n}")
    k = len(values)
    if k > MAX_DISTINCT:
        raise LimitExceeded(f"structured engine handles at most {MAX_DISTINCT} distinct values, got {k}")
    if strategy == "auto":
        strategy = "dp" if (k <= DP_MAX_DISTINCT and n <= DP_MAX_N) else "dft"
    if strategy == "dp":
        return _dp_route(chi, d, values, mults)
    if strategy == "dft":
        return _dft_route(chi, d, values, mults, precision, rel_tol, threads)
    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Exact convolution route
# ---------------------------------------------------------------------------


def _dp_route(chi: CharacterMultiset, d: int, values: tuple[int, ...], mults: tuple[int, ...]) -> FourierValue:
    n = chi.n
    k = len(values)
    if k > DP_MAX_DISTINCT:
        raise LimitExceeded(f"dp strategy handles at most {DP_MAX_DISTINCT} distinct values, got {k}")
    if n > DP_MAX_N:
        raise LimitExceeded(f"dp strategy is limited to n <= {DP_MAX_N}")

    # homogeneity: eliminate the heaviest variable (ties: prefer the zero value)
    drop = max(range(k), key=lambda i: (mults[i], values[i] == 0, -values[i]))
    kept = [i for i in range(k) if i != drop]
    caps = [mults[i] for i in kept]
    dims = [c + 1 for c in caps]
    size = prod(dims)
    strides = []
    acc = 1
    for dim in reversed(dims):
        strides.append(acc)
        acc *= dim
    strides = list(reversed(strides))  # row-major strides matching `dims`

    exponents = _exponent_table(dims)
    state: list[list[int] | None] = [None] * size
    start = [0] * d
    start[0] = 1
    state[0] = start

    for j in range(d):
        shifts = [(-values[i] * j) % d for i in kept]
        stay = (-values[drop] * j) % d
        for _ in range(n // d):
            new: list[list[int] | None] = [None] * size
            for idx in range(size):
                vec = state[idx]
                if vec is None:
                    continue
                exps = exponents[idx]
                # keep z_drop: no exponent change
                _rot_add(new, idx, vec, stay, d)
                for pos, i in enumerate(kept):
                    if exps[pos] < caps[pos]:
                        _rot_add(new, idx + strides[pos], vec, shifts[pos], d)
            state = new

    corner = state[size - 1]
    coeff = Cyclotomic(d, corner if corner is not None else [0] * d)
    scale = 1
    for a in mults:
        scale *= factorial(a)
    scaled_cyc = coeff * scale
    as_int = scaled_cyc.to_int()
    return FourierValue(
        chi,
        "structured-dp",
        scaled=as_int if as_int is not None else scaled_cyc,
        meta={"d": d, "k": k, "dropped_value": values[drop]},
    )


def _exponent_table(dims: list[int]) -> list[tuple[int, ...]]:
    table = []
    total = prod(dims)
    for idx in range(total):
        rem = idx
        exps = []
        for dim in reversed(dims):
            exps.append(rem % dim)
            rem //= dim
        table.append(tuple(reversed(exps)))
    return table


def _rot_add(new: list, idx: int, vec: list[int], shift: int, d: int) -> None:
    out = new[idx]
    if out is None:
        out = [0] * d
        new[idx] = out
    if shift == 0:
        for p in range(d):
            out[p] += vec[p]
    else:
        for p in range(d):
            out[(p + shift) % d] += vec[p]


# ---------------------------------------------------------------------------
# Root-of-unity grid route
# ---------------------------------------------------------------------------


def _dft_route(
    chi: CharacterMultiset,
    d: int,
    values: tuple[int, ...],
    mults: tuple[int, ...],
    precision: int | None,
    rel_tol: float,
    threads: int,
) -> FourierValue:
    n = chi.n
    if not chi.zero_sum:
        return FourierValue(chi, "structured-dft", scaled=0, meta={"d": d, "skipped": "zero_sum false"})
    grid = n + 1
    k = len(values)
    if grid ** (k - 1) > DFT_POINT_BUDGET:
        raise LimitExceeded(f"dft grid {grid}^{k - 1} exceeds point budget {DFT_POINT_BUDGET}")

    pbits = DFT_DEFAULT_PRECISION if precision is None else precision
    history = []
    while True:
        t0 = time.perf_counter()
        extract_re, err_bound = _dft_extract(n, d, values, mults, grid, pbits, threads)
        elapsed = time.perf_counter() - t0
        history.append({"precision": pbits, "err_ln": _ln_float(err_bound), "seconds": round(elapsed, 3)})
        magnitude = abs(extract_re)
        if magnitude > 0 and err_bound < gmpy2.mpfr(rel_tol) * magnitude:
            break
        if pbits >= DFT_PRECISION_CEILING:
            raise PrecisionExhausted(
                f"dft error budget unmet at ceiling {DFT_PRECISION_CEILING} bits (history: {history})"
            )
        pbits = min(2 * pbits, DFT_PRECISION_CEILING)

    # package: coeff_scaled = prod a_i! * extract; approx tracks coeff itself
    scale = 1
    for a in mults:
        scale *= factorial(a)
    with mp.workprec(pbits + 16):
        extract_mp = _mpfr_to_mpf(extract_re)
        err_mp = _mpfr_to_mpf(err_bound)
        s_val = extract_mp * scale / mp.mpf(n) ** n
        s_err = (err_mp + abs(extract_mp) * mp.mpf(2) ** (4 - pbits)) * scale / mp.mpf(n) ** n
        approx = TrackedComplex(s_val, 0, s_err)
    return FourierValue(
        chi,
        "structured-dft",
        approx=approx,
        meta={"d": d, "k": k, "grid": grid, "precision": pbits, "escalations": history},
    )


def _ln_float(x) -> float:
    if x == 0:
        return float("-inf")
    return float(gmpy2.log(abs(x)))


def _mpfr_to_mpf(x):
    """Exact gmpy2.mpfr -> mpmath.mpf conversion (mantissa times power of two)."""
    if x == 0:
        return mp.mpf(0)
    m, e = x.as_mantissa_exp()
    return mp.ldexp(mp.mpf(int(m)), int(e))


def _dft_extract(
    n: int,
    d: int,
    values: tuple[int, ...],
    mults: tuple[int, ...],
    grid: int,
    pbits: int,
    threads: int,
):
    """Real part of the averaged grid sum and a rigorous absolute error bound.

    The true extraction is a rational integer, hence real; conjugate grid
    points carry conjugate terms, so the sum runs over canonical points
    (t <= -t lexicographically) with doubled weight off the self-paired
    set, keeping only real parts.
    """
    k = len(values)
    drop = max(range(k), key=lambda i: (mults[i], values[i] == 0, -values[i]))
    kept = [i for i in range(k) if i != drop]
    targets = [mults[i] for i in kept]
    e = n // d

    with gmpy2.context(precision=pbits):
        roots = _unit_roots(grid, pbits)
        # m[i][j] = w_d^(-c_i j), tabulated through the grid-N table is not
        # possible (different order), so build the d-th roots directly
        droots = _unit_roots(d, pbits)
        form_coeff = [[droots[(-values[i] * j) % d] for j in range(d)] for i in range(k)]

        if k - 1 == 1:
            total = _sum_1d(grid, e, d, form_coeff, kept[0], drop, targets[0], roots, pbits)
        elif k - 1 == 2:
            total = _sum_2d(grid, e, d, form_coeff, kept, drop, targets, roots, pbits, threads)
        else:
            total = _sum_generic(grid, e, d, form_coeff, kept, drop, targets, roots, pbits)

        npoints = grid ** (k - 1)
        total = total / gmpy2.mpfr(npoints)
        kmag = gmpy2.mpfr(k) ** n
        ops = n + 2 * d * max(1, math.ceil(math.log2(max(n, 2)))) + d + 8
        err = kmag * gmpy2.mpfr(ops) * gmpy2.mpfr(2) ** (3 - pbits)
        return total, err


def _unit_roots(order: int, pbits: int) -> list:
    with gmpy2.context(precision=pbits + 8):
        two_pi = 2 * gmpy2.const_pi()
        out = []
        for t in range(order):
            s, c = gmpy2.sin_cos(two_pi * t / order)
            out.append(gmpy2.mpc(c, s))
        return out


def _conj_weight(t: tuple[int, ...], grid: int) -> int:
    """2 for canonical points of proper conjugate pairs, 1 for self-paired, 0 to skip."""
    conj = tuple((-x) % grid for x in t)
    if t < conj:
        return 2
    if t == conj:
        return 1
    return 0


def _point_term(forms, e: int, twiddle) -> object:
    value = forms[0] ** e
    for f in forms[1:]:
        value *= f**e
    return (value * twiddle).real


def _sum_1d(grid, e, d, form_coeff, kept_i, drop, target, roots, pbits):
    total = gmpy2.mpfr(0)
    for t in range(grid):
        w = _conj_weight((t,), grid)
        if not w:
            continue
        z = roots[t]
        forms = [form_coeff[kept_i][j] * z + form_coeff[drop][j] for j in range(d)]
        tw = roots[(-t * target) % grid]
        total += w * _point_term(forms, e, tw)
    return total


def _sum_2d(grid, e, d, form_coeff, kept, kdrop, targets, roots, pbits, threads):
    i1, i2 = kept
    a1, a2 = targets

    def row_sum(t1: int):
        with gmpy2.context(precision=pbits):
            conj_t1 = (-t1) % grid
            if t1 > conj_t1:
                return gmpy2.mpfr(0)
            z1 = roots[t1]
            base = [form_coeff[i1][j] * z1 + form_coeff[kdrop][j] for j in range(d)]
            var = [form_coeff[i2][j] for j in range(d)]
            row_total = gmpy2.mpfr(0)
            whole_row = t1 < conj_t1
            for t2 in range(grid):
                if whole_row:
                    w = 2
                else:
                    w = _conj_weight((t1, t2), grid)
                    if not w:
                        continue
                z2 = roots[t2]
                forms = [base[j] + var[j] * z2 for j in range(d)]
                tw = roots[(-(t1 * a1 + t2 * a2)) % grid]
                row_total += w * _point_term(forms, e, tw)
            return row_total

    if threads > 1:
        from .parallel import parallel_map

        rows = parallel_map(row_sum, list(range(grid)), threads)
    else:
        rows = [row_sum(t1) for t1 in range(grid)]
    total = gmpy2.mpfr(0)
    for r in rows:
        total += r
    return total


def _sum_generic(grid, e, d, form_coeff, kept, kdrop, targets, roots, pbits):
    from itertools import product as iproduct

    total = gmpy2.mpfr(0)
    for t in iproduct(range(grid), repeat=len(kept)):
        w = _conj_weight(t, grid)
        if not w:
            continue
        forms = []
        for j in range(d):
            val = form_coeff[kdrop][j]
            for pos, i in enumerate(kept):
                val = val + form_coeff[i][j] * roots[t[pos]]
            forms.append(val)
        tw = roots[(-sum(x * a for x, a in zip(t, targets))) % grid]
        total += w * _point_term(forms, e, tw)
    return total


# ---------------------------------------------------------------------------
# The large reproduction target
# ---------------------------------------------------------------------------


def third_division_character(n: int) -> CharacterMultiset:
    """((1/3)^(n/3), (2/3)^(n/3), 0^(n/3)) for n divisible by 3."""
    if n % 3:
        raise ValueError("n must be divisible by 3")
    third = n // 3
    return CharacterMultiset.from_pairs(n, [(0, third), (n // 3, third), (2 * n // 3, third)])
