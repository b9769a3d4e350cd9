"""Exact and error-tracked arithmetic kernels.

Three representations cover everything the package computes with:

* ``Cyclotomic`` -- exact elements of Z[x]/(x^d - 1), the natural home of
  phase histograms accumulated while summing d-th roots of unity.
  Equality and zero tests reduce modulo the d-th cyclotomic polynomial,
  so distinct histograms representing the same algebraic number compare
  equal.
* ``TrackedComplex`` -- arbitrary-precision complex balls: a centre at the
  current mpmath working precision together with a rigorous error radius
  that every operation propagates conservatively.
* ``LogMagnitude`` -- a sign and the natural log of the absolute value,
  the mandated exchange format for quantities such as n!/n^n or n!^3/n^3n
  whose magnitude leaves [2^-2^20, 2^2^20].

Rationals are plain ``fractions.Fraction`` everywhere in the package; the
stdlib implementation already is an exact big-rational type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath as mp

from .errors import LimitExceeded

#: Default working precision (bits) for tracked complex arithmetic.
DEFAULT_PRECISION = 256

#: Orders above this raise LimitExceeded instead of allocating huge vectors.
MAX_CYCLOTOMIC_ORDER = 4096

#: Decimal working precision for LogMagnitude internals.  50 digits keeps
#: absolute errors near 1e-44 even for logs of size ~1e6.
_LOG_DPS = 50

#: Exact big-integer logs are taken directly when the integer is at most
#: this many bits; beyond that loggamma is used.
_EXACT_LOG_BIT_LIMIT = 10**6


def multinomial(n: int, parts: Sequence[int]) -> int:
    """Exact multinomial coefficient n! / (a_1! ... a_k!), requiring sum(parts) == n."""
    if any(a < 0 for a in parts):
        raise ValueError("multinomial parts must be nonnegative")
    if sum(parts) != n:
        raise ValueError(f"multinomial parts sum to {sum(parts)}, expected {n}")
    out = math.factorial(n)
    for a in parts:
        out //= math.factorial(a)
    return out


# ---------------------------------------------------------------------------
# Cyclotomic integers
# ---------------------------------------------------------------------------


def _exact_polydiv(num: list[int], den: Sequence[int]) -> list[int]:
    """Quotient of an exact division of integer polynomials (monic divisor)."""
    num = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, dc in enumerate(den):
                num[i - dd + j] -= c * dc
    if any(num[:dd]):
        raise ValueError("division was not exact")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the d-th cyclotomic polynomial."""
    if d < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (d - 1) + [1]  # x^d - 1
    for e in range(1, d):
        if d % e == 0:
            poly = _exact_polydiv(poly, cyclotomic_polynomial(e))
    return tuple(poly)


def _rem_mod(coeffs: Sequence[int], phi: Sequence[int]) -> tuple[int, ...]:
    """Remainder of an integer polynomial modulo the monic polynomial phi."""
    rem = list(coeffs)
    dd = len(phi) - 1
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            rem[i] = 0
            for j in range(dd):
                rem[i - dd + j] -= c * phi[j]
    return tuple(rem[:dd])


class Cyclotomic:
    """Exact element of Z[x]/(x^d - 1) standing for sum_j c_j zeta_d^j.

    The representation is deliberately *not* reduced mod the cyclotomic
    polynomial: coefficient vectors arise as phase histograms and must
    accumulate in O(1) per term.  Equality and zero tests perform the
    Phi_d reduction on demand.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[int]) -> None:
        if order < 1:
            raise ValueError("order must be positive")
        if order > MAX_CYCLOTOMIC_ORDER:
            raise LimitExceeded(f"cyclotomic order {order} exceeds limit {MAX_CYCLOTOMIC_ORDER}")
        if len(coeffs) != order:
            raise ValueError(f"need exactly {order} coefficients, got {len(coeffs)}")
        self.order = order
        self.coeffs = tuple(int(c) for c in coeffs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "Cyclotomic":
        return cls(order, [0] * order)

    @classmethod
    def from_int(cls, order: int, value: int) -> "Cyclotomic":
        coeffs = [0] * order
        coeffs[0] = value
        return cls(order, coeffs)

    @classmethod
    def root(cls, order: int, power: int) -> "Cyclotomic":
        """zeta_order ** power."""
        coeffs = [0] * order
        coeffs[power % order] = 1
        return cls(order, coeffs)

    @classmethod
    def from_histogram(cls, order: int, histogram: Sequence[int]) -> "Cyclotomic":
        """sum_j histogram[j] * zeta_order^j."""
        return cls(order, histogram)

    # -- ring operations ----------------------------------------------------

    def _aligned(self, other: "Cyclotomic") -> tuple["Cyclotomic", "Cyclotomic"]:
        if self.order == other.order:
            return self, other
        target = math.lcm(self.order, other.order)
        return self.embed(target), other.embed(target)

    def embed(self, order: int) -> "Cyclotomic":
        """Reinterpret in a larger ring via zeta_d = zeta_D^(D/d), d | D."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"{self.order} does not divide target order {order}")
        step = order // self.order
        coeffs = [0] * order
        for j, c in enumerate(self.coeffs):
            coeffs[j * step] = c
        return Cyclotomic(order, coeffs)

    def __add__(self, other: "Cyclotomic | int") -> "Cyclotomic":
        if isinstance(other, int):
            other = Cyclotomic.from_int(self.order, other)
        a, b = self._aligned(other)
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.order, [-c for c in self.coeffs])

    def __sub__(self, other: "Cyclotomic | int") -> "Cyclotomic":
        return self + (-other)

    def __mul__(self, other: "Cyclotomic | int") -> "Cyclotomic":
        if isinstance(other, int):
            return Cyclotomic(self.order, [c * other for c in self.coeffs])
        a, b = self._aligned(other)
        d = a.order
        out = [0] * d
        for i, ca in enumerate(a.coeffs):
            if not ca:
                continue
            for j, cb in enumerate(b.coeffs):
                if cb:
                    out[(i + j) % d] += ca * cb
        return Cyclotomic(d, out)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        d = self.order
        out = [0] * d
        for j, c in enumerate(self.coeffs):
            out[(-j) % d] += c
        return Cyclotomic(d, out)

    def shift(self, power: int) -> "Cyclotomic":
        """Multiply by zeta_order ** power (a cyclic rotation of coefficients)."""
        d = self.order
        out = [0] * d
        for j, c in enumerate(self.coeffs):
            out[(j + power) % d] = c
        return Cyclotomic(d, out)

    # -- structure queries --------------------------------------------------

    def reduced(self) -> tuple[int, ...]:
        """Canonical representative modulo Phi_d (degree < deg Phi_d)."""
        return _rem_mod(self.coeffs, cyclotomic_polynomial(self.order))

    def is_zero(self) -> bool:
        return not any(self.reduced())

    def to_int(self) -> int | None:
        """The rational integer this value equals, or None if irrational."""
        red = self.reduced()
        if any(red[1:]):
            return None
        return red[0] if red else 0

    def is_real(self) -> bool:
        return (self - self.conjugate()).is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Cyclotomic.from_int(self.order, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._aligned(other)
        return (a - b).is_zero()

    __hash__ = None  # mutable-free but equality is modular; not hashable

    def coeff_abs_sum(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    # -- numeric views ------------------------------------------------------

    def to_tracked(self, precision: int = DEFAULT_PRECISION) -> "TrackedComplex":
        """Evaluate at zeta_d = e^(2 pi i / d) with err <= (sum |c_j|) * 2^(4-P)."""
        if precision < 64:
            raise ValueError("precision must be at least 64 bits")
        d = self.order
        with mp.workprec(precision + 16):
            re = mp.mpf(0)
            im = mp.mpf(0)
            for j, c in enumerate(self.coeffs):
                if not c:
                    continue
                ang = mp.mpf(2) * mp.pi * j / d
                re += c * mp.cos(ang)
                im += c * mp.sin(ang)
            err = mp.mpf(self.coeff_abs_sum()) * mp.mpf(2) ** (4 - precision)
            return TrackedComplex(re, im, err)

    # -- serialization ------------------------------------------------------

    def serialize(self) -> dict:
        return {"order": self.order, "coeffs": list(self.coeffs)}

    @classmethod
    def deserialize(cls, doc: dict) -> "Cyclotomic":
        return cls(int(doc["order"]), [int(c) for c in doc["coeffs"]])

    def __repr__(self) -> str:
        return f"Cyclotomic(order={self.order}, coeffs={list(self.coeffs)})"


# ---------------------------------------------------------------------------
# Tracked complex balls
# ---------------------------------------------------------------------------


class TrackedComplex:
    """Complex ball: the true value lies within ``err`` of (re, im).

    Operations run at the ambient mpmath precision and widen ``err`` by a
    conservative rounding term, so the containment invariant survives any
    sequence of arithmetic.
    """

    __slots__ = ("re", "im", "err")

    def __init__(self, re, im, err=0) -> None:
        self.re = mp.mpf(re)
        self.im = mp.mpf(im)
        self.err = mp.mpf(err)
        if self.err < 0:
            raise ValueError("error radius must be nonnegative")

    @classmethod
    def from_exact(cls, re: Fraction | int, im: Fraction | int = 0) -> "TrackedComplex":
        """Round exact rationals to the current precision, charging the rounding."""
        re_f = Fraction(re)
        im_f = Fraction(im)
        re_m = mp.mpf(re_f.numerator) / re_f.denominator
        im_m = mp.mpf(im_f.numerator) / im_f.denominator
        rnd = (abs(re_m) + abs(im_m) + 1) * mp.mpf(2) ** (2 - mp.mp.prec)
        return cls(re_m, im_m, rnd)

    def _mag(self) -> mp.mpf:
        """Upper bound for |value| including the radius."""
        return mp.hypot(self.re, self.im) + self.err

    @staticmethod
    def _rnd(*values) -> mp.mpf:
        scale = sum(abs(v) for v in values) + 1
        return scale * mp.mpf(2) ** (3 - mp.mp.prec)

    def __add__(self, other: "TrackedComplex") -> "TrackedComplex":
        re = self.re + other.re
        im = self.im + other.im
        return TrackedComplex(re, im, self.err + other.err + self._rnd(re, im))

    def __sub__(self, other: "TrackedComplex") -> "TrackedComplex":
        re = self.re - other.re
        im = self.im - other.im
        return TrackedComplex(re, im, self.err + other.err + self._rnd(re, im))

    def __neg__(self) -> "TrackedComplex":
        return TrackedComplex(-self.re, -self.im, self.err)

    def __mul__(self, other: "TrackedComplex | int | Fraction") -> "TrackedComplex":
        if isinstance(other, (int, Fraction)):
            other = TrackedComplex.from_exact(other)
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        a = mp.hypot(self.re, self.im)
        b = mp.hypot(other.re, other.im)
        err = a * other.err + b * self.err + self.err * other.err + self._rnd(re, im)
        return TrackedComplex(re, im, err)

    __rmul__ = __mul__

    def conjugate(self) -> "TrackedComplex":
        return TrackedComplex(self.re, -self.im, self.err)

    def contains_exact(self, re: Fraction, im: Fraction = Fraction(0)) -> bool:
        """Whether the exact point (re, im) lies inside the ball."""
        with mp.workprec(mp.mp.prec * 2 + 64):
            dre = self.re - mp.mpf(re.numerator) / re.denominator
            dim = self.im - mp.mpf(im.numerator) / im.denominator
            return mp.hypot(dre, dim) <= self.err * (1 + mp.mpf(2) ** (-32))

    def abs_upper(self) -> mp.mpf:
        return self._mag()

    def abs_lower(self) -> mp.mpf:
        lo = mp.hypot(self.re, self.im) - self.err
        return lo if lo > 0 else mp.mpf(0)

    def imag_bound(self) -> mp.mpf:
        return abs(self.im) + self.err

    def __repr__(self) -> str:
        return f"TrackedComplex({mp.nstr(self.re, 17)}, {mp.nstr(self.im, 17)}, err={mp.nstr(self.err, 5)})"


# ---------------------------------------------------------------------------
# Log-magnitude exchange format
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogMagnitude:
    """sign in {-1, 0, +1} and ln|value| (ln_abs = -inf encodes zero)."""

    sign: int
    ln_abs: object  # mpmath.mpf

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        object.__setattr__(self, "ln_abs", mp.mpf("-inf") if self.sign == 0 else mp.mpf(self.ln_abs))

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(0, mp.mpf("-inf"))

    @classmethod
    def from_int(cls, value: int) -> "LogMagnitude":
        return cls.from_fraction(Fraction(value))

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "LogMagnitude":
        value = Fraction(value)
        if value == 0:
            return cls.zero()
        with mp.workdps(_LOG_DPS):
            ln = _ln_big_int(abs(value.numerator)) - _ln_big_int(value.denominator)
        return cls(1 if value > 0 else -1, ln)

    @classmethod
    def from_ln(cls, sign: int, ln_abs) -> "LogMagnitude":
        return cls(sign, ln_abs)

    # -- arithmetic ---------------------------------------------------------

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.sign == 0 or other.sign == 0:
            return LogMagnitude.zero()
        with mp.workdps(_LOG_DPS):
            return LogMagnitude(self.sign * other.sign, self.ln_abs + other.ln_abs)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.sign == 0:
            raise ZeroDivisionError("LogMagnitude division by zero")
        if self.sign == 0:
            return LogMagnitude.zero()
        with mp.workdps(_LOG_DPS):
            return LogMagnitude(self.sign * other.sign, self.ln_abs - other.ln_abs)

    def __pow__(self, exponent: int) -> "LogMagnitude":
        if self.sign == 0:
            if exponent <= 0:
                raise ZeroDivisionError("nonpositive power of zero")
            return self
        with mp.workdps(_LOG_DPS):
            return LogMagnitude(self.sign**exponent, self.ln_abs * exponent)

    def sqrt(self) -> "LogMagnitude":
        if self.sign < 0:
            raise ValueError("sqrt of a negative LogMagnitude")
        if self.sign == 0:
            return self
        with mp.workdps(_LOG_DPS):
            return LogMagnitude(1, self.ln_abs / 2)

    def abs(self) -> "LogMagnitude":
        return LogMagnitude(abs(self.sign), self.ln_abs)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        with mp.workdps(_LOG_DPS):
            return float(self.sign * mp.e**self.ln_abs)

    # -- serialization ------------------------------------------------------

    def serialize(self) -> dict:
        return {
            "sign": self.sign,
            "ln_abs": None if self.sign == 0 else mp.nstr(self.ln_abs, 15),
        }

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogMagnitude(0)"
        return f"LogMagnitude(sign={self.sign}, ln_abs={mp.nstr(self.ln_abs, 15)})"


def _ln_big_int(value: int):
    """ln of a positive big integer at the ambient mpmath precision."""
    if value <= 0:
        raise ValueError("need a positive integer")
    if value.bit_length() <= _EXACT_LOG_BIT_LIMIT:
        return mp.log(mp.mpf(value))
    return mp.loggamma(value + 1) - mp.loggamma(value)  # unreachable in practice


def log_combinatorial(kind: str, *args) -> LogMagnitude:
    """ln of an exact factorial, binomial or multinomial, as a LogMagnitude.

    The exact big-integer path is used whenever the integer stays at or
    below 10^6 bits; past that the value falls back to loggamma.
    """
    with mp.workdps(_LOG_DPS):
        if kind == "factorial":
            (n,) = args
            if n < 0:
                raise ValueError("factorial of a negative integer")
            if _factorial_bits(n) <= _EXACT_LOG_BIT_LIMIT:
                return LogMagnitude(1, _ln_big_int(math.factorial(n))) if n > 1 else LogMagnitude(1, mp.mpf(0))
            return LogMagnitude(1, mp.loggamma(mp.mpf(n) + 1))
        if kind == "binomial":
            n, k = args
            value = math.comb(n, k)
            if value == 0:
                return LogMagnitude.zero()
            return LogMagnitude(1, _ln_big_int(value))
        if kind == "multinomial":
            n, parts = args
            return LogMagnitude(1, _ln_big_int(multinomial(n, list(parts))))
    raise ValueError(f"unknown kind {kind!r}")


def _factorial_bits(n: int) -> float:
    if n < 2:
        return 1.0
    return n * (math.log2(n) - 1.4) + 16  # slight underestimate of log2(n!) is fine here


def log_fraction(value: Fraction | int) -> LogMagnitude:
    return LogMagnitude.from_fraction(value)
