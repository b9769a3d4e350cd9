"""Structured pass/fail records emitted by every verification suite."""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .exactnum import LogMagnitude

#: A report passes when ln(bound) - ln(measured) >= -MARGIN_SLACK.  The
#: slack absorbs log-evaluation noise (~1e-12 here), never real violations.
MARGIN_SLACK = 1e-9


@dataclass(frozen=True)
class BoundReport:
    subject: str
    measured: LogMagnitude
    bound: LogMagnitude
    margin: float
    passed: bool
    extra: dict = field(default_factory=dict)

    @classmethod
    def build(cls, subject: str, measured: LogMagnitude, bound: LogMagnitude, **extra) -> "BoundReport":
        if measured.sign == 0:
            margin = float("inf")
        elif bound.sign == 0:
            margin = float("-inf")
        else:
            margin = float(bound.ln_abs - measured.ln_abs)
        return cls(subject, measured, bound, margin, margin >= -MARGIN_SLACK, dict(extra))

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "measured": self.measured.serialize(),
            "bound": self.bound.serialize(),
            "margin": None if mp.isinf(self.margin) else float(self.margin),
            "passed": self.passed,
            **{k: _plain(v) for k, v in sorted(self.extra.items())},
        }


def _plain(value):
    from fractions import Fraction

    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, LogMagnitude):
        return value.serialize()
    if isinstance(value, mp.mpf):
        return mp.nstr(value, 15)
    return value
