"""Error classes shared across the package.

CLI exit-code mapping: usage-level errors (LimitExceeded, EvenOrderError,
bad arguments) exit 2; resource exhaustion (PrecisionExhausted,
MemoCapacityExceeded) exits 3; verification failures exit 1.
"""


class LimitExceeded(ValueError):
    """An input is beyond a configured feasibility limit."""


class EvenOrderError(ValueError):
    """An odd-order-only operation received a group of even order."""


class PrecisionExhausted(RuntimeError):
    """Precision doubling hit the configured ceiling without meeting budget."""


class MemoCapacityExceeded(RuntimeError):
    """The recursion memo grew past its configured capacity."""

    def __init__(self, message: str, stats: dict | None = None) -> None:
        super().__init__(message)
        self.stats = dict(stats or {})
