"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """A parameter lies outside the range where a formula is defined."""


class OracleScaleError(ValueError):
    """Raised when a brute-force routine is asked to run above its cap."""

    def __init__(self, what: str, n: int, cap: int):
        super().__init__(f"oracle scale exceeded: {what} with n={n} (cap {cap})")
        self.n = n
        self.cap = cap


class ExactComputationInfeasible(RuntimeError):
    """No exact strategy applies at this size.

    ``bounds`` maps a label to the bound the caller may use instead.
    """

    def __init__(self, message: str, bounds: dict | None = None):
        super().__init__(f"exact computation infeasible: {message}")
        self.bounds = dict(bounds or {})
