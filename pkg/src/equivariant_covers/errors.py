from __future__ import annotations

from typing import Sequence


class CoverError(Exception):
    """Base class for every error raised by equivariant_covers."""


class InvalidSpec(CoverError):
    def __init__(self, violations: Sequence[object] = ()):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations) or "invalid problem"
        super().__init__(detail)


class MalformedSpec(CoverError):
    pass


class NonIntegralGenus(CoverError):
    pass


class NegativeGenus(CoverError):
    pass


class CongruenceViolated(CoverError):
    pass


class HypothesesNotMet(CoverError):
    pass


class DomainMismatch(CoverError):
    pass


class ZeroInput(CoverError):
    pass


class PrecisionExhausted(CoverError):
    pass


class TrackingBudgetExceeded(CoverError):
    pass


class UnbalancedSystem(CoverError):
    pass
