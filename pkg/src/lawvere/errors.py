"""Exception types and the enumeration cap shared by the whole package."""

import os

DEFAULT_CAP = 2**20


class LawvereError(Exception):
    """Base class for errors raised by this package."""


class CarrierMismatch(LawvereError, ValueError):
    pass


class ArityMismatch(LawvereError, ValueError):
    pass


class EnumerationTooLarge(LawvereError):
    """Raised when a slice would have to enumerate more tables than the cap allows."""


class IntractableSlice(LawvereError):
    """Raised when neither enumeration nor backtracking fits the configured budgets."""

    def __init__(self, arity: int, reason: str = ""):
        msg = f"commutant slice intractable at arity {arity}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
        self.arity = arity


def enumeration_cap(cap: int | None = None) -> int:
    """Resolve the enumeration cap: explicit value, then $CLONE_COMMUTANT_CAP, then 2**20."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("CLONE_COMMUTANT_CAP")
    if env:
        return int(env)
    return DEFAULT_CAP
