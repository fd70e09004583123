"""Exception types shared across the package."""

import os

DEFAULT_STEP_BUDGET = 10**6


class LogbError(Exception):
    """Base class; ``kind`` is the short tag used in CLI error reports."""

    kind = "error"


class MalformedInput(LogbError, ValueError):
    kind = "malformed-input"


class UnsupportedMonoid(LogbError):
    kind = "unsupported-monoid"


class NotPointed(LogbError):
    kind = "not-pointed"


class SearchBudgetExceeded(LogbError):
    kind = "search-bound-exceeded"


class WeightNotInMonoid(LogbError):
    kind = "weight-not-in-P"


class DimensionGuard(LogbError):
    kind = "dimension-guard"


def step_budget():
    """Completion/search budget, overridable through ``LOGB_STEP_BUDGET``."""
    raw = os.environ.get("LOGB_STEP_BUDGET")
    if raw is None:
        return DEFAULT_STEP_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise MalformedInput(f"LOGB_STEP_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise MalformedInput("LOGB_STEP_BUDGET must be positive")
    return value
