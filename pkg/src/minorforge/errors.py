"""Shared exception types and the size-guard helper."""

import os


class SizeGuardError(ValueError):
    """An input exceeds the desk-scale size guard of an exact operation."""


class BudgetExceededError(RuntimeError):
    """An exact enumeration ran out of its configured node budget."""


def guard_limit(default: int) -> int:
    """Effective guard limit, scaled by the FORGE_GUARD_OVERRIDE multiplier."""
    raw = os.environ.get("FORGE_GUARD_OVERRIDE")
    if not raw:
        return default
    try:
        factor = int(raw)
    except ValueError:
        return default
    return default * max(1, factor)


def check_size(value: int, default_limit: int, what: str) -> None:
    """Raise SizeGuardError when ``value`` exceeds the effective limit."""
    limit = guard_limit(default_limit)
    if value > limit:
        raise SizeGuardError(f"{what} is {value}, exceeding the size guard of {limit}")
