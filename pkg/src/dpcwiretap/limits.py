"""Enumeration budget shared by the exhaustive oracles and the simulator."""

import os

from .errors import BudgetExceededError

DEFAULT_BUDGET = 1 << 24
ENV_VAR = "WIRETAP_DET_BUDGET"


def enumeration_budget(override=None):
    """Return the active cap on enumerated joint outcomes.

    The environment variable can only lower the default cap; an explicit
    ``override`` is clamped the same way.
    """
    cap = DEFAULT_BUDGET
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            cap = min(cap, int(raw))
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if override is not None:
        cap = min(cap, int(override))
    return max(cap, 0)


def check_budget(outcomes, what, budget=None):
    cap = enumeration_budget(budget)
    if outcomes > cap:
        raise BudgetExceededError(
            f"{what}: {outcomes} outcomes exceed the enumeration budget of {cap}"
        )
