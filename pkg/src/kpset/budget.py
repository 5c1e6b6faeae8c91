"""Evaluation budget shared by the enumeration-heavy routines.

One knob: the total number of elementary operations (grid cells, box
counts, shift evaluations) a single call may spend.  Override with the
``KPSET_BUDGET`` environment variable.
"""

import os

DEFAULT_BUDGET = 10**8


class BudgetExceededError(RuntimeError):
    pass


def eval_budget() -> int:
    raw = os.environ.get("KPSET_BUDGET")
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    return int(float(raw))


def require(cost: int, what: str, budget: int | None = None, advice: str = "") -> None:
    limit = eval_budget() if budget is None else budget
    if cost > limit:
        msg = f"{what} needs ~{cost:.3g} operations, budget is {limit:.3g}"
        if advice:
            msg += f"; {advice}"
        raise BudgetExceededError(msg)
