"""Bennett/Bernstein tails and the discrepancy bounds built from them.

``delta`` is a *success* probability throughout: the bounds hold with
probability at least ``delta``, so larger ``delta`` means larger bounds.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class BoundParams:
    m: int
    s: int
    delta: float
    B: float | None = None  # variance budget; None means B = s
    c: float = 1.0

    def __post_init__(self):
        if self.m < 1 or self.s < 1:
            raise ValueError("m and s must be positive")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.B is not None and not self.B > 0:
            raise ValueError("B must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")

    @property
    def variance_budget(self) -> float:
        return float(self.s) if self.B is None else float(self.B)


@dataclass(frozen=True)
class BoundReport:
    L: float
    t_zero: float
    bernstein_at_t0: float
    theorem_bound: float
    pgen_bound: float

    def to_dict(self) -> dict:
        return asdict(self)


def bennett_h(u: float) -> float:
    """``(1+u) log(1+u) - u``."""
    if u < 0:
        raise ValueError("Bennett function needs u >= 0")
    if u < 1e-3:
        # sum_{k>=2} (-u)^k / (k (k-1)); the closed form cancels badly here
        return sum((-u) ** k / (k * (k - 1)) for k in range(2, 9))
    return (1.0 + u) * math.log1p(u) - u


def _check_tail_args(v: float, c: float, t: float) -> None:
    if not v > 0 or not c > 0:
        raise ValueError("v and c must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")


def bennett_tail(v: float, c: float, t: float) -> float:
    """Two-sided Bennett bound on ``P(|S| >= t)``."""
    _check_tail_args(v, c, t)
    return min(2.0, max(0.0, 2.0 * math.exp(-(v / c**2) * bennett_h(c * t / v))))


def bernstein_tail(v: float, c: float, t: float) -> float:
    _check_tail_args(v, c, t)
    return 2.0 * math.exp(-t * t / (2.0 * (v + c * t / 3.0)))


def log_term(m: int, s: int, delta: float) -> float:
    """``L = log(2 (2^m+1)^s) - log(1 - delta)``."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.log(2.0) + s * math.log((1 << m) + 1.0) - math.log1p(-delta)


def t_zero(params: BoundParams) -> float:
    """Positive root of ``t^2 - (2/3) L t - 2 B L = 0``."""
    L = log_term(params.m, params.s, params.delta)
    return (L / 3.0) * (1.0 + math.sqrt(1.0 + 18.0 * params.variance_budget / L))


def union_tail(params: BoundParams, t: float) -> float:
    """``2 (2^m+1)^s exp(-t^2 / (2B + 2t/3))``, the union-bound failure probability."""
    B = params.variance_budget
    return 2.0 * ((1 << params.m) + 1.0) ** params.s * math.exp(-t * t / (2.0 * B + 2.0 * t / 3.0))


def leading_constant() -> float:
    return (1.0 + math.sqrt(1.0 + 18.0 / math.log(3.0))) / 3.0


def theorem_bound(N: int, s: int, delta: float) -> float:
    """Star-discrepancy bound for the ``N = 2^{2m}``-point unions of both constructions."""
    if N < 4 or N & (N - 1) or (N.bit_length() - 1) % 2:
        raise ValueError(f"N must be 2^(2m) with m >= 1, got {N}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    numer = s * (math.log(2.0 * N) + 1.0) + math.log(2.0) - math.log1p(-delta)
    return leading_constant() * numer / math.sqrt(N)


def pgen_bound(params: BoundParams) -> float:
    """Bound for unions of generic point sets whose character sums are at most B."""
    size = float(1 << params.m)
    return t_zero(params) / size + params.s / size


def report(params: BoundParams) -> BoundReport:
    t0 = t_zero(params)
    return BoundReport(
        L=log_term(params.m, params.s, params.delta),
        t_zero=t0,
        bernstein_at_t0=union_tail(params, t0),
        theorem_bound=theorem_bound(1 << (2 * params.m), params.s, params.delta),
        pgen_bound=pgen_bound(params),
    )
