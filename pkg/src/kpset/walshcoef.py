"""Walsh coefficients of anchored-interval indicators.

For a bound ``b = bnum / 2^m`` the indicator of ``[0, b)`` restricted to the
depth-m grid is exactly ``sum_{k < 2^m} c_k(b) wal_k(x)`` with

    c_k(b) = 2^-m * sum_{v < bnum} wal_k(v / 2^m).

Coefficients are kept as integer numerators over ``2^m`` (products over
``2^{ms}``) so the identities checked in the test suite are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .dyadic import Dyadic, ExtendedDyadic, ScaleMismatchError, walsh_table


@lru_cache(maxsize=32)
def coeff_matrix(m: int) -> np.ndarray:
    """``C[k, bnum] = 2^m * c_k(bnum / 2^m)`` for k < 2^m, 0 <= bnum <= 2^m.

    One prefix sum of Walsh values per frequency; the returned array is
    read-only because it is shared through the cache.
    """
    if m > 14:
        raise ValueError(f"coefficient table for m={m} would need 2^{2 * m} entries")
    w = walsh_table(m).astype(np.int64)
    c = np.zeros((w.shape[0], w.shape[1] + 1), dtype=np.int64)
    np.cumsum(w, axis=1, out=c[:, 1:])
    c.flags.writeable = False
    return c


@dataclass(frozen=True)
class CoeffTable:
    m: int
    b: ExtendedDyadic
    numerators: np.ndarray  # 2^m * c_k(b), indexed by k

    @property
    def values(self) -> np.ndarray:
        return self.numerators / float(1 << self.m)

    def exact(self, k: int) -> Fraction:
        return Fraction(int(self.numerators[k]), 1 << self.m)


def coeff_table(b: ExtendedDyadic) -> CoeffTable:
    return CoeffTable(b.m, b, coeff_matrix(b.m)[:, b.num])


def walsh_coeff(k: int, b: ExtendedDyadic) -> Fraction:
    """``c_k(b)`` as an exact fraction; ``float()`` it for the real value."""
    if not 0 <= k < (1 << b.m):
        raise ValueError(f"frequency out of range: k={k} with m={b.m}")
    return Fraction(int(coeff_matrix(b.m)[k, b.num]), 1 << b.m)


def walsh_coeff_vec(k: Sequence[int], b: Sequence[ExtendedDyadic]) -> Fraction:
    if len(k) != len(b):
        raise ValueError(f"dimension mismatch: {len(k)} frequencies, {len(b)} bounds")
    out = Fraction(1)
    for kj, bj in zip(k, b):
        out *= walsh_coeff(kj, bj)
    return out


def indicator_via_walsh(x: Dyadic, b: ExtendedDyadic, tol: float = 1e-9) -> int:
    """Evaluate the Walsh series of ``1_[0,b)`` at x and check it against ``x < b``."""
    if x.m != b.m:
        raise ScaleMismatchError(f"scales differ: {x.m} vs {b.m}")
    m = x.m
    column = coeff_matrix(m)[:, b.num]
    series = float(np.dot(column, walsh_table(m)[:, x.num].astype(np.int64))) / (1 << m)
    direct = int(x.num < b.num)
    if abs(series - direct) > tol:
        raise AssertionError(f"Walsh series {series} != indicator {direct} at x={x}, b={b}")
    return direct


def series_matrix(m: int) -> np.ndarray:
    """``M[x, bnum] = 2^m * sum_k c_k(b) wal_k(x)`` for every grid pair."""
    w = walsh_table(m).astype(np.int64)
    return w.T @ coeff_matrix(m)


def _prod_outer(vectors: list[np.ndarray]) -> np.ndarray:
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out


def coeff_identity_report(m: int, b_nums: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Brute-force ``sum_{k != 0} c_k(b)`` and ``sum_{k != 0} c_k(b)^2``.

    Every one of the ``2^{ms}`` frequency vectors is formed explicitly; no
    factorisation over coordinates is used.
    """
    s = len(b_nums)
    if s == 0:
        raise ValueError("empty bound vector")
    table = coeff_matrix(m)
    cols = [table[:, bn] for bn in b_nums]
    if 2 * m * s + 1 > 62:
        cols = [c.astype(object) for c in cols]
    prods = _prod_outer(cols)
    zero = prods[(0,) * s]
    total = prods.sum() - zero
    total_sq = (prods * prods).sum() - zero * zero
    denom = 1 << (m * s)
    return Fraction(int(total), denom), Fraction(int(total_sq), denom * denom)


def closed_forms(m: int, b_nums: Sequence[int]) -> tuple[Fraction, Fraction]:
    """``(1 - prod b, prod b (1 - prod b))`` for comparison with the brute force."""
    vol = Fraction(1)
    for bn in b_nums:
        vol *= Fraction(bn, 1 << m)
    return 1 - vol, vol * (1 - vol)
