"""Depth-m dyadic rationals, digital shifts and Walsh functions.

A depth-m dyadic ``x = xi_1/2 + ... + xi_m/2^m`` is stored by its numerator
``num = x * 2^m``.  Digit ``xi_1`` is the *most* significant bit of the m-bit
numerator, while the Walsh frequency ``k = kappa_0 + kappa_1*2 + ...`` is read
from its *least* significant bit.  ``wal_k(x)`` pairs ``xi_{i+1}`` with
``kappa_i``, which is the parity of ``bit_reverse_m(num) & k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class ScaleMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Dyadic:
    """``num / 2^m`` with ``0 <= num < 2^m``."""

    num: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if not 0 <= self.num < (1 << self.m):
            raise ValueError(f"numerator {self.num} outside [0, 2^{self.m})")

    @property
    def value(self) -> float:
        return self.num / (1 << self.m)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.m)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.m}"


@dataclass(frozen=True)
class ExtendedDyadic:
    """A box bound ``num / 2^m`` with ``0 <= num <= 2^m``."""

    num: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if not 0 <= self.num <= (1 << self.m):
            raise ValueError(f"numerator {self.num} outside [0, 2^{self.m}]")

    @property
    def value(self) -> float:
        return self.num / (1 << self.m)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.m)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.m}"


def parse_dyadic(text: str, m: int) -> int:
    """Parse ``"num/2^m"`` (or a bare numerator) and return the numerator at scale m."""
    text = text.strip()
    if "/" not in text:
        return int(text)
    num, den = text.split("/")
    den = den.strip()
    if den.startswith("2^"):
        scale = int(den[2:])
    else:
        d = int(den)
        if d & (d - 1):
            raise ValueError(f"{text!r} is not dyadic")
        scale = d.bit_length() - 1
    if scale > m:
        raise ScaleMismatchError(f"{text!r} is finer than 2^-{m}")
    return int(num) << (m - scale)


def digital_shift(x: Dyadic, sigma: Dyadic) -> Dyadic:
    if x.m != sigma.m:
        raise ScaleMismatchError(f"scales differ: {x.m} vs {sigma.m}")
    return Dyadic(x.num ^ sigma.num, x.m)


def bit_reverse(num: int, m: int) -> int:
    out = 0
    for _ in range(m):
        out = (out << 1) | (num & 1)
        num >>= 1
    return out


def bit_reverse_array(nums: np.ndarray, m: int) -> np.ndarray:
    nums = np.asarray(nums, dtype=np.int64)
    out = np.zeros_like(nums)
    for i in range(m):
        out |= ((nums >> i) & 1) << (m - 1 - i)
    return out


def parity(values: np.ndarray) -> np.ndarray:
    """Popcount parity of nonnegative int64 values (elementwise)."""
    v = np.asarray(values, dtype=np.uint64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.int64)


def walsh_num(k: int, num: int, m: int) -> int:
    """``wal_k(num / 2^m)`` on raw integers."""
    if not 0 <= k < (1 << m):
        raise ValueError(f"frequency out of range: k={k} with m={m}")
    return -1 if bin(bit_reverse(num, m) & k).count("1") & 1 else 1


def walsh(k: int, x: Dyadic) -> int:
    return walsh_num(k, x.num, x.m)


def walsh_vec(k: Sequence[int], x: Sequence[Dyadic]) -> int:
    if len(k) != len(x):
        raise ValueError(f"dimension mismatch: {len(k)} frequencies, {len(x)} coordinates")
    out = 1
    for kj, xj in zip(k, x):
        out *= walsh(kj, xj)
    return out


def walsh_table(m: int) -> np.ndarray:
    """``W[k, v] = wal_k(v / 2^m)`` for all k, v < 2^m, as int8."""
    n = 1 << m
    rev = bit_reverse_array(np.arange(n), m)
    return (1 - 2 * parity(np.arange(n)[:, None] & rev[None, :])).astype(np.int8)


def walsh_points(k: Sequence[int], points: np.ndarray, m: int) -> np.ndarray:
    """``wal_k(x)`` for every row of a ``(N, s)`` numerator array."""
    points = np.asarray(points, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    if points.shape[1] != k.shape[0]:
        raise ValueError("dimension mismatch")
    if np.any(k < 0) or np.any(k >= (1 << m)):
        raise ValueError("frequency out of range")
    acc = np.zeros(points.shape[0], dtype=np.int64)
    rev = bit_reverse_array(points, m)
    for j in range(k.shape[0]):
        acc ^= rev[:, j] & k[j]
    return 1 - 2 * parity(acc)
