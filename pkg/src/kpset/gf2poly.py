"""Arithmetic with polynomials over GF(2).

A polynomial is a nonnegative Python int: bit i is the coefficient of x^i.
The integer n therefore *is* the polynomial n(x) obtained from its binary
expansion, so indices, generators and frequencies move between the two
views for free.  Addition is xor.

The zero polynomial has no degree; ``degree(0)`` returns ``None`` so any
attempt to do arithmetic with it fails loudly.
"""

from __future__ import annotations

from functools import lru_cache

MAX_M = 31


class ZeroModulusError(ZeroDivisionError):
    pass


def check_m(m: int) -> int:
    if not 1 <= m <= MAX_M:
        raise ValueError(f"m must be in 1..{MAX_M}, got {m}")
    return m


def degree(a: int) -> int | None:
    """Degree of ``a``; ``None`` for the zero polynomial."""
    if a < 0:
        raise ValueError("polynomial masks are nonnegative")
    if a == 0:
        return None
    return a.bit_length() - 1


def add(a: int, b: int) -> int:
    return a ^ b


def mul(a: int, b: int) -> int:
    """Carry-less product."""
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def divmod_poly(a: int, b: int) -> tuple[int, int]:
    """Return ``(quotient, remainder)`` with ``a = quotient*b + remainder``."""
    if b == 0:
        raise ZeroModulusError("zero modulus")
    db = b.bit_length() - 1
    q = 0
    while a and a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def mod(a: int, b: int) -> int:
    return divmod_poly(a, b)[1]


def mul_mod(a: int, b: int, p: int) -> int:
    """``(a*b) mod p``; requires ``deg p >= 1``."""
    _check_modulus(p)
    # shift-and-add with reduction at each step keeps operands below 2^deg(p)
    dp = p.bit_length() - 1
    top = 1 << dp
    a = mod(a, p)
    b = mod(b, p)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= p
    return r


def pow_mod(q: int, e: int, p: int) -> int:
    """``q^e mod p`` by square-and-multiply."""
    _check_modulus(p)
    if e < 0:
        raise ValueError("negative exponent")
    result = 1
    base = mod(q, p)
    while e:
        if e & 1:
            result = mul_mod(result, base, p)
        base = mul_mod(base, base, p)
        e >>= 1
    return mod(result, p)


def _check_modulus(p: int) -> None:
    if p == 0:
        raise ZeroModulusError("zero modulus")
    if p == 1:
        raise ValueError("modulus must have degree >= 1")


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    d = degree(p)
    if d is None or d == 0:
        raise ValueError("degree zero")
    for f in range(2, 1 << (d // 2 + 1)):
        if mod(p, f) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def irreducibles(m: int) -> tuple[int, ...]:
    """All irreducible polynomials of degree ``m`` in ascending integer order."""
    check_m(m)
    return tuple(p for p in range(1 << m, 1 << (m + 1)) if is_irreducible(p))


def smallest_irreducible(m: int) -> int:
    check_m(m)
    for p in range(1 << m, 1 << (m + 1)):
        if is_irreducible(p):
            return p
    raise AssertionError("unreachable: irreducibles exist for every degree")


def enumerate_gm(m: int) -> range:
    """G_m, the 2^m polynomials of degree < m, ascending."""
    if m < 1:
        raise ValueError("m must be positive")
    return range(1 << m)


def to_hex(a: int) -> str:
    return hex(a)


def from_hex(text: str) -> int:
    value = int(text, 16)
    if value < 0:
        raise ValueError("polynomial masks are nonnegative")
    return value


def poly_str(a: int) -> str:
    """Human-readable form, e.g. ``x^2 + x + 1``."""
    if a == 0:
        return "0"
    terms = []
    for i in range(a.bit_length() - 1, -1, -1):
        if a >> i & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return " + ".join(terms)
