"""Exhaustive small-instance checks of the identities behind the construction.

Each ``verify_*`` function enumerates its instance space completely (or a
seeded random sample where stated) in exact integer arithmetic and returns a
:class:`VerificationResult`.  ``SUITES`` lists the names accepted by
``kpset verify --suite``; ``SUITE_ALIASES`` maps alternative names onto them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from . import gf2poly as gf
from .budget import require
from .dyadic import walsh_points
from .discrepancy import Box, grid_discrepancy, star_discrepancy_exact_fraction
from .lattice import PointSet, generating_vector, korobov_numerators, nu_m
from .walshcoef import closed_forms, coeff_identity_report, coeff_matrix, series_matrix

MAX_WITNESSES = 10


@dataclass
class VerificationResult:
    suite: str
    instances_checked: int = 0
    max_violation: Fraction | float = Fraction(0)
    passed: bool = True
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, witness, violation) -> None:
        self.passed = False
        if violation > self.max_violation:
            self.max_violation = violation
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def merge(self, other: "VerificationResult") -> None:
        self.instances_checked += other.instances_checked
        self.passed = self.passed and other.passed
        if other.max_violation > self.max_violation:
            self.max_violation = other.max_violation
        room = MAX_WITNESSES - len(self.witnesses)
        self.witnesses.extend(other.witnesses[:room])
        for key, value in other.details.items():
            if isinstance(value, (int, float, Fraction)) and isinstance(self.details.get(key), (int, float, Fraction)):
                self.details[key] = max(self.details[key], value)
            else:
                self.details.setdefault(key, value)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in self.details.items())
        return (f"{status} {self.suite} instances={self.instances_checked} "
                f"max_violation={self.max_violation}{extra}")


def _all_boxes(m: int, s: int) -> np.ndarray:
    side = (1 << m) + 1
    return np.indices((side,) * s).reshape(s, -1).T


def _vol_numerators(m: int, s: int) -> list[int]:
    return [int(np.prod([int(b) for b in box])) if s else 1 for box in _all_boxes(m, s)]


def _as_object(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).astype(object)


# --- shift expectation ------------------------------------------------------

def verify_shift_expectation(E: PointSet, box: Box | None = None) -> VerificationResult:
    """Sum over every shift sigma of ``Delta(E + sigma, J(b))`` must be exactly zero.

    With ``box=None`` every box of the extended grid is checked at once.
    """
    m, s, n = E.m, E.s, E.N
    res = VerificationResult("shift-mean")
    if m * s > 20:
        raise ValueError("shift enumeration limited to m*s <= 20")
    cells = ((1 << m) + 1) ** s
    require((1 << (m * s)) * (n + cells * s), "shift enumeration")
    sum1, _ = _kernels.shift_count_moments(E.points, m)
    vols = np.asarray(_vol_numerators(m, s), dtype=object)
    # sum_sigma Delta = (sum_sigma A)/N - 2^{ms} vol;  zero iff sum_sigma A == N * vol_num
    gap = _as_object(sum1) - n * vols
    indices = range(cells) if box is None else [int(np.ravel_multi_index(box.upper, ((1 << m) + 1,) * s))]
    denom = n << (m * s)
    for idx in indices:
        res.instances_checked += 1
        if gap[idx] != 0:
            res.fail({"box": tuple(int(b) for b in _all_boxes(m, s)[idx])}, Fraction(abs(int(gap[idx])), denom))
    return res


# --- variance of the local discrepancy of a randomly shifted Korobov set ----------

def variance_table(p: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact ``E_{q,sigma}[Delta^2]`` and the bound ``(s/2^m) V (1 - V)`` per grid box.

    Both as object arrays of Fractions in flattened grid order.
    """
    m = gf.degree(p)
    if not gf.is_irreducible(p):
        raise ValueError(f"modulus {gf.to_hex(p)} is not irreducible")
    cells = ((1 << m) + 1) ** s
    require((1 << m) * (1 << (m * s)) * ((1 << m) + cells * s), "variance enumeration")
    n = 1 << m
    scale = 1 << (m * s)
    vols = np.asarray(_vol_numerators(m, s), dtype=object)
    total = np.zeros(cells, dtype=object)
    for q in gf.enumerate_gm(m):
        sum1, sum2 = _kernels.shift_count_moments(korobov_numerators(q, p, s), m)
        a1, a2 = _as_object(sum1), _as_object(sum2)
        # sum_sigma (A*2^{ms} - N*V)^2
        total += scale * scale * a2 - 2 * scale * n * vols * a1 + scale * n * n * vols * vols
    denom = n * scale * n * n * scale * scale
    avg = np.array([Fraction(int(t), denom) for t in total], dtype=object)
    bound = np.array([Fraction(s * int(v) * (scale - int(v)), n * scale * scale) for v in vols], dtype=object)
    return avg, bound


def verify_variance(p: int, s: int, box: Box | None = None) -> VerificationResult:
    """Average of ``Delta^2`` over all q and all shifts is at most ``(s/2^m) V (1-V)``."""
    m = gf.degree(p)
    avg, bound = variance_table(p, s)
    boxes = _all_boxes(m, s)
    res = VerificationResult("variance")
    indices = range(len(avg)) if box is None else [int(np.ravel_multi_index(box.upper, ((1 << m) + 1,) * s))]
    equal = tight = 0
    sharper = True
    for idx in indices:
        res.instances_checked += 1
        a, b = avg[idx], bound[idx]
        if a > b:
            res.fail({"p": gf.to_hex(p), "box": tuple(int(x) for x in boxes[idx]), "avg": str(a), "bound": str(b)}, a - b)
        if b > 0 and a == b:
            equal += 1
        if b > 0 and s > 1 and a * s == b * (s - 1):
            tight += 1
        if a * s > b * (s - 1):
            sharper = False
    res.details = {"equality_boxes": equal, "s_minus_1_tight_boxes": tight, "s_minus_1_bound_holds": sharper}
    return res


def variance_via_coefficients(p: int, s: int, b_nums: Sequence[int]) -> Fraction:
    """``sum_{k != 0} c_k(b)^2 * (1/2^m) #{q : k.(1,q,..,q^{s-1}) = 0 mod p}``.

    Assembled from Walsh coefficients and the algebraic character count only;
    no point set is shifted or counted.
    """
    m = gf.degree(p)
    table = coeff_matrix(m)
    counts = dual_counts(p, s)
    total = Fraction(0)
    for k in itertools.product(range(1 << m), repeat=s):
        if not any(k):
            continue
        c = 1
        for kj, bj in zip(k, b_nums):
            c *= int(table[kj, bj])
        if c:
            total += Fraction(c * c * counts[k], 1 << (2 * m * s + m))
    return total


# --- character sums -----------------------------------------------------------

def dual_indicator(k: Sequence[int], q: int, p: int) -> int:
    """``1{k_1 + k_2 q + ... + k_s q^{s-1} = 0 mod p}``."""
    acc = 0
    for kj, g in zip(k, generating_vector(q, p, len(k))):
        acc ^= gf.mul_mod(kj, g, p)
    return int(acc == 0)


def dual_counts(p: int, s: int) -> dict[tuple[int, ...], int]:
    """``#{q in G_m : k is dual to (1, q, ...)}`` for every frequency vector k."""
    m = gf.degree(p)
    out = {}
    gens = [generating_vector(q, p, s) for q in gf.enumerate_gm(m)]
    for k in itertools.product(range(1 << m), repeat=s):
        c = 0
        for g in gens:
            acc = 0
            for kj, gj in zip(k, g):
                acc ^= gf.mul_mod(kj, gj, p)
            c += acc == 0
        out[k] = c
    return out


def character_sums(points: np.ndarray, m: int) -> np.ndarray:
    """``sum_n wal_k(x_n)`` for all k, shaped ``(2^m,)*s``."""
    s = points.shape[1]
    return _kernels.walsh_sums(points, m).reshape((1 << m,) * s)


def verify_character_sum(p: int, s: int) -> VerificationResult:
    """``2^-m sum_l wal_k(x_l(q))`` equals the dual indicator for every q and k != 0."""
    m = gf.degree(p)
    res = VerificationResult("charsum")
    require((1 << m) * (1 << (m * s)) * s * m, "character-sum enumeration")
    for q in gf.enumerate_gm(m):
        sums = character_sums(korobov_numerators(q, p, s), m)
        for k in itertools.product(range(1 << m), repeat=s):
            if not any(k):
                continue
            res.instances_checked += 1
            lhs = Fraction(int(sums[k]), 1 << m)
            rhs = dual_indicator(k, q, p)
            if lhs != rhs:
                res.fail({"p": gf.to_hex(p), "q": gf.to_hex(q), "k": k, "lhs": str(lhs), "rhs": rhs}, abs(lhs - rhs))
    return res


def assumption_B(sets: Sequence[PointSet] | np.ndarray, k: Sequence[int], m: int | None = None,
                 translation: bool = False) -> Fraction:
    """``|sum_r 2^{-2m} sum_{n,n'} wal_k(x_n(r) + x_{n'}(r))|`` for a family of sets.

    The double sum equals ``(sum_n wal_k(x_n))^2`` because Walsh functions are
    characters.  With ``translation=True`` the single-sum form
    ``2^-m sum_l wal_k(x_l)`` is used instead, which is valid for sets closed
    under digital addition such as Korobov lattices.
    """
    if not any(k):
        raise ValueError("k = 0 is excluded")
    if isinstance(sets, np.ndarray):
        if m is None:
            raise ValueError("m is required when passing a raw array")
        blocks = [sets[r] for r in range(sets.shape[0])]
    else:
        m = sets[0].m
        blocks = [P.points for P in sets]
    total = Fraction(0)
    for pts in blocks:
        w = int(walsh_points(k, pts, m).sum())
        n = pts.shape[0]
        total += Fraction(w, n) if translation else Fraction(w * w, n * n)
    return abs(total)


def kp_aggregate(p: int, s: int) -> np.ndarray:
    """Aggregated character sums ``sum_r 2^-m sum_l wal_k(x_l(r))`` for every k, as ints."""
    m = gf.degree(p)
    require((1 << m) * ((1 << (m * s)) * s * m + (1 << m)), "Korobov p-set enumeration")
    agg = np.zeros((1 << m,) * s, dtype=np.int64)
    for r in gf.enumerate_gm(m):
        sums = character_sums(korobov_numerators(r, p, s), m)
        if np.any(sums % (1 << m)):
            raise AssertionError(f"character sums of P_p({r}) are not multiples of 2^m")
        agg += sums >> m
    return agg


def verify_kp_bound(p: int, s: int) -> VerificationResult:
    """Max over k != 0 of the aggregated Korobov p-set character sum is at most s-1."""
    m = gf.degree(p)
    if not gf.is_irreducible(p):
        raise ValueError(f"modulus {gf.to_hex(p)} is not irreducible")
    agg = kp_aggregate(p, s)
    flat = np.abs(agg.ravel()[1:])
    res = VerificationResult("kp")
    res.instances_checked = flat.size
    worst = int(flat.max()) if flat.size else 0
    res.details = {"max_aggregate": worst, "within_s": worst <= s}
    for idx in np.flatnonzero(flat > s - 1)[:MAX_WITNESSES]:
        k = tuple(int(i) for i in np.unravel_index(idx + 1, agg.shape))
        res.fail({"p": gf.to_hex(p), "k": k, "value": int(flat[idx])}, Fraction(int(flat[idx]) - (s - 1)))
    if worst > s - 1:
        res.max_violation = Fraction(worst - (s - 1))
    return res


# --- nu_m and translation ----------------------------------------------------

def laurent_digits(g: int, p: int, count: int) -> list[int]:
    """First ``count`` digits ``a_{-1}, a_{-2}, ...`` of ``g/p`` by long division."""
    d = gf.degree(p)
    r = gf.mod(g, p)
    digits = []
    for _ in range(count):
        r <<= 1
        if r >> d & 1:
            digits.append(1)
            r ^= p
        else:
            digits.append(0)
    return digits


def nu_m_laurent(g: int, p: int, m: int) -> int:
    num = 0
    for digit in laurent_digits(g, p, m):
        num = (num << 1) | digit
    return num


def verify_nu(m: int) -> VerificationResult:
    res = VerificationResult("nu")
    for p in gf.irreducibles(m):
        for g in gf.enumerate_gm(m):
            res.instances_checked += 1
            a, b = nu_m(g, p, m), nu_m_laurent(g, p, m)
            if a != b:
                res.fail({"p": gf.to_hex(p), "g": gf.to_hex(g), "quotient": a, "laurent": b}, Fraction(abs(a - b), 1 << m))
    return res


def verify_translation(m: int, s: int) -> VerificationResult:
    res = VerificationResult("translation")
    idx = np.arange(1 << m)
    xor_idx = idx[:, None] ^ idx[None, :]
    for p in gf.irreducibles(m):
        for q in gf.enumerate_gm(m):
            pts = korobov_numerators(q, p, s)
            lhs = pts[:, None, :] ^ pts[None, :, :]
            rhs = pts[xor_idx]
            res.instances_checked += (1 << (2 * m))
            bad = np.argwhere((lhs != rhs).any(axis=2))
            for n1, n2 in bad[:MAX_WITNESSES]:
                res.fail({"p": gf.to_hex(p), "q": q, "n": int(n1), "n2": int(n2)}, Fraction(1))
    return res


# --- Walsh coefficient identities ----------------------------------------------

def verify_coefficient_sums(m: int, s: int, samples: int | None = None, seed: int = 0) -> VerificationResult:
    """Both coefficient identities, exhaustively or on ``samples`` random boxes."""
    res = VerificationResult("coeff-sums")
    if samples is None:
        boxes = [tuple(int(b) for b in row) for row in _all_boxes(m, s)]
    else:
        rng = np.random.default_rng(seed)
        boxes = [tuple(int(b) for b in row) for row in rng.integers(0, (1 << m) + 1, size=(samples, s))]
    require(len(boxes) * (1 << (m * s)), "coefficient identity enumeration")
    literal_misses = 0
    for b in boxes:
        res.instances_checked += 1
        got = coeff_identity_report(m, b)
        want = closed_forms(m, b)
        # an empty side makes every c_k vanish, so the first sum is 0 rather than 1 - 0
        first = want[0] if all(b) else Fraction(0)
        literal_misses += got[0] != want[0]
        gap = max(abs(got[0] - first), abs(got[1] - want[1]))
        if gap:
            res.fail({"b": b, "sums": tuple(map(str, got)), "closed": tuple(map(str, want))}, gap)
    res.details = {"degenerate_boxes_off_closed_form": literal_misses}
    return res


def verify_walsh_series(m: int) -> VerificationResult:
    res = VerificationResult("walsh-series")
    side = 1 << m
    got = series_matrix(m)
    want = side * (np.arange(side)[:, None] < np.arange(side + 1)[None, :]).astype(np.int64)
    res.instances_checked = got.size
    for x, b in np.argwhere(got != want)[:MAX_WITNESSES]:
        res.fail({"x": int(x), "b": int(b)}, abs(got[x, b] - want[x, b]) / side)
    return res


# --- discrepancy sandwich -------------------------------------------------------

def random_point_set(rng: np.random.Generator, m: int, s: int, max_n: int) -> PointSet:
    n = int(rng.integers(1, max_n + 1))
    return PointSet(rng.integers(0, 1 << m, size=(n, s)), m)


def verify_sandwich(m: int, s: int, samples: int = 100, max_n: int = 64, seed: int = 0) -> VerificationResult:
    res = VerificationResult("sandwich")
    rng = np.random.default_rng(seed)
    corr = Fraction(s, 1 << m)
    for _ in range(samples):
        P = random_point_set(rng, m, s, max_n)
        rep = grid_discrepancy(P)
        exact = star_discrepancy_exact_fraction(P)
        res.instances_checked += 1
        lo = rep.grid_max_exact
        if exact < lo:
            res.fail({"points": P.points.tolist(), "grid": str(lo), "exact": str(exact)}, lo - exact)
        elif exact > lo + corr:
            res.fail({"points": P.points.tolist(), "grid": str(lo), "exact": str(exact)}, exact - lo - corr)
    return res


def verify_shift_expectation_random(m: int, s: int, samples: int = 50, max_n: int = 8, seed: int = 0) -> VerificationResult:
    res = VerificationResult("shift-mean")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        res.merge(verify_shift_expectation(random_point_set(rng, m, s, max_n)))
    return res


# --- registry -----------------------------------------------------------------

def _moduli(m: int, p: int | None) -> list[int]:
    return list(gf.irreducibles(m)) if p is None else [p]


def _over_moduli(fn: Callable[[int], VerificationResult], name: str, m: int, p: int | None) -> VerificationResult:
    res = VerificationResult(name)
    for mod in _moduli(m, p):
        res.merge(fn(mod))
    return res


def run_suite(name: str, m: int, s: int = 1, p: int | None = None, seed: int = 0,
              samples: int | None = None) -> VerificationResult:
    """Run one named suite; ``p=None`` means every irreducible modulus of degree m."""
    name = SUITE_ALIASES.get(name, name)
    if name == "coeff-sums":
        return verify_coefficient_sums(m, s, samples=samples, seed=seed)
    if name == "walsh-series":
        return verify_walsh_series(m)
    if name == "shift-mean":
        return verify_shift_expectation_random(m, s, samples=samples or 50, seed=seed)
    if name == "variance":
        return _over_moduli(lambda q: verify_variance(q, s), name, m, p)
    if name == "kp":
        return _over_moduli(lambda q: verify_kp_bound(q, s), name, m, p)
    if name == "charsum":
        return _over_moduli(lambda q: verify_character_sum(q, s), name, m, p)
    if name == "translation":
        return verify_translation(m, s)
    if name == "nu":
        return verify_nu(m)
    if name == "sandwich":
        return verify_sandwich(m, s, samples=samples or 100, seed=seed)
    raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


SUITES = ("coeff-sums", "walsh-series", "shift-mean", "variance", "kp", "charsum", "translation", "nu", "sandwich")
SUITE_ALIASES = {"lemma-aux": "coeff-sums"}
