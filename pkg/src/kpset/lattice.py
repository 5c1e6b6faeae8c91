"""Korobov polynomial lattice point sets over GF(2) and their shifted unions.

Coordinates are integer numerators at scale ``2^m``.  A Korobov set
``P_p(q)`` has the 2^m points

    x_n(q) = (nu_m(n/p), nu_m(n q/p), ..., nu_m(n q^{s-1}/p)),  n < 2^m,

where ``nu_m`` keeps the first m fractional binary digits of the Laurent
expansion.  ``nu_m(g/p)`` is the polynomial quotient of ``g * x^m`` by p.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import gf2poly as gf
from .dyadic import Dyadic, ScaleMismatchError
from .rng import TrialStream, derive_trial_rng

THEOREM1 = "theorem1"
THEOREM2 = "theorem2"
MODES = (THEOREM1, THEOREM2)
_MODE_ALIASES = {"thm1": THEOREM1, "thm2": THEOREM2, THEOREM1: THEOREM1, THEOREM2: THEOREM2}


def normalize_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {sorted(_MODE_ALIASES)}") from None


def _check_degree(p: int, m: int) -> None:
    if gf.degree(p) != m:
        raise ValueError(f"modulus {gf.to_hex(p)} does not have degree {m}")


def nu_m(g: int, p: int, m: int) -> int:
    """Numerator of ``nu_m(g/p)`` at scale 2^m."""
    _check_degree(p, m)
    g = gf.mod(g, p)
    return gf.divmod_poly(g << m, p)[0]


def nu_m_dyadic(g: int, p: int, m: int) -> Dyadic:
    return Dyadic(nu_m(g, p, m), m)


def generating_vector(q: int, p: int, s: int) -> list[int]:
    """``(1, q, ..., q^{s-1}) mod p``."""
    out = [gf.mod(1, p)]
    qr = gf.mod(q, p)
    for _ in range(1, s):
        out.append(gf.mul_mod(out[-1], qr, p))
    return out


def korobov_point(n: int, q: int, p: int, s: int) -> tuple[int, ...]:
    m = gf.degree(p)
    if m is None or m < 1:
        raise ValueError("modulus must have degree >= 1")
    if not 0 <= n < (1 << m):
        raise ValueError(f"index {n} outside [0, 2^{m})")
    return tuple(nu_m(gf.mul_mod(n, g, p), p, m) for g in generating_vector(q, p, s))


def korobov_numerators(q: int, p: int, s: int) -> np.ndarray:
    """All 2^m points of ``P_p(q)`` as an ``(2^m, s)`` int64 array, rows in n order.

    ``n -> nu_m(n g / p)`` is GF(2)-linear in n, so each column is built
    from the m images of ``x^i`` by xor-doubling.
    """
    m = gf.degree(p)
    if m is None or m < 1:
        raise ValueError("modulus must have degree >= 1")
    gf.check_m(m)
    out = np.empty((1 << m, s), dtype=np.int64)
    for j, g in enumerate(generating_vector(q, p, s)):
        col = np.zeros(1, dtype=np.int64)
        basis = g
        for _ in range(m):
            col = np.concatenate([col, col ^ nu_m(basis, p, m)])
            basis = gf.mul_mod(basis, 2, p)
        out[:, j] = col
    return out


@dataclass
class PointSet:
    """Multiset of points with depth-m dyadic coordinates (numerators, shape ``(N, s)``)."""

    points: np.ndarray
    m: int

    def __post_init__(self):
        self.points = np.ascontiguousarray(self.points, dtype=np.int64)
        if self.points.ndim != 2:
            raise ValueError("points must have shape (N, s)")
        if self.points.size and (self.points.min() < 0 or self.points.max() >= (1 << self.m)):
            raise ValueError(f"coordinates outside [0, 2^{self.m})")

    @property
    def N(self) -> int:
        return self.points.shape[0]

    @property
    def s(self) -> int:
        return self.points.shape[1]

    def as_floats(self) -> np.ndarray:
        return self.points / float(1 << self.m)

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.points, other.points)


def korobov_set(q: int, p: int, s: int) -> PointSet:
    if not gf.is_irreducible(p):
        raise ValueError(f"modulus {gf.to_hex(p)} is not irreducible")
    return PointSet(korobov_numerators(q, p, s), gf.degree(p))


def shift_set(P: PointSet, sigma: Sequence[int] | Sequence[Dyadic]) -> PointSet:
    sig = [x.num if isinstance(x, Dyadic) else int(x) for x in sigma]
    if any(isinstance(x, Dyadic) and x.m != P.m for x in sigma):
        raise ScaleMismatchError("shift and point set use different scales")
    if len(sig) != P.s:
        raise ValueError(f"shift has {len(sig)} coordinates, points have {P.s}")
    if any(not 0 <= x < (1 << P.m) for x in sig):
        raise ValueError("shift coordinate outside the grid")
    return PointSet(P.points ^ np.asarray(sig, dtype=np.int64)[None, :], P.m)


def translate_index(n: int, n2: int, p: int) -> int:
    """The index l with ``l(x) = n(x) + n2(x) mod p``."""
    return gf.mod(n ^ n2, p)


@dataclass
class UnionRecipe:
    """Everything needed to rebuild a union bit for bit."""

    p: int
    m: int
    s: int
    mode: str
    shifts: list[tuple[int, ...]]
    q_list: list[int] = field(default_factory=list)
    seed: int | None = None
    trial: int = 0

    def __post_init__(self):
        self.mode = normalize_mode(self.mode)
        if self.mode == THEOREM2 and not self.q_list:
            self.q_list = list(range(1 << self.m))

    def validate(self) -> None:
        gf.check_m(self.m)
        _check_degree(self.p, self.m)
        if not gf.is_irreducible(self.p):
            raise ValueError(f"modulus {gf.to_hex(self.p)} is not irreducible")
        size = 1 << self.m
        if len(self.q_list) != size or len(self.shifts) != size:
            raise ValueError(f"recipe needs exactly 2^m = {size} generators and shifts")
        if self.mode == THEOREM2 and list(self.q_list) != list(range(size)):
            raise ValueError("theorem2 recipes use the generators 0..2^m-1 in order")
        if any(not 0 <= q < size for q in self.q_list):
            raise ValueError("generators must lie in G_m")
        for sig in self.shifts:
            if len(sig) != self.s or any(not 0 <= x < size for x in sig):
                raise ValueError(f"bad shift vector {sig}")

    def to_text(self) -> str:
        lines = [
            "# kpset union recipe",
            f"mode {self.mode}",
            f"m {self.m}",
            f"s {self.s}",
            f"p {gf.to_hex(self.p)}",
            f"seed {'none' if self.seed is None else self.seed}",
            f"trial {self.trial}",
            "q " + " ".join(gf.to_hex(q) for q in self.q_list),
        ]
        lines += ["sigma " + " ".join(hex(x) for x in sig) for sig in self.shifts]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "UnionRecipe":
        fields: dict[str, str] = {}
        shifts = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            if key == "sigma":
                shifts.append(tuple(int(t, 16) for t in rest.split()))
            else:
                fields[key] = rest.strip()
        try:
            seed = None if fields["seed"] == "none" else int(fields["seed"])
            recipe = cls(
                p=gf.from_hex(fields["p"]),
                m=int(fields["m"]),
                s=int(fields["s"]),
                mode=fields["mode"],
                shifts=shifts,
                q_list=[int(t, 16) for t in fields.get("q", "").split()],
                seed=seed,
                trial=int(fields.get("trial", "0")),
            )
        except KeyError as exc:
            raise ValueError(f"recipe is missing field {exc.args[0]!r}") from None
        recipe.validate()
        return recipe

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def draw_recipe(mode: str, m: int, s: int, p: int, seed: int, trial: int = 0,
                zero_shifts: bool = False, stream: TrialStream | None = None) -> UnionRecipe:
    """Draw generators (theorem1 only) and then shifts from the ``(seed, trial)`` stream.

    Draw order: q_1..q_{2^m} first, then sigma_1..sigma_{2^m} with the s
    coordinates of each shift consecutive.  Pass ``stream`` to keep drawing
    from it afterwards.
    """
    mode = normalize_mode(mode)
    gf.check_m(m)
    size = 1 << m
    if stream is None:
        stream = derive_trial_rng(seed, trial)
    q_list = [int(q) for q in stream.bits(m, size)] if mode == THEOREM1 else list(range(size))
    if zero_shifts:
        shifts = [(0,) * s for _ in range(size)]
    else:
        flat = stream.bits(m, size * s).reshape(size, s)
        shifts = [tuple(int(x) for x in row) for row in flat]
    recipe = UnionRecipe(p=p, m=m, s=s, mode=mode, shifts=shifts, q_list=q_list, seed=seed, trial=trial)
    recipe.validate()
    return recipe


def build_union(recipe: UnionRecipe) -> PointSet:
    """Multiset union of the 2^m shifted lattices, stored lattice by lattice."""
    recipe.validate()
    cache: dict[int, np.ndarray] = {}
    blocks = []
    for q, sig in zip(recipe.q_list, recipe.shifts):
        if q not in cache:
            cache[q] = korobov_numerators(q, recipe.p, recipe.s)
        blocks.append(cache[q] ^ np.asarray(sig, dtype=np.int64)[None, :])
    return PointSet(np.concatenate(blocks, axis=0), recipe.m)


def lattice_blocks(P: PointSet, lattice_size: int | None = None) -> np.ndarray:
    """View a union as ``(R, lattice_size, s)``; default block size is 2^m."""
    size = (1 << P.m) if lattice_size is None else lattice_size
    if P.N % size:
        raise ValueError(f"{P.N} points do not split into blocks of {size}")
    return P.points.reshape(P.N // size, size, P.s)


# --- point-set text format: "m s N" header, then N rows of s numerators ---

def write_point_set(P: PointSet, out: TextIO | str | Path) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            write_point_set(P, fh)
        return
    out.write(f"{P.m} {P.s} {P.N}\n")
    buf = io.StringIO()
    np.savetxt(buf, P.points, fmt="%d", delimiter=" ")
    out.write(buf.getvalue())


def point_set_text(P: PointSet) -> str:
    buf = io.StringIO()
    write_point_set(P, buf)
    return buf.getvalue()


def read_point_set(src: TextIO | str | Path) -> PointSet:
    if isinstance(src, (str, Path)):
        with open(src, encoding="utf-8") as fh:
            return read_point_set(fh)
    return parse_point_set(src.read().splitlines())


def parse_point_set(lines: Iterable[str]) -> PointSet:
    rows = [ln.split() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty point-set file")
    try:
        m, s, n = (int(t) for t in rows[0])
    except ValueError:
        raise ValueError(f"bad header {' '.join(rows[0])!r}; expected 'm s N'") from None
    body = rows[1:]
    if len(body) != n:
        raise ValueError(f"header announces {n} points, found {len(body)}")
    if any(len(r) != s for r in body):
        raise ValueError(f"every point needs {s} coordinates")
    pts = np.array(body, dtype=np.int64).reshape(n, s)
    return PointSet(pts, m)
