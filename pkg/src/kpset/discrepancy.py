"""Local, grid and exact star discrepancy of dyadic point sets.

Everything is counted in integers.  For a box with numerators ``b`` the
scaled local discrepancy is

    N * 2^{ms} * Delta = A(b) * 2^{ms} - N * prod(b),

which stays in int64 while ``bitlen(N) + m*s <= 62``; past that the float
path is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .budget import require
from .dyadic import ExtendedDyadic
from .lattice import PointSet, lattice_blocks


@dataclass(frozen=True)
class Box:
    """Anchored box ``[0, b)`` with ``b`` given by numerators at scale 2^m."""

    upper: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(int(b) for b in self.upper))
        top = 1 << self.m
        if any(not 0 <= b <= top for b in self.upper):
            raise ValueError(f"box bound outside [0, 2^{self.m}]")

    @classmethod
    def from_dyadics(cls, bounds: Sequence[ExtendedDyadic]) -> "Box":
        ms = {b.m for b in bounds}
        if len(ms) != 1:
            raise ValueError("bounds use different scales")
        return cls(tuple(b.num for b in bounds), ms.pop())

    @property
    def s(self) -> int:
        return len(self.upper)

    def volume(self) -> Fraction:
        num = 1
        for b in self.upper:
            num *= b
        return Fraction(num, 1 << (self.m * self.s))

    def __str__(self) -> str:
        return "(" + ", ".join(f"{b}/2^{self.m}" for b in self.upper) + ")"


def _rescale(P: PointSet, box: Box) -> tuple[np.ndarray, tuple[int, ...], int]:
    if box.s != P.s:
        raise ValueError(f"dimension mismatch: box has {box.s} coordinates, points have {P.s}")
    m = max(P.m, box.m)
    pts = P.points << (m - P.m)
    upper = tuple(b << (m - box.m) for b in box.upper)
    return pts, upper, m


def count_in_box(P: PointSet, box: Box) -> int:
    pts, upper, _ = _rescale(P, box)
    return int(np.count_nonzero((pts < np.asarray(upper, dtype=np.int64)).all(axis=1)))


def local_discrepancy(P: PointSet, box: Box) -> Fraction:
    """``A(J, P)/N - vol(J)`` as an exact fraction (multiplicities counted)."""
    if P.N == 0:
        raise ValueError("empty point set")
    return Fraction(count_in_box(P, box), P.N) - box.volume()


def _volume_numerators(m: int, s: int, exact: bool) -> np.ndarray:
    side = (1 << m) + 1
    base = np.arange(side, dtype=np.int64 if exact else np.float64)
    vol = base
    for _ in range(s - 1):
        vol = np.multiply.outer(vol, base)
    return np.asarray(vol).ravel()


def _exact_ok(n: int, m: int, s: int) -> bool:
    return n.bit_length() + m * s + 1 <= 62


@dataclass
class DiscrepancyReport:
    m: int
    s: int
    N: int
    grid_max: float
    correction: float
    upper_bound: float
    argmax_box: tuple[int, ...]
    grid_max_exact: Fraction | None = None
    exact: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "m": self.m,
            "s": self.s,
            "N": self.N,
            "grid_max": self.grid_max,
            "grid_max_exact": None if self.grid_max_exact is None else str(self.grid_max_exact),
            "correction": self.correction,
            "upper_bound": self.upper_bound,
            "argmax_box": " ".join(str(b) for b in self.argmax_box),
            "exact": self.exact,
        }
        d.update(self.extra)
        return d

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_dict().items():
            if value is None:
                continue
            if isinstance(value, float):
                value = format(value, ".17g")
            lines.append(f"{key} {value}")
        return "\n".join(lines) + "\n"


def grid_deviation(P: PointSet) -> tuple[np.ndarray, bool]:
    """Scaled local discrepancy at every box of the extended grid.

    Returns ``(values, exact)``: int64 ``A*2^{ms} - N*vol_num`` when exact,
    otherwise float ``A/N - vol``.  Flattened C order, side ``2^m + 1``.
    """
    m, s, n = P.m, P.s, P.N
    cells = ((1 << m) + 1) ** s
    require(cells + n, f"grid evaluation at m={m}, s={s}")
    counts = _kernels.grid_counts(P.points, m)
    exact = _exact_ok(n, m, s)
    vol = _volume_numerators(m, s, exact)
    if exact:
        return counts * (1 << (m * s)) - n * vol, True
    return counts / n - vol / float(1 << (m * s)), False


def _unravel(idx: int, m: int, s: int) -> tuple[int, ...]:
    return tuple(int(i) for i in np.unravel_index(idx, ((1 << m) + 1,) * s))


def grid_discrepancy(P: PointSet) -> DiscrepancyReport:
    """Max of ``|Delta(P, J(b))|`` over ``b`` in the extended dyadic grid, plus ``s/2^m``.

    Ties go to the lexicographically smallest box.
    """
    if P.N == 0:
        raise ValueError("empty point set")
    dev, exact = grid_deviation(P)
    absdev = np.abs(dev)
    idx = int(np.argmax(absdev))
    m, s = P.m, P.s
    if exact:
        gm_exact = Fraction(int(absdev[idx]), P.N << (m * s))
        gm = float(gm_exact)
    else:
        gm_exact = None
        gm = float(absdev[idx])
    corr = s / float(1 << m)
    return DiscrepancyReport(m=m, s=s, N=P.N, grid_max=gm, correction=corr, upper_bound=gm + corr,
                             argmax_box=_unravel(idx, m, s), grid_max_exact=gm_exact)


def star_discrepancy_exact(P: PointSet, budget: int | None = None) -> float:
    """Exact star discrepancy by critical-box enumeration.

    Candidate corners take, per axis, the distinct coordinates of P together
    with 1.  At each corner z both ``A([0,z])/N - vol(z)`` (the limit of open
    boxes shrinking onto the closed one) and ``vol(z) - A([0,z))/N`` are
    evaluated from a cumulative histogram over ranks.
    """
    return float(star_discrepancy_exact_fraction(P, budget))


def star_discrepancy_exact_fraction(P: PointSet, budget: int | None = None) -> Fraction:
    if P.N == 0:
        raise ValueError("empty point set")
    n, s, m = P.N, P.s, P.m
    top = 1 << m
    grids, ranks = [], []
    for j in range(s):
        vals = np.unique(P.points[:, j])
        if vals[-1] != top:
            vals = np.append(vals, top)
        grids.append(vals)
        ranks.append(np.searchsorted(vals, P.points[:, j]))
    shape = tuple(len(g) for g in grids)
    cells = int(np.prod(shape, dtype=np.int64))
    require(cells * s + n, f"critical-box enumeration over {cells} corners", budget,
            advice="use grid_discrepancy for the dyadic-grid estimate")

    hist = np.zeros(shape, dtype=np.int64)
    np.add.at(hist, tuple(ranks), 1)
    closed = hist
    for ax in range(s):
        closed = np.cumsum(closed, axis=ax)
    # open count at rank i along every axis = closed count at rank i-1
    padded = np.pad(closed, [(1, 0)] * s)
    open_ = padded[tuple(slice(0, k) for k in shape)]

    exact = _exact_ok(n, m, s)
    vol = np.ones(shape, dtype=np.int64 if exact else np.float64)
    for j, g in enumerate(grids):
        view = [1] * s
        view[j] = len(g)
        vol = vol * g.reshape(view).astype(vol.dtype)
    scale = 1 << (m * s)
    if exact:
        over = closed * scale - n * vol
        under = n * vol - open_ * scale
        best = max(int(over.max()), int(under.max()))
        return Fraction(best, n * scale)
    volf = vol / float(scale)
    best = max(float((closed / n - volf).max()), float((volf - open_ / n).max()))
    return Fraction(best)


def per_lattice_contribution(P: PointSet, r: int, box: Box, lattice_size: int | None = None) -> Fraction:
    """``Delta(P_r + sigma_r, J(b))`` for the r-th lattice block of a union."""
    blocks = lattice_blocks(P, lattice_size)
    if not 0 <= r < blocks.shape[0]:
        raise IndexError(f"lattice index {r} outside [0, {blocks.shape[0]})")
    return local_discrepancy(PointSet(blocks[r], P.m), box)


def per_lattice_contributions(P: PointSet, boxes: np.ndarray, lattice_size: int | None = None) -> np.ndarray:
    """Float ``Delta`` of every lattice block at every box: shape ``(R, len(boxes))``."""
    blocks = lattice_blocks(P, lattice_size)
    boxes = np.asarray(boxes, dtype=np.int64)
    vol = np.prod(boxes / float(1 << P.m), axis=1)
    out = np.empty((blocks.shape[0], boxes.shape[0]))
    for r in range(blocks.shape[0]):
        out[r] = _kernels.box_counts(blocks[r], boxes) / blocks.shape[1] - vol
    return out
