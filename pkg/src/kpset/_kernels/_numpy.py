"""Pure-numpy kernels.  Same contracts as the numba versions in ``_numba``.

Grids are returned flattened in C order; a grid over box bounds has side
``2^m + 1`` (numerators 0..2^m), a grid over frequencies has side ``2^m``.
"""

import numpy as np

_CHUNK_CELLS = 1 << 22


def _cumsum_axes(a, first_axis=0):
    for ax in range(first_axis, a.ndim):
        np.cumsum(a, axis=ax, out=a)
    return a


def grid_counts(points, m):
    n, s = points.shape
    side = (1 << m) + 1
    hist = np.zeros((side,) * s, dtype=np.int64)
    np.add.at(hist, tuple((points + 1).T), 1)
    return _cumsum_axes(hist).ravel()


def _all_shifts(m, s):
    grids = np.indices((1 << m,) * s, dtype=np.int64)
    return grids.reshape(s, -1).T


def shift_count_moments(points, m):
    n, s = points.shape
    side = (1 << m) + 1
    cells = side ** s
    shifts = _all_shifts(m, s)
    weights = side ** np.arange(s - 1, -1, -1, dtype=np.int64)
    sum1 = np.zeros(cells, dtype=np.int64)
    sum2 = np.zeros(cells, dtype=np.int64)
    step = max(1, _CHUNK_CELLS // max(cells, n))
    for start in range(0, shifts.shape[0], step):
        block = shifts[start:start + step]
        shifted = (points[None, :, :] ^ block[:, None, :]) + 1
        flat = shifted @ weights + (np.arange(block.shape[0], dtype=np.int64) * cells)[:, None]
        hist = np.bincount(flat.ravel(), minlength=block.shape[0] * cells)
        hist = hist.reshape((block.shape[0],) + (side,) * s)
        _cumsum_axes(hist, first_axis=1)
        hist = hist.reshape(block.shape[0], cells)
        sum1 += hist.sum(axis=0)
        sum2 += (hist * hist).sum(axis=0)
    return sum1, sum2


def _bit_reverse(nums, m):
    out = np.zeros_like(nums)
    for i in range(m):
        out |= ((nums >> i) & 1) << (m - 1 - i)
    return out


def walsh_sums(points, m):
    n, s = points.shape
    side = 1 << m
    hist = np.zeros((side,) * s, dtype=np.int64)
    np.add.at(hist, tuple(_bit_reverse(points, m).T), 1)
    for ax in range(s):
        h = 1
        while h < side:
            moved = np.moveaxis(hist, ax, -1)
            shape = moved.shape
            blocks = moved.reshape(shape[:-1] + (side // (2 * h), 2, h))
            lo = blocks[..., 0, :].copy()
            hi = blocks[..., 1, :]
            blocks[..., 0, :] = lo + hi
            blocks[..., 1, :] = lo - hi
            hist = np.moveaxis(blocks.reshape(shape), -1, ax)
            h *= 2
    return np.ascontiguousarray(hist).ravel()


def box_counts(points, boxes):
    """``out[i] = #{x in points : x < boxes[i]}`` coordinatewise."""
    out = np.empty(boxes.shape[0], dtype=np.int64)
    step = max(1, _CHUNK_CELLS // max(1, points.shape[0] * points.shape[1]))
    for start in range(0, boxes.shape[0], step):
        blk = boxes[start:start + step]
        out[start:start + step] = (points[None, :, :] < blk[:, None, :]).all(axis=2).sum(axis=1)
    return out
