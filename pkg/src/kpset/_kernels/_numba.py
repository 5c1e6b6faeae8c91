"""Numba-compiled kernels.  Contracts match ``_numpy`` exactly."""

import numpy as np
from numba import njit


@njit(cache=True)
def _cumsum_axes(a, side, s):
    total = a.shape[0]
    stride = 1
    for _ in range(s):
        for idx in range(total):
            if (idx // stride) % side != 0:
                a[idx] += a[idx - stride]
        stride *= side


@njit(cache=True)
def grid_counts(points, m):
    n, s = points.shape
    side = (1 << m) + 1
    out = np.zeros(side ** s, dtype=np.int64)
    for i in range(n):
        idx = 0
        for j in range(s):
            idx = idx * side + points[i, j] + 1
        out[idx] += 1
    _cumsum_axes(out, side, s)
    return out


@njit(cache=True)
def shift_count_moments(points, m):
    n, s = points.shape
    side = (1 << m) + 1
    cells = side ** s
    mask = (1 << m) - 1
    sum1 = np.zeros(cells, dtype=np.int64)
    sum2 = np.zeros(cells, dtype=np.int64)
    buf = np.empty(cells, dtype=np.int64)
    for sig in range(1 << (m * s)):
        buf[:] = 0
        for i in range(n):
            idx = 0
            for j in range(s):
                sj = (sig >> (m * (s - 1 - j))) & mask
                idx = idx * side + (points[i, j] ^ sj) + 1
            buf[idx] += 1
        _cumsum_axes(buf, side, s)
        for c in range(cells):
            v = buf[c]
            sum1[c] += v
            sum2[c] += v * v
    return sum1, sum2


@njit(cache=True)
def _bit_reverse(v, m):
    out = 0
    for _ in range(m):
        out = (out << 1) | (v & 1)
        v >>= 1
    return out


@njit(cache=True)
def walsh_sums(points, m):
    n, s = points.shape
    side = 1 << m
    total = side ** s
    a = np.zeros(total, dtype=np.int64)
    for i in range(n):
        idx = 0
        for j in range(s):
            idx = idx * side + _bit_reverse(points[i, j], m)
        a[idx] += 1
    stride = 1
    for _ in range(s):
        h = 1
        while h < side:
            for idx in range(total):
                if ((idx // stride) % side) & h == 0:
                    jdx = idx + h * stride
                    x = a[idx]
                    y = a[jdx]
                    a[idx] = x + y
                    a[jdx] = x - y
            h *= 2
        stride *= side
    return a


@njit(cache=True)
def box_counts(points, boxes):
    n, s = points.shape
    out = np.zeros(boxes.shape[0], dtype=np.int64)
    for b in range(boxes.shape[0]):
        c = 0
        for i in range(n):
            inside = True
            for j in range(s):
                if points[i, j] >= boxes[b, j]:
                    inside = False
                    break
            if inside:
                c += 1
        out[b] = c
    return out
