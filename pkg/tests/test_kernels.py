import os
import subprocess
import sys

import numpy as np
import pytest

from kpset import _kernels
from kpset._kernels import _numpy as npk

nbk = _kernels.numba_impl
needs_numba = pytest.mark.skipif(nbk is None, reason="numba backend unavailable")


def _naive_grid_counts(points, m):
    side = (1 << m) + 1
    s = points.shape[1]
    out = np.zeros((side,) * s, dtype=np.int64)
    for b in np.ndindex(*out.shape):
        out[b] = int(np.all(points < np.array(b), axis=1).sum())
    return out.ravel()


CASES = [(1, 1, 3), (2, 2, 5), (3, 2, 40), (2, 3, 17), (4, 1, 30), (3, 3, 9)]


@pytest.mark.parametrize("m,s,n", CASES)
def test_numpy_grid_counts_vs_naive(m, s, n, rng):
    pts = rng.integers(0, 1 << m, size=(n, s))
    assert np.array_equal(npk.grid_counts(pts, m), _naive_grid_counts(pts, m))


@pytest.mark.parametrize("m,s,n", CASES)
def test_numpy_shift_moments_vs_naive(m, s, n, rng):
    pts = rng.integers(0, 1 << m, size=(n, s))
    s1 = np.zeros(((1 << m) + 1) ** s, dtype=np.int64)
    s2 = np.zeros_like(s1)
    for sig in np.ndindex(*((1 << m,) * s)):
        a = _naive_grid_counts(pts ^ np.array(sig), m)
        s1 += a
        s2 += a * a
    g1, g2 = npk.shift_count_moments(pts, m)
    assert np.array_equal(g1, s1) and np.array_equal(g2, s2)


@pytest.mark.parametrize("m,s,n", CASES)
def test_numpy_walsh_sums_vs_table(m, s, n, rng):
    from kpset.dyadic import walsh_table
    pts = rng.integers(0, 1 << m, size=(n, s))
    W = walsh_table(m).astype(np.int64)
    want = np.zeros((1 << m,) * s, dtype=np.int64)
    for k in np.ndindex(*want.shape):
        prod = np.ones(n, dtype=np.int64)
        for j, kj in enumerate(k):
            prod *= W[kj, pts[:, j]]
        want[k] = prod.sum()
    assert np.array_equal(npk.walsh_sums(pts, m), want.ravel())


@needs_numba
@pytest.mark.parametrize("m,s,n", CASES + [(5, 2, 300), (4, 3, 64)])
def test_backends_agree(m, s, n, rng):
    pts = np.ascontiguousarray(rng.integers(0, 1 << m, size=(n, s)), dtype=np.int64)
    boxes = np.ascontiguousarray(rng.integers(0, (1 << m) + 1, size=(25, s)), dtype=np.int64)
    assert np.array_equal(nbk.grid_counts(pts, m), npk.grid_counts(pts, m))
    a1, a2 = nbk.shift_count_moments(pts, m)
    b1, b2 = npk.shift_count_moments(pts, m)
    assert np.array_equal(a1, b1) and np.array_equal(a2, b2)
    assert np.array_equal(nbk.walsh_sums(pts, m), npk.walsh_sums(pts, m))
    assert np.array_equal(nbk.box_counts(pts, boxes), npk.box_counts(pts, boxes))


def test_box_counts_naive(rng):
    pts = rng.integers(0, 8, size=(20, 2))
    boxes = rng.integers(0, 9, size=(10, 2))
    want = [int(np.all(pts < b, axis=1).sum()) for b in boxes]
    assert _kernels.box_counts(pts, boxes).tolist() == want


def test_env_flag_selects_numpy():
    code = "from kpset import _kernels; print(_kernels.BACKEND, _kernels.numba_impl is None)"
    env = dict(os.environ, KPSET_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_kernel_input_shape():
    with pytest.raises(ValueError):
        _kernels.grid_counts(np.zeros(4), 2)
