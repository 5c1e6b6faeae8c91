"""Hot integer kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and ``KPSET_DISABLE_NUMBA`` is
unset (or ``0``/``false``).  Both paths are exact integer code and must agree
bit for bit; ``tests/test_kernels.py`` runs them side by side and
``benchmarks/bench_kernels.py`` times them.
"""

import os

import numpy as np

from . import _numpy as numpy_impl

_disabled = os.environ.get("KPSET_DISABLE_NUMBA", "").strip().lower() not in {"", "0", "false", "no", "off"}

numba_impl = None
if not _disabled:
    try:
        from . import _numba as numba_impl
    except ImportError:  # numba missing or broken: stay on numpy
        numba_impl = None

BACKEND = "numba" if numba_impl is not None else "numpy"
_impl = numba_impl if numba_impl is not None else numpy_impl


def _as_points(points):
    points = np.ascontiguousarray(points, dtype=np.int64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-d array of numerators")
    return points


def grid_counts(points, m):
    """``A(b)`` for every ``b`` in the extended grid, flattened (side ``2^m+1``)."""
    return _impl.grid_counts(_as_points(points), m)


def shift_count_moments(points, m):
    """Sums over all ``2^{ms}`` digital shifts of ``A(b)`` and ``A(b)^2`` per grid box."""
    return _impl.shift_count_moments(_as_points(points), m)


def walsh_sums(points, m):
    """``sum_n wal_k(x_n)`` for every frequency vector k, flattened (side ``2^m``)."""
    return _impl.walsh_sums(_as_points(points), m)


def box_counts(points, boxes):
    return _impl.box_counts(_as_points(points), _as_points(boxes))
