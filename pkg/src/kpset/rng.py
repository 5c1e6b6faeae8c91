"""Per-trial random streams.

Each ``(seed, trial)`` pair keys its own Philox4x64 stream (numpy's
counter-based generator): the 128-bit Philox key is ``(seed, trial)`` and the
counter starts at zero.  Streams for different trials are disjoint by
construction and do not depend on which thread consumes them or in what
order.  Uniform integers in ``{0, ..., 2^m - 1}`` are the low m bits of one
raw 64-bit output word, which is exactly uniform without rejection.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


class TrialStream:
    def __init__(self, seed: int, trial: int):
        self.seed = seed & _MASK64
        self.trial = trial & _MASK64
        self._bitgen = np.random.Philox(key=np.array([self.seed, self.trial], dtype=np.uint64))

    def words(self, count: int) -> np.ndarray:
        """``count`` raw 64-bit words."""
        return np.asarray(self._bitgen.random_raw(count), dtype=np.uint64).reshape(count)

    def bits(self, m: int, count: int) -> np.ndarray:
        """``count`` uniform draws from ``{0, ..., 2^m - 1}`` as int64."""
        if not 1 <= m <= 63:
            raise ValueError("m must be in 1..63")
        mask = np.uint64((1 << m) - 1)
        return (self.words(count) & mask).astype(np.int64)


def derive_trial_rng(seed: int, trial: int) -> TrialStream:
    return TrialStream(seed, trial)
