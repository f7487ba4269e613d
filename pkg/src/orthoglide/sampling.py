"""Counter-based uniform sampling.

Sample ``i`` of a stream is a pure function of ``(seed, i)``: it is drawn from
block ``i`` of a Philox-4x64 generator keyed by ``seed``.  Any contiguous range
of samples can therefore be produced independently, and splitting a run into
chunks (or threads) never changes the numbers.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Philox

_TO_UNIT = 2.0**-53


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Samples ``start .. start+count-1`` as a ``(count, 3)`` array in [0, 1)."""
    if count < 0 or start < 0:
        raise ValueError("start and count must be non-negative")
    bg = Philox(key=int(seed), counter=int(start))
    raw = bg.random_raw(4 * count).reshape(count, 4)[:, :3]
    return (raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def block_ranges(n: int, block: int):
    for start in range(0, n, block):
        yield start, min(block, n - start)
