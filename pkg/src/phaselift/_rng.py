"""Seeded, splittable random streams.

Every stochastic routine in the package draws from a counter-based
Philox generator keyed by a root seed plus an integer path, so trials
can run in any order (or in parallel) and still reproduce bit-for-bit.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, path).

    Distinct paths under the same seed give statistically independent
    streams; the same (seed, path) always gives the same stream.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))
