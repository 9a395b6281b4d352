"""Counter-based randomness keyed by ``(seed, trial, draw)``.

Every uniform is a pure function of its key, so trials can be generated in
any order or across any number of workers with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import counter_uniforms

#: draws available per trial; slot ``ROTATION_DRAW`` belongs to the scheduler
DRAWS_PER_TRIAL = 8
ROTATION_DRAW = 7

_SEED_MASK = (1 << 64) - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _SEED_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def uniforms(seed: int, trials, draw: int) -> np.ndarray:
    """Vector of uniforms in [0, 1), one per trial index."""
    if not 0 <= draw < DRAWS_PER_TRIAL:
        raise ValueError(f"draw slot must be in [0, {DRAWS_PER_TRIAL}), got {draw}")
    trials = np.ascontiguousarray(trials, dtype=np.uint64)
    return counter_uniforms(check_seed(seed), trials, draw)


@dataclass(frozen=True)
class CounterStream:
    """The random stream of a single trial."""

    seed: int
    trial: int

    def uniform(self, draw: int) -> float:
        return float(uniforms(self.seed, np.array([self.trial]), draw)[0])
