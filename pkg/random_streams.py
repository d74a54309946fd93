"""
Counter-Based Random Streams for Shot Sampling

Every multinomial draw of the trace estimator gets its own stream, addressed by
a key tuple (variant, part, step count, trial, α) below the run seed. Streams
do not depend on the order in which work is executed, so serial and parallel
runs produce identical estimates.

Classes:
    ShotRandomGenerator: Seeded stream for one (key) address
    StreamFactory: Builds streams below a fixed run seed

Example:
     streams = StreamFactory(seed=2024)
     rng = streams.stream(variant=0, part=0, steps=3, trial=7, alpha=1)
     rng.multinomial(100, [0.5, 0.3, 0.2])
    array([...])

Note:
    Uses numpy.random.Philox, a counter-based bit generator, seeded through
    numpy.random.SeedSequence with the key as spawn_key.
"""

# Standard library imports
from typing import Sequence

# Third-party imports
import numpy as np
from numpy.random import Generator, Philox, SeedSequence


class ShotRandomGenerator(object):
    """
    Reproducible generator for one sampling address.

    Attributes:
        original_seed (int): Run seed
        key (Tuple[int, ...]): Stream address below the seed
    """

    def __init__(self, seed: int, key: Sequence[int] = ()):
        if seed is None or int(seed) < 0:
            raise ValueError(f"A non-negative integer seed is required, got {seed!r}.")
        self.original_seed = int(seed)
        self.key = tuple(int(k) for k in key)
        self._random = Generator(Philox(SeedSequence(entropy=self.original_seed, spawn_key=self.key)))

    def multinomial(self, shots: int, probabilities: Sequence[float]) -> np.ndarray:
        return self._random.multinomial(shots, _clean(probabilities))


def _clean(probabilities: Sequence[float]) -> np.ndarray:
    """Clips round-off negatives and puts any surplus mass on the last outcome."""
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, 1.0)
    head = p[:-1]
    if head.sum() > 1.0:
        head = head / head.sum()
    return np.append(head, max(0.0, 1.0 - head.sum()))


class StreamFactory(object):
    """Addresses streams below one run seed."""

    def __init__(self, seed: int):
        self.seed = seed

    def stream(self, variant: int, part: int, steps: int, trial: int, alpha: int) -> ShotRandomGenerator:
        return ShotRandomGenerator(self.seed, (variant, part, steps, trial, alpha))

