"""
Random Source
Counter-based random streams keyed by (seed, stream id, purpose).

Every draw of round ``k`` comes from ``RandomSource(seed, k)``, so a round
produces the same outcomes whatever order or thread it runs in.
"""

from typing import List, Sequence, TypeVar

import numpy as np

from utils.errors import InvalidArgumentError

T = TypeVar("T")

MAX_SEED = 2 ** 64

# Purposes keep independent consumers of one seed apart
ROUND_PURPOSE = 0
COMPARISON_PURPOSE = 1


class RandomSource:
    """Philox stream for one (seed, stream_id, purpose) triple."""

    def __init__(self, seed: int, stream_id: int = 0, purpose: int = ROUND_PURPOSE):
        if not 0 <= int(seed) < MAX_SEED:
            raise InvalidArgumentError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if not 0 <= int(stream_id) < MAX_SEED:
            raise InvalidArgumentError(f"stream_id must be a 64-bit unsigned integer, got {stream_id}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.purpose = int(purpose)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, self.purpose))
        self._generator = np.random.Generator(np.random.Philox(sequence))

    def stream(self, stream_id: int, purpose: int = ROUND_PURPOSE) -> "RandomSource":
        """Independent stream under the same seed."""
        return RandomSource(self.seed, stream_id, purpose)

    def choice_index(self, probabilities: Sequence[float]) -> int:
        """Sample an index from a (possibly slightly unnormalized) distribution."""
        weights = np.asarray(probabilities, dtype=float)
        total = weights.sum()
        if total <= 0:
            raise InvalidArgumentError("cannot sample from an all-zero distribution")
        return int(self._generator.choice(len(weights), p=weights / total))

    def pick(self, options: Sequence[T]) -> T:
        """Uniform choice from a sequence."""
        return options[int(self._generator.integers(len(options)))]

    def sample(self, population: int, k: int) -> List[int]:
        """``k`` distinct indices out of ``range(population)``, sorted."""
        chosen = self._generator.choice(population, size=k, replace=False)
        return sorted(int(i) for i in chosen)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, stream_id={self.stream_id}, purpose={self.purpose})"
