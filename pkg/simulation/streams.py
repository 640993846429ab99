"""Reproducible random streams for parallel Monte Carlo workers.

Worker i of w draws from Generator(Philox(SeedSequence(seed).spawn(w)[i])).
Results are therefore fixed by the pair (seed, workers); the split of pulses
across workers is n // w each, with the first n % w workers taking one more.
"""

from typing import List

import numpy as np

from app.errors import InvalidParameterError

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    if not 0 <= int(seed) <= MAX_SEED:
        raise InvalidParameterError("seed", f"must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def check_run(n_pulses: int, seed: int, workers: int) -> None:
    """Validate the pulse count, seed and worker count of a run."""
    if n_pulses < 1:
        raise InvalidParameterError("n_pulses", f"must be >= 1, got {n_pulses}")
    if workers < 1:
        raise InvalidParameterError("workers", f"must be >= 1, got {workers}")
    check_seed(seed)


def worker_generators(seed: int, workers: int) -> List[np.random.Generator]:
    """One counter-based generator per worker, derived from (seed, worker index)."""
    if workers < 1:
        raise InvalidParameterError("workers", f"must be >= 1, got {workers}")
    children = np.random.SeedSequence(check_seed(seed)).spawn(workers)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def split_pulses(n_pulses: int, workers: int) -> List[int]:
    """Pulses handled by each worker."""
    base, extra = divmod(n_pulses, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]
