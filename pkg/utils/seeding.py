"""
Magnetic Surface Lab - Seeded Work Splitting

Monte-Carlo work is cut into fixed-size chunks. Chunk c draws from its own
stream SeedSequence([seed, c]), so results depend only on (seed, index) and
never on how many worker shards processed the chunks.
"""

import logging
from multiprocessing import Pool
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from config.settings import Settings
from core.errors import DomainError

T = TypeVar('T')
R = TypeVar('R')

logger = logging.getLogger(__name__)


def validate_seed(seed: int) -> int:
    """Check that a seed fits an unsigned 64-bit integer.

    Args:
        seed: Seed value

    Returns:
        int: The seed
    """
    if not isinstance(seed, (int, np.integer)) or seed < 0 or seed >= 2 ** 64:
        raise DomainError(f"seed must be an integer in [0, 2^64), got {seed!r}", "seed")
    return int(seed)


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent generator for one chunk of one seeded experiment."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([validate_seed(seed), chunk_index])))


def chunk_plan(n: int, chunk_size: Optional[int] = None) -> List[Tuple[int, int]]:
    """Split n items into (chunk_index, count) pairs of at most chunk_size.

    Args:
        n: Total number of items
        chunk_size: Chunk size (defaults to the Monte-Carlo setting)

    Returns:
        List[Tuple[int, int]]: Chunks in index order
    """
    if n < 0:
        raise DomainError(f"sample count must be non-negative, got {n}", "chunk_plan")
    if chunk_size is None:
        chunk_size = Settings.MONTE_CARLO_CONFIG["chunk_size"]
    return [(index, min(chunk_size, n - start))
            for index, start in enumerate(range(0, n, chunk_size))]


def ordered_map(func: Callable[[T], R], tasks: Sequence[T], shards: int = 1) -> List[R]:
    """Map func over tasks on `shards` worker processes, keeping task order.

    Args:
        func: Picklable module-level function
        tasks: Work items
        shards: Number of worker processes (1 runs inline)

    Returns:
        List[R]: Results in task order
    """
    if shards < 1:
        raise DomainError(f"shard count must be at least 1, got {shards}", "ordered_map")
    tasks = list(tasks)
    if shards == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    logger.debug(f"Dispatching {len(tasks)} tasks to {shards} workers")
    with Pool(processes=min(shards, len(tasks))) as pool:
        return pool.map(func, tasks)


def concat(arrays: Iterable[np.ndarray], empty_shape: Tuple[int, ...]) -> np.ndarray:
    """Concatenate chunk results, or return an empty array of the given shape."""
    arrays = list(arrays)
    if not arrays:
        return np.zeros(empty_shape)
    return np.concatenate(arrays)
