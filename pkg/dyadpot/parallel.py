"""
Worker pool for pure, chunked evaluations.

Results are always concatenated in chunk order, so the output does not depend
on how many threads ran.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

_THREADS = 1


def set_threads(n: int) -> None:
    global _THREADS
    if n < 1:
        raise ValueError(f"thread count must be >= 1, got {n}")
    _THREADS = int(n)


def get_threads() -> int:
    return _THREADS


def chunk_slices(n_items: int, chunk_size: int) -> List[slice]:
    """Contiguous slices covering range(n_items)"""
    return [slice(i, min(i + chunk_size, n_items)) for i in range(0, n_items, chunk_size)]


def map_chunks(func: Callable[[slice], T], n_items: int, chunk_size: int = 256) -> List[T]:
    """
    Evaluate ``func`` on contiguous slices of ``range(n_items)``.

    :param func: callable taking a slice and returning a partial result
    :param n_items: int total number of items
    :param chunk_size: int items per chunk
    :return: list of partial results in slice order
    """
    slices = chunk_slices(n_items, chunk_size)
    if _THREADS == 1 or len(slices) <= 1:
        return [func(s) for s in slices]
    with ThreadPoolExecutor(max_workers=_THREADS) as pool:
        return list(pool.map(func, slices))


def map_points(func: Callable[[np.ndarray], np.ndarray], points: np.ndarray, chunk_size: int = 512) -> np.ndarray:
    """Apply a vectorised point function in chunks and stack the results along axis 0"""
    points = np.asarray(points)
    if len(points) == 0:
        return func(points)
    parts: Sequence[np.ndarray] = map_chunks(lambda s: func(points[s]), len(points), chunk_size)
    return np.concatenate(parts, axis=0)
