import numpy as np
import pytest

from dyadpot.parallel import chunk_slices, get_threads, map_chunks, map_points, set_threads


@pytest.fixture
def threads():
    previous = get_threads()
    set_threads(4)
    yield 4
    set_threads(previous)


def test_chunk_slices_cover_range():
    slices = chunk_slices(10, 4)
    assert [(s.start, s.stop) for s in slices] == [(0, 4), (4, 8), (8, 10)]
    assert chunk_slices(0, 4) == []


def test_threaded_results_keep_order(threads):
    assert get_threads() == threads
    parts = map_chunks(lambda s: list(range(s.start, s.stop)), 103, chunk_size=10)
    assert [i for part in parts for i in part] == list(range(103))


def test_map_points_matches_serial(threads, rng):
    points = rng.normal(size=(1000, 2))
    field = lambda p: np.hypot(p[:, 0], p[:, 1]) + np.sin(p[:, 0])
    assert np.array_equal(map_points(field, points, chunk_size=37), field(points))


def test_map_points_empty():
    assert map_points(lambda p: p[:, 0], np.empty((0, 2))).shape == (0,)


def test_thread_count_must_be_positive():
    with pytest.raises(ValueError):
        set_threads(0)
