import numpy as np
import pytest

from gammapolymer.rng import block_sizes, map_blocks, stream


def test_streams_reproducible_and_distinct():
    a = stream(7, 3).random(5)
    assert np.array_equal(a, stream(7, 3).random(5))
    assert not np.array_equal(a, stream(7, 4).random(5))
    assert not np.array_equal(a, stream(8, 3).random(5))


def test_stream_rejects_negative():
    with pytest.raises(ValueError):
        stream(-1)


def test_block_sizes():
    assert block_sizes(25, 10) == [10, 10, 5]
    assert block_sizes(0, 10) == []
    with pytest.raises(ValueError):
        block_sizes(5, 0)


@pytest.mark.parametrize("threads", [1, 2, 5])
def test_map_blocks_thread_independent(threads):
    ref = map_blocks(lambda g, n: g.random(n), 95, 10, seed=11)
    out = map_blocks(lambda g, n: g.random(n), 95, 10, seed=11, threads=threads)
    assert all(np.array_equal(x, y) for x, y in zip(ref, out))
    assert sum(len(x) for x in out) == 95
