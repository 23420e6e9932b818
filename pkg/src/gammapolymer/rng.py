"""Counter-based random streams.

Every Monte-Carlo loop in the package draws from ``stream(seed, index)``: a
Philox generator keyed by the base seed whose counter starts at
``index << 192``.  Stream ``index`` therefore owns 2**192 counter values and
streams never overlap, so a block of replicas produces the same numbers no
matter which worker computes it or in which order.
"""

from __future__ import annotations

import numpy as np

GENERATOR_ID = "philox4x64-stream"

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    if seed < 0 or index < 0:
        raise ValueError("seed and stream index must be non-negative")
    key = np.array([seed & _MASK64, (seed >> 64) & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, 0, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def block_sizes(total: int, block: int) -> list[int]:
    """Split ``total`` replicas into fixed-size blocks (last one shorter)."""
    if total < 0 or block <= 0:
        raise ValueError("need total >= 0 and block > 0")
    full, rest = divmod(total, block)
    return [block] * full + ([rest] if rest else [])


def map_blocks(func, total: int, block: int, seed: int, threads: int = 1, offset: int = 0) -> list:
    """``[func(stream(seed, offset + k), size_k) for each block k]`` in block order.

    Blocks may run on a thread pool; since block ``k`` always owns stream
    ``offset + k`` the result does not depend on ``threads``.
    """
    sizes = block_sizes(total, block)
    jobs = [(offset + k, size) for k, size in enumerate(sizes)]
    if threads <= 1 or len(jobs) <= 1:
        return [func(stream(seed, idx), size) for idx, size in jobs]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: func(stream(seed, job[0]), job[1]), jobs))
