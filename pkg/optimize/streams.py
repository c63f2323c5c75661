"""
    Counter-keyed random streams.

    Samples are grouped into fixed-size blocks and every block has its own
    Philox generator keyed by (master seed, stream key, block index). Sample i
    always comes from block i // B at offset i % B, so the values of a sample
    do not depend on how many samples are drawn or how the blocks are split
    between workers.
"""

import zlib
from typing import Sequence, Tuple

import numpy as np


__all__ = [
    "block_size",
    "block_generator",
    "draw_block",
    "derive_seed",
]

TWO_PI = 2 * np.pi


def block_size(n_sites: int) -> int:
    """ Samples per block: one block evaluates about 2^20 amplitudes """
    return max(1, (1 << 20) >> n_sites)


def block_generator(master_seed: int, block: int, stream_key: Sequence[int]=()) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in stream_key) + (int(block),))
    return np.random.Generator(np.random.Philox(ss))


def draw_block(master_seed: int, block: int, size: int, n_classes: int,
               stream_key: Sequence[int]=()) -> Tuple[np.ndarray, np.ndarray]:
    """
    Class values of one block: a ~ U[0, 1), theta ~ U[0, 2 pi), each (size, n_classes).
    """
    rng = block_generator(master_seed, block, stream_key)
    a = rng.random((size, n_classes))
    theta = rng.random((size, n_classes)) * TWO_PI
    return a, theta


def derive_seed(master_seed: int, label: str, case: int=0) -> int:
    """
    64-bit seed of one (table row, case) job derived from the master seed.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(zlib.crc32(label.encode("utf-8")), int(case)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
