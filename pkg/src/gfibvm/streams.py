"""Counter-based random streams keyed by simulation cell and replicate.

Mixing rule: a cell ``(tag, n, theta)`` gets the 128-bit Philox key
``SeedSequence(seed, spawn_key=(tag, n, bits(theta))).generate_state(2)``,
where ``bits`` is the IEEE-754 bit pattern of ``theta``. Replicate ``r`` of
that cell starts the Philox counter at ``(0, 0, r, 0)``. Any replicate can be
regenerated on its own, so results never depend on execution order or on how
work is split between processes.
"""

from __future__ import annotations

import struct

import numpy as np

SEED_MASK = (1 << 64) - 1


def float_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def cell_key(seed: int, tag: int, n: int, theta: float) -> np.ndarray:
    if not 0 <= seed <= SEED_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(tag), int(n), float_bits(theta)))
    return ss.generate_state(2, np.uint64)


def replicate_generator(key: np.ndarray, replicate: int) -> np.random.Generator:
    counter = np.array([0, 0, replicate, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def uniforms(key: np.ndarray, start: int, stop: int, n: int) -> np.ndarray:
    """Rows ``start .. stop-1`` of the cell's uniform draws, shape ``(stop-start, n)``."""
    out = np.empty((stop - start, n))
    for i, r in enumerate(range(start, stop)):
        out[i] = replicate_generator(key, r).random(n)
    return out
