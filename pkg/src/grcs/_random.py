"""Helpers drawing from ``random.Random``-compatible sources.

Key material uses ``random.SystemRandom`` (OS entropy); experiments and tests
may pass a seeded ``random.Random``.  Everything here uses only ``randbytes``
and ``getrandbits`` so both kinds of source behave identically.
"""

import random

import numpy as np

# largest multiple of 7 not exceeding 256
_CUTOFF = 252


def system_rng() -> random.Random:
    return random.SystemRandom()


def uniform_residues(rng: random.Random, count: int) -> np.ndarray:
    """``count`` independent residues uniform in 0..6, by rejection on bytes."""
    out = np.empty(count, dtype=np.uint8)
    filled = 0
    while filled < count:
        need = count - filled
        raw = np.frombuffer(rng.randbytes(need + need // 16 + 8), dtype=np.uint8)
        good = raw[raw < _CUTOFF][:need]
        out[filled:filled + good.size] = good % 7
        filled += good.size
    return out


def randbelow(rng: random.Random, n: int) -> int:
    """Uniform integer in [0, n) by rejection on ``n.bit_length()``-bit draws."""
    if n < 1:
        raise ValueError("n must be positive")
    k = n.bit_length()
    while True:
        x = rng.getrandbits(k)
        if x < n:
            return x
