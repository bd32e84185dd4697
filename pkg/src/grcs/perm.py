"""The symmetric group S5.

A permutation is a tuple of five distinct images; ``p[i]`` is where point
``i`` is sent.  Composition applies the right factor first, and every
permutation is identified with its lexicographic rank in ``0..119``.
"""

from itertools import permutations
from math import factorial

import numpy as np

DEGREE = 5
ORDER = factorial(DEGREE)

Permutation = tuple

IDENTITY: Permutation = tuple(range(DEGREE))


def check(p) -> Permutation:
    """Return ``p`` as a tuple, raising ``ValueError`` unless it is a bijection on 0..4."""
    p = tuple(int(x) for x in p)
    if len(p) != DEGREE or sorted(p) != list(range(DEGREE)):
        raise ValueError(f"not a permutation of 0..{DEGREE - 1}: {p!r}")
    return p


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p o q)(x) = p(q(x))."""
    return tuple(p[q[x]] for x in range(DEGREE))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * DEGREE
    for i, image in enumerate(p):
        inv[image] = i
    return tuple(inv)


def rank(p: Permutation) -> int:
    """Lexicographic position of ``p`` via its Lehmer code."""
    r = 0
    for i, v in enumerate(p):
        smaller = sum(1 for w in p[i + 1:] if w < v)
        r += smaller * factorial(DEGREE - 1 - i)
    return r


def unrank(i: int) -> Permutation:
    if not 0 <= i < ORDER:
        raise ValueError(f"rank out of range 0..{ORDER - 1}: {i}")
    pool = list(range(DEGREE))
    out = []
    for pos in range(DEGREE - 1, -1, -1):
        digit, i = divmod(i, factorial(pos))
        out.append(pool.pop(digit))
    return tuple(out)


def is_transposition(p: Permutation) -> bool:
    return sum(1 for i, v in enumerate(p) if i != v) == 2


# Precomputed tables, indexed by rank.
ELEMENTS: tuple = tuple(permutations(range(DEGREE)))
_RANK = {p: i for i, p in enumerate(ELEMENTS)}

#: MUL[i, j] = rank(compose(unrank(i), unrank(j)))
MUL = np.array([[_RANK[compose(p, q)] for q in ELEMENTS] for p in ELEMENTS], dtype=np.intp)
#: INV[i] = rank(inverse(unrank(i)))
INV = np.array([_RANK[inverse(p)] for p in ELEMENTS], dtype=np.intp)
for _t in (MUL, INV):
    _t.setflags(write=False)


def fast_rank(p: Permutation) -> int:
    """Table lookup equivalent of :func:`rank` for valid permutations."""
    return _RANK[p]
