"""The group ring Z_7[S_5].

Elements are dense vectors of 120 residues mod 7; coordinate ``i`` is the
coefficient of ``perm.unrank(i)``.  Multiplication is the convolution
``(a*b)(g) = sum_h a(h) b(h^-1 g)``, evaluated through a precomputed index
table so that no permutation is composed on the hot path.
"""

import random

import numpy as np

from . import gf7, perm
from ._random import uniform_residues

MODULUS = 7
SIZE = perm.ORDER

#: CONV[h, g] = rank(h^-1 o g); row h of b[CONV] lines b up against a(h).
CONV = perm.MUL[perm.INV, :]
#: REG[i, j] = rank(g_i o g_j^-1); left-regular matrix of a is a[REG].
REG = perm.MUL[:, perm.INV]
for _t in (CONV, REG):
    _t.setflags(write=False)


class GroupRingElement:
    """An immutable element of Z_7[S_5]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.int64)
        if c.shape != (SIZE,):
            raise ValueError(f"expected {SIZE} coefficients, got shape {c.shape}")
        c = (c % MODULUS).astype(np.uint8)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "GroupRingElement":
        # arr must already be reduced uint8 of length 120
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj.coeffs = arr
        return obj

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, neg(other))

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, n):
        if isinstance(n, (int, np.integer)):
            return scalar_mul(int(n), self)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        terms = [f"{c}*{perm.unrank(i)}" for i, c in enumerate(self.coeffs) if c]
        if len(terms) > 4:
            return f"GroupRingElement(<{len(terms)} terms>)"
        return "GroupRingElement(" + (" + ".join(terms) or "0") + ")"

    def to_bytes(self) -> bytes:
        """Canonical form: 120 bytes, byte i = coefficient i."""
        return self.coeffs.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "GroupRingElement":
        arr = np.frombuffer(data, dtype=np.uint8)
        if arr.shape != (SIZE,) or (arr >= MODULUS).any():
            raise ValueError("group ring element needs 120 bytes each below 7")
        return cls._wrap(arr.copy())


def zero() -> GroupRingElement:
    return GroupRingElement._wrap(np.zeros(SIZE, dtype=np.uint8))


def embed_scalar(n: int) -> GroupRingElement:
    c = np.zeros(SIZE, dtype=np.uint8)
    c[0] = n % MODULUS
    return GroupRingElement._wrap(c)


def one() -> GroupRingElement:
    return embed_scalar(1)


def embed_group(p) -> GroupRingElement:
    c = np.zeros(SIZE, dtype=np.uint8)
    c[perm.fast_rank(perm.check(p))] = 1
    return GroupRingElement._wrap(c)


def monomial(n: int, p) -> GroupRingElement:
    """The element ``n * p``."""
    return scalar_mul(n, embed_group(p))


def add(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return GroupRingElement._wrap((a.coeffs + b.coeffs) % MODULUS)


def neg(a: GroupRingElement) -> GroupRingElement:
    return GroupRingElement._wrap((MODULUS - a.coeffs) % MODULUS)


def scalar_mul(n: int, a: GroupRingElement) -> GroupRingElement:
    return GroupRingElement._wrap(((n % MODULUS) * a.coeffs.astype(np.int64) % MODULUS).astype(np.uint8))


def mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    out = a.coeffs.astype(np.int64) @ b.coeffs.astype(np.int64)[CONV]
    return GroupRingElement._wrap((out % MODULUS).astype(np.uint8))


def regular_representation(a: GroupRingElement) -> np.ndarray:
    """The 120x120 matrix of ``x -> a*x``; column j is the coefficient vector of ``a * g_j``."""
    return a.coeffs.astype(np.int64)[REG]


def is_unit(a: GroupRingElement) -> bool:
    return gf7.rank(regular_representation(a)) == SIZE


def invert_unit(a: GroupRingElement) -> GroupRingElement:
    """Two-sided inverse of a unit, found by solving ``rep(a) x = 1``."""
    e1 = one().coeffs.astype(np.int64)
    try:
        x = gf7.solve(regular_representation(a), e1)
    except gf7.SingularMatrixError:
        raise ValueError("element is not a unit of Z_7[S_5]") from None
    return GroupRingElement._wrap(x.astype(np.uint8))


def invert_monomial(n: int, p) -> GroupRingElement:
    """Closed form (n*p)^-1 = n^-1 * p^-1."""
    n %= MODULUS
    if n == 0:
        raise ValueError("zero monomial is not a unit")
    return monomial(int(gf7.INVERSES[n]), perm.inverse(p))


def random_element(rng: random.Random) -> GroupRingElement:
    """Each of the 120 coefficients independent and uniform in 0..6."""
    return GroupRingElement._wrap(uniform_residues(rng, SIZE))
