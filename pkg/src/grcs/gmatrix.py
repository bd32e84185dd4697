"""3x3 matrices over Z_7[S_5].

A matrix is stored as a read-only ``(3, 3, 120)`` uint8 array.  The product
``A @ B`` is evaluated as a single dense ``(3, 360) x (360, 360)`` product:
``B`` is scattered into its right-multiplication form with one precomputed
gather, then multiplied in float32 (exact, since every partial sum stays
below 360 * 36 < 2**24).
"""

import random

import numpy as np

from . import fourier, gf7, gring
from .gring import GroupRingElement, MODULUS, SIZE

DIM = 3
SHAPE = (DIM, DIM, SIZE)
NBYTES = DIM * DIM * SIZE

_k, _h, _j, _g = np.ix_(range(DIM), range(SIZE), range(DIM), range(SIZE))
# RIGHT[(k,h), (j,g)] = flat position of B[k, j, h^-1 g]
_RIGHT = ((_k * DIM + _j) * SIZE + gring.CONV[_h, _g]).reshape(DIM * SIZE, DIM * SIZE)
# LEFT[(i,x), (k,y)] = flat position of A[i, k, g_x g_y^-1]
_i, _x, _kk, _y = _k, _h, _j, _g
_LEFT = ((_i * DIM + _kk) * SIZE + gring.REG[_x, _y]).reshape(DIM * SIZE, DIM * SIZE)
del _k, _h, _j, _g, _i, _x, _kk, _y


def _mul_raw(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two reduced (3, 3, 120) uint8 arrays."""
    right = np.take(b.reshape(-1), _RIGHT).astype(np.float32)
    out = a.reshape(DIM, DIM * SIZE).astype(np.float32) @ right
    return np.fmod(out, MODULUS, out=out).astype(np.uint8).reshape(SHAPE)


class GRMatrix:
    """Immutable 3x3 matrix over Z_7[S_5]."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        if isinstance(entries, np.ndarray):
            arr = entries.astype(np.int64)
        else:
            arr = np.array(
                [[e.coeffs if isinstance(e, GroupRingElement) else e for e in row] for row in entries],
                dtype=np.int64,
            )
        if arr.shape != SHAPE:
            raise ValueError(f"expected shape {SHAPE}, got {arr.shape}")
        arr = (arr % MODULUS).astype(np.uint8)
        arr.setflags(write=False)
        self.entries = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "GRMatrix":
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj.entries = arr
        return obj

    def __getitem__(self, ij) -> GroupRingElement:
        i, j = ij
        return GroupRingElement._wrap(self.entries[i, j].copy())

    def __matmul__(self, other):
        if not isinstance(other, GRMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def __add__(self, other):
        if not isinstance(other, GRMatrix):
            return NotImplemented
        return mat_add(self, other)

    def __sub__(self, other):
        return mat_add(self, mat_neg(other))

    def __neg__(self):
        return mat_neg(self)

    def __rmul__(self, n):
        if isinstance(n, (int, np.integer)):
            return mat_scale(int(n), self)
        return NotImplemented

    def __pow__(self, e):
        return mat_pow(self, e)

    def __eq__(self, other):
        if not isinstance(other, GRMatrix):
            return NotImplemented
        return mat_eq(self, other)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        nz = int(np.count_nonzero(self.entries))
        return f"GRMatrix(<{nz}/{NBYTES} nonzero coefficients>)"

    def to_bytes(self) -> bytes:
        """Canonical form: 1080 bytes, entries row-major, 120 coefficient bytes each."""
        return self.entries.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "GRMatrix":
        arr = np.frombuffer(bytes(data), dtype=np.uint8)
        if arr.size != NBYTES or (arr >= MODULUS).any():
            raise ValueError(f"matrix needs exactly {NBYTES} bytes, each below 7")
        return cls._wrap(arr.reshape(SHAPE).copy())


def identity() -> GRMatrix:
    arr = np.zeros(SHAPE, dtype=np.uint8)
    for i in range(DIM):
        arr[i, i, 0] = 1
    return GRMatrix._wrap(arr)


def zero_matrix() -> GRMatrix:
    return GRMatrix._wrap(np.zeros(SHAPE, dtype=np.uint8))


def mat_mul(a: GRMatrix, b: GRMatrix) -> GRMatrix:
    return GRMatrix._wrap(_mul_raw(a.entries, b.entries))


def mat_add(a: GRMatrix, b: GRMatrix) -> GRMatrix:
    return GRMatrix._wrap((a.entries + b.entries) % MODULUS)


def mat_neg(a: GRMatrix) -> GRMatrix:
    return GRMatrix._wrap((MODULUS - a.entries) % MODULUS)


def mat_scale(n: int, a: GRMatrix) -> GRMatrix:
    """Multiply every coefficient by the residue ``n``."""
    return GRMatrix._wrap((a.entries.astype(np.int64) * (n % MODULUS) % MODULUS).astype(np.uint8))


def mat_eq(a: GRMatrix, b: GRMatrix) -> bool:
    return np.array_equal(a.entries, b.entries)


def mat_pow(m: GRMatrix, e: int) -> GRMatrix:
    """``m**e`` by left-to-right binary square-and-multiply.

    The squarings run on the Fourier blocks of ``m`` (see :mod:`grcs.fourier`);
    :func:`mat_pow_direct` is the same loop on the convolution kernel.
    """
    e = int(e)
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    if e == 0:
        return identity()
    if e == 1:
        return m
    return GRMatrix._wrap(fourier.backward(fourier.power(fourier.forward(m.entries), e)))


def mat_pow_direct(m: GRMatrix, e: int) -> GRMatrix:
    e = int(e)
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    if e == 0:
        return identity()
    base = m.entries
    acc = base
    for bit in bin(e)[3:]:
        acc = _mul_raw(acc, acc)
        if bit == "1":
            acc = _mul_raw(acc, base)
    return GRMatrix._wrap(acc.copy() if acc is base else acc)


def random_matrix(rng: random.Random) -> GRMatrix:
    """All 9 entries drawn independently by :func:`gring.random_element`."""
    return GRMatrix([[gring.random_element(rng) for _ in range(DIM)] for _ in range(DIM)])


def block_representation(a: GRMatrix) -> np.ndarray:
    """360x360 matrix over GF(7) of ``X -> A X`` on column vectors in Z_7[S_5]^3.

    Block (i, k) is the left-regular representation of ``A[i, k]``; the map is
    a ring homomorphism.
    """
    return np.take(a.entries.reshape(-1), _LEFT).astype(np.int64)


def from_block_representation(rep: np.ndarray) -> GRMatrix:
    """Inverse of :func:`block_representation` on its image.

    The regular matrix of ``x`` has ``x`` itself as the column of the identity
    permutation, so entry (i, k) is read off column 0 of block (i, k).
    """
    rep = np.asarray(rep)
    cols = rep[:, [k * SIZE for k in range(DIM)]]  # (360, 3): column 0 of each block column
    arr = cols.reshape(DIM, SIZE, DIM).transpose(0, 2, 1) % MODULUS
    return GRMatrix._wrap(arr.astype(np.uint8))


def mat_inverse(a: GRMatrix) -> GRMatrix:
    """Two-sided inverse via Gaussian elimination on the block representation.

    Raises ``gf7.SingularMatrixError`` when ``a`` is not invertible.
    """
    return from_block_representation(gf7.inverse(block_representation(a)))


def solve_left(w: GRMatrix, e: GRMatrix) -> GRMatrix:
    """The matrix N with ``w @ N == e``, by elimination on the block representation of ``w``.

    Column j of N, viewed as a vector in Z_7[S_5]^3, solves ``rep(w) x = e[:, j]``.
    Raises ``gf7.SingularMatrixError`` when ``w`` is not invertible.
    """
    rhs = e.entries.transpose(0, 2, 1).reshape(DIM * SIZE, DIM).astype(np.int64)
    x = gf7.solve(block_representation(w), rhs)
    return GRMatrix._wrap((x.reshape(DIM, SIZE, DIM).transpose(0, 2, 1) % MODULUS).astype(np.uint8))


def density(a: GRMatrix) -> np.ndarray:
    """Fraction of nonzero coefficients in each entry, shape (3, 3)."""
    return np.count_nonzero(a.entries, axis=2) / SIZE
