"""Fourier transform of Z_7[S_5] via Young's seminormal form.

Since 7 does not divide 120, Z_7[S_5] splits as a product of full matrix
algebras over GF(7), one per partition of 5 (dimensions 1, 4, 5, 6, 5, 4, 1).
A 3x3 matrix over the group ring becomes seven block matrices of size
3*d; each is zero-padded to 18x18 so that a matrix product is one batched
``(7, 18, 18)`` multiplication.  Used to accelerate powering; the direct
convolution in :mod:`grcs.gmatrix` stays the reference.
"""

import numpy as np

from . import gf7, perm
from .gring import MODULUS, SIZE

PARTITIONS = ((5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1))
DIM = 3
PAD = 18


def _standard_tableaux(shape):
    """All standard Young tableaux as dicts value -> (row, col), values 0..4."""
    out = []

    def place(filled, pos, k):
        if k == sum(shape):
            out.append(dict(pos))
            return
        for r, length in enumerate(shape):
            c = filled[r]
            if c < length and (r == 0 or filled[r - 1] > c):
                filled[r] += 1
                pos[k] = (r, c)
                place(filled, pos, k + 1)
                filled[r] -= 1
                del pos[k]

    place([0] * len(shape), {}, 0)
    return out


def _seminormal_generators(shape):
    """Matrices over GF(7) of the adjacent transpositions (k, k+1), k = 0..3."""
    tabs = _standard_tableaux(shape)
    index = {tuple(sorted(t.items())): i for i, t in enumerate(tabs)}
    d = len(tabs)
    gens = []
    for k in range(perm.DEGREE - 1):
        m = np.zeros((d, d), dtype=np.int64)
        for i, t in enumerate(tabs):
            (r1, c1), (r2, c2) = t[k], t[k + 1]
            axial = (c2 - r2) - (c1 - r1)
            inv_a = int(gf7.INVERSES[axial % MODULUS])
            m[i, i] = inv_a
            if abs(axial) == 1:
                continue
            swapped = dict(t)
            swapped[k], swapped[k + 1] = t[k + 1], t[k]
            j = index[tuple(sorted(swapped.items()))]
            # k+1 lies in a lower row than k in the "smaller" tableau
            if r2 > r1:
                m[j, i] = 1
            else:
                m[j, i] = (1 - inv_a * inv_a) % MODULUS
        gens.append(m)
    return gens


def _representation(shape) -> np.ndarray:
    """rho[g] for every permutation rank g, shape (120, d, d)."""
    gens = _seminormal_generators(shape)
    d = gens[0].shape[0]
    rho = np.zeros((SIZE, d, d), dtype=np.int64)
    seen = {0}
    rho[0] = np.eye(d, dtype=np.int64)
    frontier = [0]
    swaps = [perm.fast_rank(tuple(k + 1 if x == k else k if x == k + 1 else x for x in range(perm.DEGREE)))
             for k in range(perm.DEGREE - 1)]
    while frontier:
        nxt = []
        for g in frontier:
            for s, gen in zip(swaps, gens):
                h = int(perm.MUL[s, g])
                if h not in seen:
                    rho[h] = gen @ rho[g] % MODULUS
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return rho


REPS = [_representation(p) for p in PARTITIONS]
DIMS = [r.shape[1] for r in REPS]

# TRANSFORM[g, :] = concatenated flattened rho_lambda(g); coefficient vector a maps to a @ TRANSFORM
TRANSFORM = np.concatenate([r.reshape(SIZE, -1) for r in REPS], axis=1)
INVERSE_TRANSFORM = gf7.inverse(TRANSFORM)


def _placement():
    """Positions in the padded (7, 18, 18) array of every (i, k, transform column)."""
    pos = np.zeros((DIM, DIM, SIZE), dtype=np.intp)
    col = 0
    for lam, d in enumerate(DIMS):
        for p in range(d):
            for q in range(d):
                for i in range(DIM):
                    for k in range(DIM):
                        pos[i, k, col] = (lam * PAD + i * d + p) * PAD + k * d + q
                col += 1
    return pos


_POS = _placement()
_TF32 = TRANSFORM.astype(np.float32)
_ITF32 = INVERSE_TRANSFORM.astype(np.float32)
for _t in (TRANSFORM, INVERSE_TRANSFORM, _POS):
    _t.setflags(write=False)


def forward(entries: np.ndarray) -> np.ndarray:
    """(3, 3, 120) residues -> padded (7, 18, 18) float32 Fourier blocks."""
    hat = entries.reshape(DIM * DIM, SIZE).astype(np.float32) @ _TF32
    np.fmod(hat, MODULUS, out=hat)
    out = np.zeros(len(PARTITIONS) * PAD * PAD, dtype=np.float32)
    out[_POS.reshape(-1)] = hat.reshape(-1)
    return out.reshape(len(PARTITIONS), PAD, PAD)


def backward(blocks: np.ndarray) -> np.ndarray:
    """Inverse of :func:`forward`; returns (3, 3, 120) uint8."""
    hat = blocks.reshape(-1)[_POS].reshape(DIM * DIM, SIZE)
    out = hat @ _ITF32
    return np.fmod(out, MODULUS, out=out).astype(np.uint8).reshape(DIM, DIM, SIZE)


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.matmul(a, b)
    return np.fmod(out, MODULUS, out=out)


def power(blocks: np.ndarray, e: int) -> np.ndarray:
    """Left-to-right square-and-multiply on Fourier blocks; ``e`` >= 1."""
    acc = blocks
    for bit in bin(e)[3:]:
        acc = multiply(acc, acc)
        if bit == "1":
            acc = multiply(acc, blocks)
    return acc


def invert(blocks: np.ndarray) -> np.ndarray:
    """Invert each 3d x 3d block; raises ``gf7.SingularMatrixError`` if any is singular."""
    out = np.zeros_like(blocks)
    for lam, d in enumerate(DIMS):
        n = DIM * d
        out[lam, :n, :n] = gf7.inverse(blocks[lam, :n, :n].astype(np.int64))
    return out
