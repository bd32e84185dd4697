"""Cramer-Shoup style encryption over 3x3 matrices over Z_7[S_5].

Exponents are plain Python ints and are never reduced: the order of M1 is
unknown, so ``n`` only bounds the sampling range.
"""

import hashlib
import random
from dataclasses import dataclass, field

from . import gf7, gmatrix, sampler
from .gmatrix import GRMatrix, mat_pow

HASH_ID = "GRCS-a1"
_ALPHA_DOMAIN = b"GRCS-CS-alpha-v1"


class DecryptionRejected(Exception):
    """The ciphertext failed the validity check."""


@dataclass(frozen=True)
class Params:
    n: int = 10 ** 100
    k: int = sampler.DEFAULT_DEGREE
    factors: int = sampler.DEFAULT_FACTORS
    hash_id: str = HASH_ID

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.factors < 1:
            raise ValueError("factors must be at least 1")
        if self.hash_id != HASH_ID:
            raise ValueError(f"unsupported hash construction {self.hash_id!r}")


@dataclass(frozen=True)
class PublicKey:
    M1: GRMatrix
    M2: GRMatrix
    c: GRMatrix
    d: GRMatrix
    h: GRMatrix
    params: Params = field(default_factory=Params)


@dataclass(frozen=True)
class SecretKey:
    x1: int
    x2: int
    y1: int
    y2: int
    z: int
    m1_inv: GRMatrix
    pk: PublicKey

    @property
    def params(self) -> Params:
        return self.pk.params


@dataclass(frozen=True)
class Ciphertext:
    u1: GRMatrix
    u2: GRMatrix
    e: GRMatrix
    v: GRMatrix


def keygen(rng: random.Random, params: Params = Params()):
    """Return ``(pk, sk)``."""
    pair = sampler.sample_invertible(rng, params.factors)
    m1 = pair.M
    m2 = sampler.sample_commuting(rng, m1, params.k)
    x1, x2, y1, y2, z = (sampler.sample_exponent(rng, params.n) for _ in range(5))
    pk = PublicKey(
        M1=m1,
        M2=m2,
        c=mat_pow(m1, x1) @ mat_pow(m2, x2),
        d=mat_pow(m1, y1) @ mat_pow(m2, y2),
        h=mat_pow(m1, z),
        params=params,
    )
    return pk, SecretKey(x1, x2, y1, y2, z, pair.M_inv, pk)


def hash_to_scalar(u1: GRMatrix, u2: GRMatrix, e: GRMatrix, n: int) -> int:
    """alpha = H(u1, u2, e) in [0, n).

    Two SHA-256 blocks over a domain tag, a counter byte and the canonical
    bytes of the three matrices, read as one 512-bit big-endian integer.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    payload = u1.to_bytes() + u2.to_bytes() + e.to_bytes()
    digest = b"".join(hashlib.sha256(_ALPHA_DOMAIN + bytes([t]) + payload).digest() for t in (0, 1))
    return int.from_bytes(digest, "big") % n


def encrypt_with_exponent(pk: PublicKey, message: GRMatrix, r: int) -> Ciphertext:
    """Deterministic encryption core for a given ephemeral exponent ``r``."""
    u1 = mat_pow(pk.M1, r)
    u2 = mat_pow(pk.M2, r)
    e = mat_pow(pk.h, r) @ message
    alpha = hash_to_scalar(u1, u2, e, pk.params.n)
    v = mat_pow(pk.c, r) @ mat_pow(pk.d, r * alpha)
    return Ciphertext(u1, u2, e, v)


def encrypt(rng: random.Random, pk: PublicKey, message: GRMatrix) -> Ciphertext:
    r = sampler.sample_exponent(rng, pk.params.n)
    return encrypt_with_exponent(pk, message, r)


def verify(sk: SecretKey, ct: Ciphertext) -> bool:
    """Check v == u1^(x1 + alpha y1) u2^(x2 + alpha y2)."""
    alpha = hash_to_scalar(ct.u1, ct.u2, ct.e, sk.params.n)
    expected = mat_pow(ct.u1, sk.x1 + alpha * sk.y1) @ mat_pow(ct.u2, sk.x2 + alpha * sk.y2)
    return ct.v == expected


def decrypt(sk: SecretKey, ct: Ciphertext) -> GRMatrix:
    """Recover N = (u1^z)^-1 e, raising :class:`DecryptionRejected` on an invalid ciphertext.

    The decryptor does not know r, so instead of inverting through the cached
    inverse of M1 it solves (u1^z) N = e by Gaussian elimination on the 360x360
    block representation of u1^z.
    """
    if not verify(sk, ct):
        raise DecryptionRejected("reject")
    try:
        return gmatrix.solve_left(mat_pow(ct.u1, sk.z), ct.e)
    except gf7.SingularMatrixError:
        raise DecryptionRejected("reject") from None
