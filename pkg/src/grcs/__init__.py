"""Cramer-Shoup style public-key encryption over 3x3 matrices over Z_7[S_5]."""

from .cscrypt import (
    Ciphertext,
    DecryptionRejected,
    Params,
    PublicKey,
    SecretKey,
    decrypt,
    encrypt,
    hash_to_scalar,
    keygen,
    verify,
)
from .gmatrix import GRMatrix, identity, mat_mul, mat_pow, random_matrix
from .gring import GroupRingElement

__version__ = "0.1.0"

__all__ = [
    "Ciphertext",
    "DecryptionRejected",
    "GRMatrix",
    "GroupRingElement",
    "Params",
    "PublicKey",
    "SecretKey",
    "decrypt",
    "encrypt",
    "hash_to_scalar",
    "identity",
    "keygen",
    "mat_mul",
    "mat_pow",
    "random_matrix",
    "verify",
]
