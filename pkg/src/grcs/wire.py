"""Byte formats for matrices, keys, ciphertexts and messages.

Every file starts with ``b"GRCS"``, a version byte and a kind byte.  Integers
are written as a 2-byte big-endian length followed by their big-endian
magnitude.  Matrices use their canonical 1080-byte form.
"""

import struct

import numpy as np

from .cscrypt import Ciphertext, Params, PublicKey, SecretKey
from .gmatrix import NBYTES, SHAPE, GRMatrix

MAGIC = b"GRCS"
VERSION = 1
KIND_PUBLIC, KIND_SECRET, KIND_CIPHERTEXT = 1, 2, 3
KIND_NAMES = {KIND_PUBLIC: "public_key", KIND_SECRET: "secret_key", KIND_CIPHERTEXT: "ciphertext"}
HEADER_LEN = len(MAGIC) + 2
CIPHERTEXT_LEN = HEADER_LEN + 4 * NBYTES

MAX_PAYLOAD = 376
_BLOCK_LEN = MAX_PAYLOAD + 2
_BLOCK_BITS = 8 * _BLOCK_LEN


class MalformedEncoding(ValueError):
    pass


class VersionMismatch(MalformedEncoding):
    pass


class PayloadTooLarge(ValueError):
    pass


def serialize_matrix(m: GRMatrix) -> bytes:
    return m.to_bytes()


def deserialize_matrix(data: bytes) -> GRMatrix:
    try:
        return GRMatrix.from_bytes(data)
    except ValueError as exc:
        raise MalformedEncoding(str(exc)) from None


class _Reader:
    def __init__(self, data: bytes):
        self.buf = memoryview(data)
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise MalformedEncoding("truncated input")
        out = bytes(self.buf[self.pos:self.pos + n])
        self.pos += n
        return out

    def uint(self, width: int) -> int:
        return int.from_bytes(self.take(width), "big")

    def bigint(self) -> int:
        return int.from_bytes(self.take(self.uint(2)), "big")

    def matrix(self) -> GRMatrix:
        return deserialize_matrix(self.take(NBYTES))

    def header(self) -> int:
        if self.take(len(MAGIC)) != MAGIC:
            raise MalformedEncoding("bad magic")
        version = self.uint(1)
        if version != VERSION:
            raise VersionMismatch(f"unsupported format version {version}")
        kind = self.uint(1)
        if kind not in KIND_NAMES:
            raise MalformedEncoding(f"unknown kind byte {kind}")
        return kind

    def done(self):
        if self.pos != len(self.buf):
            raise MalformedEncoding("trailing bytes")


def _bigint(x: int) -> bytes:
    mag = x.to_bytes((x.bit_length() + 7) // 8, "big")
    if len(mag) > 0xFFFF:
        raise ValueError("integer too large for the key format")
    return struct.pack(">H", len(mag)) + mag


def _header(kind: int) -> bytes:
    return MAGIC + bytes([VERSION, kind])


def _public_body(pk: PublicKey) -> bytes:
    p = pk.params
    hid = p.hash_id.encode("ascii")
    if p.k > 0xFFFF or p.factors > 0xFF:
        raise ValueError("k or factors too large for the key format")
    parts = [_bigint(p.n), struct.pack(">HB", p.k, p.factors), bytes([len(hid)]), hid]
    parts += [m.to_bytes() for m in (pk.M1, pk.M2, pk.c, pk.d, pk.h)]
    return b"".join(parts)


def _read_public_body(r: _Reader) -> PublicKey:
    n = r.bigint()
    k = r.uint(2)
    factors = r.uint(1)
    hash_id = r.take(r.uint(1))
    try:
        params = Params(n=n, k=k, factors=factors, hash_id=hash_id.decode("ascii"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedEncoding(f"bad parameters: {exc}") from None
    mats = [r.matrix() for _ in range(5)]
    return PublicKey(*mats, params=params)


def encode_key(key) -> bytes:
    if isinstance(key, PublicKey):
        return _header(KIND_PUBLIC) + _public_body(key)
    if isinstance(key, SecretKey):
        exps = b"".join(_bigint(x) for x in (key.x1, key.x2, key.y1, key.y2, key.z))
        return _header(KIND_SECRET) + _public_body(key.pk) + exps + key.m1_inv.to_bytes()
    raise TypeError(f"not a key: {type(key).__name__}")


def decode_key(data: bytes):
    """Parse a public or secret key blob."""
    r = _Reader(data)
    kind = r.header()
    if kind == KIND_CIPHERTEXT:
        raise MalformedEncoding("expected a key, found a ciphertext")
    pk = _read_public_body(r)
    if kind == KIND_PUBLIC:
        r.done()
        return pk
    x1, x2, y1, y2, z = (r.bigint() for _ in range(5))
    m1_inv = r.matrix()
    r.done()
    return SecretKey(x1, x2, y1, y2, z, m1_inv, pk)


def encode_ciphertext(ct: Ciphertext) -> bytes:
    return _header(KIND_CIPHERTEXT) + b"".join(m.to_bytes() for m in (ct.u1, ct.u2, ct.e, ct.v))


def decode_ciphertexts(data: bytes) -> list:
    """Parse a concatenation of ciphertext records."""
    r = _Reader(data)
    out = []
    while r.pos < len(r.buf):
        if r.header() != KIND_CIPHERTEXT:
            raise MalformedEncoding("expected a ciphertext record")
        out.append(Ciphertext(*(r.matrix() for _ in range(4))))
    return out


def decode_ciphertext(data: bytes) -> Ciphertext:
    cts = decode_ciphertexts(data)
    if len(cts) != 1:
        raise MalformedEncoding(f"expected one ciphertext record, found {len(cts)}")
    return cts[0]


def peek_kind(data: bytes) -> int:
    return _Reader(data).header()


def _read_bytes(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def write_key(key, path):
    with open(path, "wb") as fh:
        fh.write(encode_key(key))


def read_key(path):
    return decode_key(_read_bytes(path))


def write_ciphertext(ct, path):
    cts = [ct] if isinstance(ct, Ciphertext) else list(ct)
    with open(path, "wb") as fh:
        for c in cts:
            fh.write(encode_ciphertext(c))


def read_ciphertext(path) -> list:
    return decode_ciphertexts(_read_bytes(path))


# message <-> matrix

def encode_message(payload: bytes) -> GRMatrix:
    """Pack up to 376 bytes into a matrix as 1080 base-7 digits, least significant first."""
    payload = bytes(payload)
    if len(payload) > MAX_PAYLOAD:
        raise PayloadTooLarge(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    block = struct.pack(">H", len(payload)) + payload.ljust(MAX_PAYLOAD, b"\0")
    x = int.from_bytes(block, "big")
    digits = np.zeros(NBYTES, dtype=np.uint8)
    i = 0
    # peel 7**20 (< 2**57) at a time to keep bigint divisions few
    chunk = 7 ** 20
    while x:
        x, low = divmod(x, chunk)
        for k in range(20):
            low, digits[i + k] = divmod(low, 7)
        i += 20
    return GRMatrix(digits.reshape(SHAPE))


def decode_message(m: GRMatrix) -> bytes:
    digits = m.entries.reshape(-1)
    x = int("".join("0123456"[d] for d in digits[::-1]), 7)
    if x >> _BLOCK_BITS:
        raise MalformedEncoding("matrix does not encode a message block")
    block = x.to_bytes(_BLOCK_LEN, "big")
    length = int.from_bytes(block[:2], "big")
    if length > MAX_PAYLOAD:
        raise MalformedEncoding(f"length field {length} exceeds {MAX_PAYLOAD}")
    return block[2:2 + length]
