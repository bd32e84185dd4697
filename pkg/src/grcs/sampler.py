"""Sampling of key material.

Invertible matrices are products of random unit triangular factors whose
inverses are known in closed form; commuting partners are polynomials in
the invertible matrix; exponents are uniform by rejection sampling.
"""

import random
from dataclasses import dataclass
from typing import Sequence

from . import gmatrix, gring, perm
from ._random import randbelow, uniform_residues
from .gmatrix import GRMatrix

DEFAULT_FACTORS = 20
DEFAULT_DEGREE = 100

UPPER = "upper"
LOWER = "lower"
_OFF_DIAG = {UPPER: ((0, 1), (0, 2), (1, 2)), LOWER: ((1, 0), (2, 0), (2, 1))}


@dataclass(frozen=True)
class TriangularFactor:
    """A triangular matrix with monomial units ``n*u`` on the diagonal.

    ``diagonal`` holds three ``(n, u)`` pairs with ``n`` in 1..6 and ``u`` a
    permutation.  ``off_diag`` holds (g1, g2, g3): positions (1,2), (1,3), (2,3)
    for an upper factor and (2,1), (3,1), (3,2) for a lower one.
    """

    orientation: str
    diagonal: tuple
    off_diag: tuple

    def __post_init__(self):
        if self.orientation not in _OFF_DIAG:
            raise ValueError(f"orientation must be {UPPER!r} or {LOWER!r}")
        if len(self.diagonal) != 3 or len(self.off_diag) != 3:
            raise ValueError("need three diagonal units and three off-diagonal entries")
        for n, u in self.diagonal:
            if not 1 <= n <= 6:
                raise ValueError(f"diagonal scalar must be in 1..6, got {n}")
            perm.check(u)

    def units(self):
        return [gring.monomial(n, u) for n, u in self.diagonal]

    def unit_inverses(self):
        return [gring.invert_monomial(n, u) for n, u in self.diagonal]

    def matrix(self) -> GRMatrix:
        rows = [[gring.zero() for _ in range(3)] for _ in range(3)]
        for i, unit in enumerate(self.units()):
            rows[i][i] = unit
        for (i, j), g in zip(_OFF_DIAG[self.orientation], self.off_diag):
            rows[i][j] = g
        return GRMatrix(rows)


@dataclass(frozen=True)
class InvertibleMatrixPair:
    M: GRMatrix
    M_inv: GRMatrix


def random_unit_triangular(rng: random.Random, orientation: str) -> TriangularFactor:
    diagonal = tuple((1 + randbelow(rng, 6), perm.unrank(randbelow(rng, perm.ORDER))) for _ in range(3))
    off_diag = tuple(gring.random_element(rng) for _ in range(3))
    return TriangularFactor(orientation, diagonal, off_diag)


def triangular_inverse(t: TriangularFactor) -> GRMatrix:
    """Closed-form inverse of a unit triangular factor.

    Upper:  g4 = -u1' g1 u2',  g5 = u1' g1 u2' g3 u3' - u1' g2 u3',  g6 = -u2' g3 u3'
    Lower:  h1 = -u2' g1 u1',  h2 = u3' g3 u2' g1 u1' - u3' g2 u1',  h3 = -u3' g3 u2'
    where x' denotes the inverse of the diagonal unit x.
    """
    v1, v2, v3 = t.unit_inverses()
    g1, g2, g3 = t.off_diag
    if t.orientation == UPPER:
        a = v1 * g1 * v2
        off = (-a, a * g3 * v3 - v1 * g2 * v3, -(v2 * g3 * v3))
    else:
        b = v3 * g3 * v2
        off = (-(v2 * g1 * v1), b * g1 * v1 - v3 * g2 * v1, -b)
    rows = [[gring.zero() for _ in range(3)] for _ in range(3)]
    for i, v in enumerate((v1, v2, v3)):
        rows[i][i] = v
    for (i, j), g in zip(_OFF_DIAG[t.orientation], off):
        rows[i][j] = g
    return GRMatrix(rows)


def sample_invertible(rng: random.Random, factors: int = DEFAULT_FACTORS) -> InvertibleMatrixPair:
    """Product of ``factors`` random triangular factors, each upper or lower by a fair coin.

    The inverse is accumulated in reverse order alongside.  A product equal to
    the identity is discarded and the whole sample redrawn.
    """
    if factors < 1:
        raise ValueError("factors must be at least 1")
    ident = gmatrix.identity()
    while True:
        m, m_inv = ident, ident
        for _ in range(factors):
            t = random_unit_triangular(rng, UPPER if rng.getrandbits(1) else LOWER)
            m = m @ t.matrix()
            m_inv = triangular_inverse(t) @ m_inv
        if m != ident:
            return InvertibleMatrixPair(m, m_inv)


def matrix_polynomial(m: GRMatrix, coeffs: Sequence[int]) -> GRMatrix:
    """``sum(coeffs[i-1] * m**i for i in 1..k)`` by Horner's scheme."""
    if not coeffs:
        raise ValueError("need at least one coefficient")
    acc = gmatrix.mat_scale(coeffs[-1], m)
    for a in reversed(coeffs[:-1]):
        acc = (acc + gmatrix.mat_scale(a, gmatrix.identity())) @ m
    return acc


def sample_commuting(rng: random.Random, m1: GRMatrix, k: int = DEFAULT_DEGREE) -> GRMatrix:
    """A random polynomial in ``m1`` of degree at most ``k`` with no constant term, never 0 or I."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ident, zero = gmatrix.identity(), gmatrix.zero_matrix()
    while True:
        m2 = matrix_polynomial(m1, [int(a) for a in uniform_residues(rng, k)])
        if m2 != zero and m2 != ident:
            return m2


def sample_exponent(rng: random.Random, n: int) -> int:
    """Uniform in [1, n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return sample_exponent_range(rng, 1, n)


def sample_exponent_range(rng: random.Random, lo: int, hi: int) -> int:
    """Uniform in [lo, hi)."""
    if not 0 <= lo < hi:
        raise ValueError(f"need 0 <= lo < hi, got [{lo}, {hi})")
    return lo + randbelow(rng, hi - lo)


def triangular_count() -> int:
    """(7*120)^3 * (7^120)^3: monomial diagonals times free off-diagonal entries."""
    return (7 * perm.ORDER) ** 3 * (7 ** gring.SIZE) ** 3
