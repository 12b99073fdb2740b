"""Dense linear algebra over a prime field F_p, p < 2**31.

Residues live in ``int64`` arrays.  A product of two residues fits in 62
bits, so elementwise updates are safe; dot products are split into 16-bit
halves of the right operand so accumulations stay below 2**63.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .partition import Partition, conjugate

DEFAULT_PRIME = 2_147_483_647  # 2**31 - 1
_MAX_PRIME = 2**31
_SPLIT = 16
_LOW_MASK = (1 << _SPLIT) - 1


class NotNilpotentError(ValueError):
    pass


@lru_cache(maxsize=None)
def _check_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not 2 <= self.p < _MAX_PRIME:
            raise ValueError(f"prime must lie in [2, 2**31), got {self.p}")
        if not _check_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        return pow(int(a), -1, self.p)

    def random(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.p, size=size, dtype=np.int64)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for residue arrays; inner dimension must be below 2**15."""
    hi = b >> _SPLIT
    lo = b & _LOW_MASK
    out = (a @ hi) % p
    out <<= _SPLIT
    out += a @ lo
    out %= p
    return out


def row_reduce(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``m`` over F_p and its pivot columns."""
    r = np.array(m, dtype=np.int64) % p
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.flatnonzero(r[row:, col])
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = r[row] * pow(int(r[row, col]), -1, p) % p
        factors = r[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            r[hit] = (r[hit] - factors[hit, None] * r[row]) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank_mod(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(row_reduce(m, p)[1])


class EchelonSpace:
    """Incrementally grown subspace of F_p^d kept in reduced echelon form."""

    def __init__(self, dim: int, p: int):
        self.dim = dim
        self.p = p
        self._rows = np.zeros((0, dim), dtype=np.int64)
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self._pivots:
            return v
        coeffs = v[self._pivots]
        return (v - matmul_mod(coeffs[None, :], self._rows, self.p)[0]) % self.p

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def add(self, v: np.ndarray) -> bool:
        """Insert ``v``; returns True iff it was independent of the current span."""
        red = self.reduce(v)
        nz = np.flatnonzero(red)
        if nz.size == 0:
            return False
        p = self.p
        col = int(nz[0])
        red = red * pow(int(red[col]), -1, p) % p
        if self._pivots:
            factors = self._rows[:, col]
            hit = np.flatnonzero(factors)
            if hit.size:
                self._rows[hit] = (self._rows[hit] - factors[hit, None] * red) % p
        self._rows = np.vstack([self._rows, red])
        self._pivots.append(col)
        return True


class ExactMatrix:
    """Immutable square matrix over a prime field."""

    __slots__ = ("data", "field")

    def __init__(self, data, field: PrimeField | None = None):
        field = field or PrimeField()
        arr = np.array(data, dtype=np.int64) % field.p
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def _wrap(cls, arr: np.ndarray, field: PrimeField) -> "ExactMatrix":
        # arr is already reduced mod p
        obj = object.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(obj, "data", arr)
        object.__setattr__(obj, "field", field)
        return obj

    @classmethod
    def zeros(cls, n: int, field: PrimeField | None = None) -> "ExactMatrix":
        field = field or PrimeField()
        return cls._wrap(np.zeros((n, n), dtype=np.int64), field)

    @classmethod
    def identity(cls, n: int, field: PrimeField | None = None) -> "ExactMatrix":
        field = field or PrimeField()
        return cls._wrap(np.eye(n, dtype=np.int64), field)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._wrap(self.data.T.copy(), self.field)

    def _same_field(self, other: "ExactMatrix"):
        if other.field != self.field:
            raise ValueError("matrices live over different fields")

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            self._same_field(other)
            return ExactMatrix._wrap(matmul_mod(self.data, other.data, self.p), self.field)
        vec = np.asarray(other, dtype=np.int64) % self.p
        return matmul_mod(self.data, vec.reshape(self.n, -1), self.p).reshape(vec.shape)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_field(other)
        return ExactMatrix._wrap((self.data + other.data) % self.p, self.field)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_field(other)
        return ExactMatrix._wrap((self.data - other.data) % self.p, self.field)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._wrap((-self.data) % self.p, self.field)

    def scale(self, c: int) -> "ExactMatrix":
        return ExactMatrix._wrap(self.data * (int(c) % self.p) % self.p, self.field)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.field.p, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"ExactMatrix(n={self.n}, p={self.p})\n{self.data}"

    def is_zero(self) -> bool:
        return not self.data.any()

    def commutes_with(self, other: "ExactMatrix") -> bool:
        return self @ other == other @ self

    def power(self, k: int) -> "ExactMatrix":
        if k < 0:
            raise ValueError("negative power")
        result = ExactMatrix.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def flat(self) -> np.ndarray:
        """Row-major flattening, the fixed matrix-as-vector convention."""
        return self.data.reshape(-1)


def rank(m: ExactMatrix) -> int:
    return rank_mod(m.data, m.p)


def nullspace_basis(m: ExactMatrix) -> list[np.ndarray]:
    p = m.p
    r, pivots = row_reduce(m.data, p)
    n_cols = m.data.shape[1]
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(n_cols, dtype=np.int64)
        v[f] = 1
        for row, c in enumerate(pivots):
            v[c] = (-r[row, f]) % p
        basis.append(v)
    return basis


def is_nilpotent(m: ExactMatrix) -> bool:
    """True iff ``m**n == 0``, checked by repeated squaring."""
    power = m
    reached = 1
    while reached < m.n:
        if power.is_zero():
            return True
        power = power @ power
        reached *= 2
    return power.is_zero()


def nilpotency_index(m: ExactMatrix) -> int:
    """Least ``e >= 0`` with ``m**e == 0``."""
    if not is_nilpotent(m):
        raise NotNilpotentError("matrix is not nilpotent")
    if m.n == 0:
        return 0
    e, power = 1, m
    while not power.is_zero():
        power = power @ m
        e += 1
    return e


def power_ranks(m: ExactMatrix) -> list[int]:
    """``[rank(m**0), rank(m**1), ...]`` up to and including the first zero rank."""
    if not is_nilpotent(m):
        raise NotNilpotentError("matrix is not nilpotent")
    ranks = [m.n]
    power = m
    while ranks[-1] > 0:
        ranks.append(rank(power))
        power = power @ m
    return ranks


def jordan_type(m: ExactMatrix) -> Partition:
    """Block sizes of the Jordan form of a nilpotent matrix, from ranks of its powers."""
    ranks = power_ranks(m)
    conj = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    return conjugate(Partition(c for c in conj if c > 0))


def random_invertible(n: int, field: PrimeField, rng: np.random.Generator) -> ExactMatrix:
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        cand = field.random(rng, (n, n))
        if rank_mod(cand, field.p) == n:
            return ExactMatrix._wrap(cand, field)


def inverse(m: ExactMatrix) -> ExactMatrix:
    n, p = m.n, m.p
    aug = np.hstack([m.data, np.eye(n, dtype=np.int64)])
    r, pivots = row_reduce(aug, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return ExactMatrix._wrap(np.ascontiguousarray(r[:, n:]), m.field)
