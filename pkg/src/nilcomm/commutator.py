"""Centralizers of nilpotent Jordan matrices and their nilpotent elements.

Basis convention: Jordan blocks are laid out in weakly decreasing size
order, and inside a block of size m the basis vectors ``e_1, ..., e_m`` form
the chain ``B e_k = e_{k+1}``, ``B e_m = 0``.  So ``e_1`` is the top of the
chain and ``J_n`` is the lower shift matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactmat import (
    EchelonSpace,
    ExactMatrix,
    PrimeField,
    inverse,
    is_nilpotent,
    random_invertible,
)
from .partition import Partition, as_partition

REFERENCE_PARTITION = Partition((4, 4, 3, 3, 2, 1, 1))


class CommutationError(ValueError):
    pass


class DeltaSign(enum.Enum):
    AS_WRITTEN = "as-written"  # delta_i = lam_i - lam_{i-1}
    NEGATED = "negated"  # delta_i = lam_{i-1} - lam_i


def sample_rng(seed: int, lam: Partition, index: int, purpose: int = 0) -> np.random.Generator:
    """Independent stream for one (seed, partition, sample index) triple.

    Streams do not depend on evaluation order, so parallel sweeps reproduce
    serial ones exactly.
    """
    key = (purpose, lam.n, len(lam), *lam.parts, index)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def block_offsets(lam: Partition) -> list[int]:
    offsets = [0]
    for part in lam.parts:
        offsets.append(offsets[-1] + part)
    return offsets


def jordan_matrix(lam, field: PrimeField | None = None) -> ExactMatrix:
    lam = as_partition(lam)
    field = field or PrimeField()
    data = np.zeros((lam.n, lam.n), dtype=np.int64)
    for off, part in zip(block_offsets(lam), lam.parts):
        for k in range(part - 1):
            data[off + k + 1, off + k] = 1
    return ExactMatrix(data, field)


def centralizer_dim(lam) -> int:
    parts = as_partition(lam).parts
    return sum(min(a, b) for a in parts for b in parts)


@dataclass(frozen=True)
class _Layout:
    keys: tuple[tuple[int, int, int], ...]  # (a, b, s), 0-based block indices
    positions: np.ndarray  # flat matrix positions
    owners: np.ndarray  # coefficient index for each position
    groups: tuple[tuple[int, ...], ...]  # equal-size block indices
    key_index: dict = field(compare=False)


@lru_cache(maxsize=4096)
def _layout(lam: Partition) -> _Layout:
    parts = lam.parts
    n = lam.n
    offsets = block_offsets(lam)
    keys, positions, owners = [], [], []
    for a, la in enumerate(parts):
        for b, lb in enumerate(parts):
            shift = max(0, la - lb)
            for s in range(min(la, lb)):
                idx = len(keys)
                keys.append((a, b, s))
                # X e^b_k has coefficient c_s on e^a_{k + shift + s}
                for k in range(lb):
                    r = k + shift + s
                    if r >= la:
                        break
                    positions.append((offsets[a] + r) * n + offsets[b] + k)
                    owners.append(idx)
    groups: list[tuple[int, ...]] = []
    for a, part in enumerate(parts):
        if groups and parts[groups[-1][0]] == part:
            groups[-1] = groups[-1] + (a,)
        else:
            groups.append((a,))
    return _Layout(
        keys=tuple(keys),
        positions=np.array(positions, dtype=np.int64),
        owners=np.array(owners, dtype=np.int64),
        groups=tuple(groups),
        key_index={key: i for i, key in enumerate(keys)},
    )


class CentralizerElement:
    """Element of the centralizer of ``J_lam`` given by its Toeplitz coefficients.

    The coefficient ``(a, b, s)`` links block ``b`` to block ``a``: the top
    vector of block ``b`` is sent to ``e^a_{1 + s + max(0, lam_a - lam_b)}``.
    """

    def __init__(self, lam, values, field: PrimeField | None = None):
        self.lam = as_partition(lam)
        self.field = field or PrimeField()
        self._layout = _layout(self.lam)
        values = np.asarray(values, dtype=np.int64) % self.field.p
        if values.shape != (len(self._layout.keys),):
            raise ValueError(
                f"expected {len(self._layout.keys)} coefficients, got shape {values.shape}"
            )
        values.setflags(write=False)
        self.values = values
        self._matrix: ExactMatrix | None = None

    @property
    def keys(self) -> tuple[tuple[int, int, int], ...]:
        return self._layout.keys

    def coefficient(self, a: int, b: int, s: int) -> int:
        return int(self.values[self._layout.key_index[(a, b, s)]])

    def __add__(self, other: "CentralizerElement") -> "CentralizerElement":
        if other.lam != self.lam or other.field != self.field:
            raise ValueError("elements of different centralizers")
        return CentralizerElement(self.lam, self.values + other.values, self.field)

    def group_matrix(self, group: Sequence[int]) -> np.ndarray:
        """Degree-zero coefficients among a group of equal-size blocks."""
        return np.array(
            [[self.coefficient(a, b, 0) for b in group] for a in group], dtype=np.int64
        )

    def matrix(self) -> ExactMatrix:
        if self._matrix is None:
            n = self.lam.n
            flat = np.zeros(n * n, dtype=np.int64)
            flat[self._layout.positions] = self.values[self._layout.owners]
            self._matrix = ExactMatrix._wrap(flat.reshape(n, n), self.field)
        return self._matrix

    def is_nilpotent(self) -> bool:
        return is_nilpotent(self.matrix())


def random_centralizer_element(
    lam, field: PrimeField, rng: np.random.Generator
) -> CentralizerElement:
    lam = as_partition(lam)
    return CentralizerElement(lam, field.random(rng, len(_layout(lam).keys)), field)


def _random_nilpotent(r: int, field: PrimeField, rng: np.random.Generator) -> np.ndarray:
    tri = np.triu(field.random(rng, (r, r)), k=1)
    q = random_invertible(r, field, rng)
    return (q @ ExactMatrix._wrap(tri, field) @ inverse(q)).data


def sample_centralizer_nilpotent(
    lam, field: PrimeField, rng: np.random.Generator
) -> CentralizerElement:
    """Random element of the nilpotent commutator, as coefficients.

    Every coefficient is uniform except the degree-zero coefficients inside
    each group of equal-size blocks; those form an ``r x r`` matrix that is
    replaced by a random conjugate of a strictly upper triangular matrix.
    """
    lam = as_partition(lam)
    layout = _layout(lam)
    values = field.random(rng, len(layout.keys))
    for group in layout.groups:
        g = _random_nilpotent(len(group), field, rng)
        for x, a in enumerate(group):
            for y, b in enumerate(group):
                values[layout.key_index[(a, b, 0)]] = g[x, y]
    elem = CentralizerElement(lam, values, field)
    if not elem.is_nilpotent():
        raise AssertionError(f"sampler produced a non-nilpotent element for {lam}")
    return elem


def sample_nilpotent_commuting(lam, field: PrimeField, rng: np.random.Generator) -> ExactMatrix:
    """A random nilpotent matrix commuting with ``jordan_matrix(lam)``."""
    return sample_centralizer_nilpotent(lam, field, rng).matrix()


# --- cyclic vectors -------------------------------------------------------


@dataclass
class CyclicCertificate:
    vector: np.ndarray
    monomials: list[tuple[int, int]]  # (i, j) for A^i B^j v, in the order found
    images: list[np.ndarray]
    rank: int
    n: int

    @property
    def valid(self) -> bool:
        return self.rank == self.n


def orbit_span(a: ExactMatrix, b: ExactMatrix, v) -> CyclicCertificate:
    """Span of ``{A^i B^j v}`` grown in graded order until it stops growing."""
    n, p = a.n, a.p
    v = np.asarray(v, dtype=np.int64) % p
    space = EchelonSpace(n, p)
    cert = CyclicCertificate(vector=v, monomials=[], images=[], rank=0, n=n)
    frontier = [((0, 0), v)]
    seen = {(0, 0)}
    while frontier and space.rank < n:
        nxt = []
        for (i, j), vec in frontier:
            if not space.add(vec):
                continue
            cert.monomials.append((i, j))
            cert.images.append(vec)
            if space.rank == n:
                break
            for mono, gen in (((i + 1, j), a), ((i, j + 1), b)):
                # commutativity: every monomial is reachable from any predecessor
                if mono not in seen:
                    seen.add(mono)
                    nxt.append((mono, gen @ vec))
        frontier = nxt
    cert.rank = space.rank
    return cert


def is_cyclic(
    generators: tuple[ExactMatrix, ExactMatrix], v
) -> tuple[bool, CyclicCertificate]:
    a, b = generators
    if not a.commutes_with(b):
        raise CommutationError("generators do not commute")
    cert = orbit_span(a, b, v)
    return cert.valid, cert


# --- the explicit construction of C --------------------------------------


def basis_index(lam: Partition) -> dict[tuple[int, int, int], int]:
    """Map the triple ``(i, j, k)`` (1-based, i over distinct sizes) to a coordinate."""
    index = {}
    pos = 0
    for i, (size, mult) in enumerate(lam.multiplicities(), start=1):
        for j in range(1, mult + 1):
            for k in range(1, size + 1):
                index[(i, j, k)] = pos
                pos += 1
    return index


def lemma1_C(
    lam, field: PrimeField | None = None, delta_sign: DeltaSign | str | None = None
) -> tuple[ExactMatrix, np.ndarray, np.ndarray]:
    """The companion matrix ``C`` with cyclic vector ``e_111`` and cocyclic ``e_{1,r_1,lam_1}``.

    ``C e_ijk = e_{i,j+1,k}`` for ``j < r_i`` and
    ``C e_{i,r_i,k} = e_{i+1,1,k} + e_{i-1,1,k+delta_i}``; out-of-range
    targets are zero.  ``delta_sign=None`` uses the convention selected by
    :func:`validated_delta_sign`.
    """
    lam = as_partition(lam)
    field = field or PrimeField()
    if delta_sign is None:
        delta_sign = validated_delta_sign(field)
    delta_sign = DeltaSign(delta_sign)
    mults = lam.multiplicities()
    sizes = [size for size, _ in mults]
    reps = [mult for _, mult in mults]
    idx = basis_index(lam)
    data = np.zeros((lam.n, lam.n), dtype=np.int64)

    def put(target, source):
        if target in idx:
            data[idx[target], idx[source]] += 1

    for i in range(1, len(sizes) + 1):
        for j in range(1, reps[i - 1] + 1):
            for k in range(1, sizes[i - 1] + 1):
                src = (i, j, k)
                if j < reps[i - 1]:
                    put((i, j + 1, k), src)
                    continue
                put((i + 1, 1, k), src)
                if i > 1:
                    delta = sizes[i - 1] - sizes[i - 2]
                    if delta_sign is DeltaSign.NEGATED:
                        delta = -delta
                    put((i - 1, 1, k + delta), src)
    v = np.zeros(lam.n, dtype=np.int64)
    w = np.zeros(lam.n, dtype=np.int64)
    v[idx[(1, 1, 1)]] = 1
    w[idx[(1, reps[0], sizes[0])]] = 1
    return ExactMatrix(data, field), v, w


@dataclass
class Lemma1Report:
    lam: Partition
    delta_sign: DeltaSign
    commutes: bool
    c_nilpotent: bool
    v_cyclic: bool
    w_cocyclic: bool
    pencil_trials: int
    pencil_failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.commutes
            and self.c_nilpotent
            and self.v_cyclic
            and self.w_cocyclic
            and not self.pencil_failures
        )

    def failures(self) -> list[str]:
        out = []
        if not self.commutes:
            out.append("BC != CB")
        if not self.c_nilpotent:
            out.append("C not nilpotent")
        if not self.v_cyclic:
            out.append("e_111 not cyclic for (C, B)")
        if not self.w_cocyclic:
            out.append("e_{1,r_1,lam_1} not cyclic for (C^T, B^T)")
        out.extend(f"pencil not nilpotent: {f}" for f in self.pencil_failures)
        return out

    def to_dict(self) -> dict:
        return {
            "lambda": list(self.lam.parts),
            "delta_sign": self.delta_sign.value,
            "commutes": self.commutes,
            "c_nilpotent": self.c_nilpotent,
            "v_cyclic": self.v_cyclic,
            "w_cocyclic": self.w_cocyclic,
            "pencil_trials": self.pencil_trials,
            "pencil_failures": self.pencil_failures,
            "ok": self.ok,
        }


def random_polynomial_in(b: ExactMatrix, degree: int, rng: np.random.Generator):
    """``q(B)`` with zero constant term and random coefficients up to ``degree``."""
    coeffs = [int(c) for c in b.field.random(rng, degree)]
    acc = ExactMatrix.zeros(b.n, b.field)
    power = b
    for c in coeffs:
        acc = acc + power.scale(c)
        power = power @ b
    return acc, coeffs


def verify_lemma1(
    lam,
    field: PrimeField | None = None,
    pencil_trials: int = 10,
    rng: np.random.Generator | None = None,
    delta_sign: DeltaSign | str | None = None,
) -> Lemma1Report:
    lam = as_partition(lam)
    field = field or PrimeField()
    rng = rng if rng is not None else np.random.default_rng(0)
    if delta_sign is None:
        delta_sign = validated_delta_sign(field)
    delta_sign = DeltaSign(delta_sign)
    b = jordan_matrix(lam, field)
    c, v, w = lemma1_C(lam, field, delta_sign)
    commutes = b.commutes_with(c)
    report = Lemma1Report(
        lam=lam,
        delta_sign=delta_sign,
        commutes=commutes,
        c_nilpotent=is_nilpotent(c),
        # orbit_span directly: a failed commutation is already recorded above
        v_cyclic=orbit_span(c, b, v).valid,
        w_cocyclic=orbit_span(c.T, b.T, w).valid,
        pencil_trials=pencil_trials,
    )
    for _ in range(pencil_trials):
        a, q = random_polynomial_in(b, max(lam.parts[0] - 1, 0), rng)
        alpha, beta = (int(x) for x in field.random(rng, 2))
        pencil = a.scale(alpha) + c.scale(beta)
        if not is_nilpotent(pencil):
            report.pencil_failures.append({"alpha": alpha, "beta": beta, "q": q})
    return report


@lru_cache(maxsize=None)
def validated_delta_sign(field: PrimeField | None = None) -> DeltaSign:
    """Convention for the difference sequence under which the construction works.

    Tries the literal reading first on the seven-block example, then the
    negated one.
    """
    field = field or PrimeField()
    for sign in (DeltaSign.AS_WRITTEN, DeltaSign.NEGATED):
        if verify_lemma1(REFERENCE_PARTITION, field, pencil_trials=3, delta_sign=sign).ok:
            return sign
    raise RuntimeError("neither sign convention yields a valid construction")
