"""Integer partitions and the combinatorics of the D map.

Parts are always stored weakly decreasing.  Text input accepts a comma list
(``"4,4,3,3,2"``) or caret power notation (``"4^2,3^2,2"``).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class PartitionError(ValueError):
    """Raised for malformed partition text or invalid part sequences."""


class Order(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True, order=False)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...]
    n: int = field(init=False, compare=False)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for pos, p in enumerate(parts):
            if p < 1:
                raise PartitionError(f"part {pos + 1} is {p}; parts must be positive")
            if pos and p > parts[pos - 1]:
                raise PartitionError(
                    f"not weakly decreasing at position {pos + 1}: {parts[pos - 1]} < {p}"
                )
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "n", sum(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"4,4,3,3,2"`` or ``"4^2,3^2,2"``; whitespace is ignored."""
        body = re.sub(r"\s+", "", text).strip("()[]")
        if not body:
            return cls(())
        parts: list[int] = []
        offset = 0
        for token in body.split(","):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", token)
            if m is None:
                raise PartitionError(f"cannot parse {token!r} at character {offset}")
            size = int(m.group(1))
            count = int(m.group(2)) if m.group(2) is not None else 1
            parts.extend([size] * count)
            offset += len(token) + 1
        return cls(parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def __repr__(self) -> str:
        return f"Partition({self.parts})"

    def power_notation(self) -> str:
        """Render as ``4^2,3^2,2``."""
        return ",".join(
            f"{size}^{mult}" if mult > 1 else str(size) for size, mult in self.multiplicities()
        )

    def multiplicities(self) -> list[tuple[int, int]]:
        """Distinct part sizes in decreasing order with their multiplicities."""
        out: list[tuple[int, int]] = []
        for p in self.parts:
            if out and out[-1][0] == p:
                out[-1] = (p, out[-1][1] + 1)
            else:
                out.append((p, 1))
        return out

    def ferrers(self, glyph: str = "*") -> str:
        return "\n".join(glyph * p for p in self.parts)


@dataclass(frozen=True)
class HilbertFunction:
    """Graded dimensions ``(h_0, ..., h_k)`` of a local artinian algebra."""

    values: tuple[int, ...]

    def __init__(self, values: Iterable[int]):
        values = tuple(int(h) for h in values)
        if not values:
            raise ValueError("a Hilbert function has at least h_0")
        if values[0] != 1:
            raise ValueError(f"h_0 must be 1, got {values[0]}")
        if any(h < 1 for h in values):
            raise ValueError(f"all h_i must be positive: {values}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    @property
    def socle_degree(self) -> int:
        return len(self.values) - 1

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.values)) + ")"


@dataclass(frozen=True)
class ARDecomposition:
    """Consecutive blocks of part indices (0-based, half-open) that are almost rectangular."""

    blocks: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.blocks)

    def groups(self, lam: Partition) -> list[tuple[int, ...]]:
        return [lam.parts[a:b] for a, b in self.blocks]


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


def conjugate(lam) -> Partition:
    lam = _as_partition(lam)
    if not lam.parts:
        return Partition(())
    return Partition(sum(1 for p in lam.parts if p >= i) for i in range(1, lam.parts[0] + 1))


def dominance_compare(lam, mu) -> Order:
    """Compare two partitions of the same integer in dominance order."""
    lam, mu = _as_partition(lam), _as_partition(mu)
    if lam.n != mu.n:
        raise PartitionError(f"cannot compare partitions of {lam.n} and {mu.n}")
    le = ge = True
    s_lam = s_mu = 0
    for j in range(max(len(lam), len(mu))):
        s_lam += lam.parts[j] if j < len(lam) else 0
        s_mu += mu.parts[j] if j < len(mu) else 0
        if s_lam > s_mu:
            le = False
        elif s_lam < s_mu:
            ge = False
    if le and ge:
        return Order.EQUAL
    if le:
        return Order.LESS
    if ge:
        return Order.GREATER
    return Order.INCOMPARABLE


def dominates(mu, lam) -> bool:
    """True iff ``lam`` is dominated by (or equal to) ``mu``."""
    return dominance_compare(mu, lam) in (Order.GREATER, Order.EQUAL)


def dominance_max(partitions: Iterable[Partition]) -> Partition | None:
    """The element dominating all others, or None if no such element exists."""
    distinct = list(dict.fromkeys(_as_partition(p) for p in partitions))
    for cand in distinct:
        if all(dominates(cand, other) for other in distinct):
            return cand
    return None


def lambda_of_H(H) -> Partition:
    """Partition whose i-th part counts the entries of ``H`` that are at least i.

    The count runs over the whole sequence including ``h_0``.
    """
    values = H.values if isinstance(H, HilbertFunction) else tuple(H)
    top = max(values, default=0)
    return Partition(sum(1 for h in values if h >= i) for i in range(1, top + 1))


def is_almost_rectangular(lam) -> bool:
    lam = _as_partition(lam)
    if not lam.parts:
        raise PartitionError("the empty partition has no parts")
    return lam.parts[0] - lam.parts[-1] <= 1


def ar_count(lam) -> tuple[int, ARDecomposition]:
    """Minimal number of almost rectangular pieces whose union is ``lam``.

    Greedy over the sorted parts: a new block opens when the current part is
    smaller than the block's largest part minus one.
    """
    lam = _as_partition(lam)
    if not lam.parts:
        raise PartitionError("the empty partition has no parts")
    blocks: list[tuple[int, int]] = []
    start = 0
    for pos in range(1, len(lam) + 1):
        if pos == len(lam) or lam.parts[pos] < lam.parts[start] - 1:
            blocks.append((start, pos))
            start = pos
    decomp = ARDecomposition(tuple(blocks))
    return decomp.count, decomp


def oblak_index(lam, include_last: bool = True) -> int:
    """Maximal nilpotency index over the nilpotent commutator of ``J_lam``.

    Maximises ``2(i-1) + lam_i + ... + lam_{i+r}`` over segments with
    ``lam_i - lam_{i+r} <= 1`` whose predecessor part (if any) is at least 2.
    ``include_last=False`` restricts the start to ``i < l``.
    """
    lam = _as_partition(lam)
    if not lam.parts:
        raise PartitionError("the empty partition has no parts")
    parts = lam.parts
    l = len(parts)
    stop = l if include_last else max(l - 1, 1)
    best = 0
    for i in range(stop):
        if i > 0 and parts[i - 1] < 2:
            continue
        total = 2 * i
        for end in range(i, l):
            if parts[i] - parts[end] > 1:
                break
            total += parts[end]
            best = max(best, total)
    return best


def d_closed_form(lam) -> Partition | None:
    """D(lam) when it has at most two parts, else None."""
    lam = _as_partition(lam)
    r, _ = ar_count(lam)
    if r == 1:
        return Partition((lam.n,))
    if r == 2:
        i = oblak_index(lam)
        return Partition((i, lam.n - i))
    return None


def has_gaps_ge_two(lam) -> bool:
    parts = _as_partition(lam).parts
    return all(a - b >= 2 for a, b in zip(parts, parts[1:]))


def macaulay_admissible(H) -> bool:
    """Whether ``H`` has the Hilbert-function shape of a codimension-two complete intersection.

    That is ``(1, 2, ..., d, h_d, ..., h_k)`` with ``h_d <= d``, every drop in
    the tail at most one, no rise, and ``h_k = 1``.
    """
    values = H.values if isinstance(H, HilbertFunction) else tuple(H)
    if not values or values[0] != 1:
        return False
    d = 1
    while d < len(values) and values[d] == d + 1:
        d += 1
    prev = d  # h_{d-1}
    for h in values[d:]:
        if h > prev or prev - h > 1:
            return False
        prev = h
    return values[-1] == 1


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    for parts in rec(n, n):
        yield Partition(parts)


def as_partition(obj: Partition | str | Sequence[int]) -> Partition:
    if isinstance(obj, Partition):
        return obj
    if isinstance(obj, str):
        return Partition.parse(obj)
    return Partition(obj)
