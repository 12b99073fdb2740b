"""The unital algebra generated by a commuting pair of nilpotent matrices.

Matrices are treated as vectors through row-major flattening.  The algebra
is spanned by the monomials ``A^a B^b`` and its maximal ideal ``m`` by the
monomials with ``a + b >= 1``; since ``m`` is generated by ``A`` and ``B``,
``m^i`` is exactly the span of the monomials of total degree at least ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .commutator import orbit_span
from .exactmat import EchelonSpace, ExactMatrix, is_nilpotent, rank_mod
from .partition import HilbertFunction, lambda_of_H, macaulay_admissible


class AlgebraError(ValueError):
    """Generators that do not commute or are not nilpotent."""


def _check_pair(a: ExactMatrix, b: ExactMatrix, nilpotent: bool = True) -> None:
    if a.n != b.n or a.field != b.field:
        raise AlgebraError("generators differ in size or field")
    if not a.commutes_with(b):
        raise AlgebraError("generators do not commute")
    if nilpotent and not (is_nilpotent(a) and is_nilpotent(b)):
        raise AlgebraError("generators must be nilpotent")


@dataclass
class MatrixAlgebraBasis:
    n: int
    a: ExactMatrix
    b: ExactMatrix
    elements: list[ExactMatrix]
    monomials: list[tuple[int, int]]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def degrees(self) -> list[int]:
        return [i + j for i, j in self.monomials]


def algebra_basis(a: ExactMatrix, b: ExactMatrix) -> MatrixAlgebraBasis:
    """Monomial basis of ``F[A, B]``, found in graded order."""
    _check_pair(a, b)
    n, p = a.n, a.p
    space = EchelonSpace(n * n, p)
    elements: list[ExactMatrix] = []
    monomials: list[tuple[int, int]] = []
    frontier = [((0, 0), ExactMatrix.identity(n, a.field))]
    seen = {(0, 0)}
    while frontier:
        nxt = []
        for (i, j), mat in frontier:
            if not space.add(mat.flat()):
                continue
            elements.append(mat)
            monomials.append((i, j))
            for mono, gen in (((i + 1, j), a), ((i, j + 1), b)):
                if mono not in seen:
                    seen.add(mono)
                    nxt.append((mono, gen @ mat))
        frontier = nxt
    return MatrixAlgebraBasis(n=n, a=a, b=b, elements=elements, monomials=monomials)


def _powers(m: ExactMatrix) -> list[ExactMatrix]:
    out = [ExactMatrix.identity(m.n, m.field)]
    while True:
        nxt = out[-1] @ m
        if nxt.is_zero():
            return out
        out.append(nxt)


@dataclass
class FiltrationProfile:
    ideal_dims: list[int]  # dim m^i for i = 0..k+1

    @property
    def hilbert(self) -> HilbertFunction:
        d = self.ideal_dims
        return HilbertFunction(d[i] - d[i + 1] for i in range(len(d) - 1))

    @property
    def algebra_dim(self) -> int:
        return self.ideal_dims[0]


def filtration(a: ExactMatrix, b: ExactMatrix) -> FiltrationProfile:
    """Dimensions of the powers of the maximal ideal."""
    _check_pair(a, b)
    pa, pb = _powers(a), _powers(b)
    by_degree: dict[int, list[np.ndarray]] = {}
    for i, ai in enumerate(pa):
        for j, bj in enumerate(pb):
            mono = ai @ bj
            if not mono.is_zero():
                by_degree.setdefault(i + j, []).append(mono.flat())
    top = max(by_degree)
    space = EchelonSpace(a.n * a.n, a.p)
    dims = [0] * (top + 2)
    for deg in range(top, -1, -1):
        for vec in by_degree.get(deg, []):
            space.add(vec)
        dims[deg] = space.rank
    return FiltrationProfile(ideal_dims=dims)


def hilbert_function(a: ExactMatrix, b: ExactMatrix) -> HilbertFunction:
    return filtration(a, b).hilbert


def socle_dim(a: ExactMatrix, b: ExactMatrix, basis: MatrixAlgebraBasis | None = None) -> int:
    """Dimension of ``{z in F[A,B] : zA = zB = 0}``."""
    basis = basis or algebra_basis(a, b)
    cols = [np.concatenate([(z @ a).flat(), (z @ b).flat()]) for z in basis.elements]
    return basis.dim - rank_mod(np.stack(cols, axis=1), a.p)


def is_gorenstein_pair(a: ExactMatrix, b: ExactMatrix) -> bool:
    return socle_dim(a, b) == 1


def find_cyclic_vector(
    a: ExactMatrix, b: ExactMatrix, rng: np.random.Generator | None = None, tries: int = 16
):
    """A certificate for some cyclic vector of ``(A, B)``, or None.

    Tries random vectors first, then the standard basis.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    n = a.n
    candidates = [a.field.random(rng, n) for _ in range(tries)]
    candidates += [np.eye(n, dtype=np.int64)[k] for k in range(n)]
    for v in candidates:
        cert = orbit_span(a, b, v)
        if cert.valid:
            return cert
    return None


def is_cyclic_cocyclic(
    a: ExactMatrix, b: ExactMatrix, rng: np.random.Generator | None = None
) -> tuple[bool, bool]:
    _check_pair(a, b, nilpotent=False)
    rng = rng if rng is not None else np.random.default_rng(0)
    cyclic = find_cyclic_vector(a, b, rng) is not None
    cocyclic = find_cyclic_vector(a.T, b.T, rng) is not None
    return cyclic, cocyclic


@dataclass
class GorensteinReport:
    n: int
    dim: int
    socle: int
    hilbert: HilbertFunction
    cyclic: bool
    cocyclic: bool
    skipped: bool = False
    violations: list[str] = field(default_factory=list)

    @property
    def gorenstein(self) -> bool:
        return self.socle == 1

    @property
    def admissible(self) -> bool:
        return macaulay_admissible(self.hilbert)

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "socle_dim": self.socle,
            "hilbert": list(self.hilbert.values),
            "lambda_of_H": list(lambda_of_H(self.hilbert).parts),
            "cyclic": self.cyclic,
            "cocyclic": self.cocyclic,
            "gorenstein": self.gorenstein,
            "macaulay_admissible": self.admissible,
            "skipped": self.skipped,
            "violations": self.violations,
        }


def gorenstein_consistency(
    a: ExactMatrix, b: ExactMatrix, rng: np.random.Generator | None = None
) -> GorensteinReport:
    """Check that a cyclic and cocyclic pair is Gorenstein with a complete-intersection Hilbert function.

    Pairs whose algebra has dimension below ``n`` are reported as skipped.
    """
    basis = algebra_basis(a, b)
    prof = filtration(a, b)
    H = prof.hilbert
    report = GorensteinReport(
        n=a.n,
        dim=basis.dim,
        socle=socle_dim(a, b, basis),
        hilbert=H,
        cyclic=False,
        cocyclic=False,
    )
    if prof.algebra_dim != basis.dim:
        report.violations.append(
            f"filtration dimension {prof.algebra_dim} != basis dimension {basis.dim}"
        )
    if basis.dim != a.n:
        report.skipped = True
        return report
    report.cyclic, report.cocyclic = is_cyclic_cocyclic(a, b, rng)
    if report.cyclic and report.cocyclic:
        if not report.gorenstein:
            report.violations.append(f"cyclic and cocyclic but socle dimension {report.socle}")
        if not report.admissible:
            report.violations.append(f"cyclic and cocyclic but H={H} is not Macaulay-admissible")
        if H.values[-1] != 1:
            report.violations.append(f"Gorenstein but h_k = {H.values[-1]}")
    return report
