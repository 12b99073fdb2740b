"""Sampling estimates of D(lam) and desk-scale checks of its properties."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from . import __version__
from .algebra import hilbert_function
from .commutator import jordan_matrix, sample_nilpotent_commuting, sample_rng
from .exactmat import PrimeField, jordan_type, rank
from .partition import (
    Partition,
    ar_count,
    as_partition,
    d_closed_form,
    dominance_max,
    dominates,
    has_gaps_ge_two,
    lambda_of_H,
    oblak_index,
    partitions_of,
)

DEFAULT_SAMPLES = 20
HILBERT_SAMPLES = 50

INCOMPARABLE_MAXIMA = "incomparable-maxima"
HILBERT_INCOMPARABLE = "hilbert-incomparable-maxima"
HILBERT_MISMATCH = "hilbert-mismatch"
CLOSED_FORM_MISMATCH = "closed-form-mismatch"


def _reverse_lex(parts: Iterable[Partition]) -> list[Partition]:
    return sorted(parts, key=lambda p: p.parts, reverse=True)


def _top(parts: Iterable[Partition]) -> tuple[Partition, bool]:
    """Dominance maximum, or the reverse-lex first maximal element and a failure mark."""
    parts = list(parts)
    best = dominance_max(parts)
    if best is not None:
        return best, True
    maximal = [p for p in set(parts) if not any(q != p and dominates(q, p) for q in parts)]
    return _reverse_lex(maximal)[0], False


@dataclass
class DMapReport:
    lam: Partition
    r: int
    blocks: list[tuple[int, ...]]
    estimated_D: Partition
    closed_form: Partition | None
    oblak_index: int
    index_observed: int
    max_sample_rank: int
    samples: int
    type_counts: dict[Partition, int]
    hilbert_max: Partition | None
    hilbert_agreement: int | None  # samples whose lambda(H) equals their own Jordan type
    prime: int
    seed: int
    flags: list[str] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return self.estimated_D == self.lam

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_dict(self) -> dict:
        return {
            "lambda": list(self.lam.parts),
            "lambda_power": self.lam.power_notation(),
            "n": self.lam.n,
            "r": self.r,
            "ar_blocks": [list(b) for b in self.blocks],
            "oblak_index": self.oblak_index,
            "d_estimated": list(self.estimated_D.parts),
            "d_closed_form": list(self.closed_form.parts) if self.closed_form else None,
            "stable": self.stable,
            "index_observed": self.index_observed,
            "max_sample_rank": self.max_sample_rank,
            "samples": self.samples,
            "sample_types": [
                {"type": list(t.parts), "count": self.type_counts[t]}
                for t in _reverse_lex(self.type_counts)
            ],
            "hilbert_max": list(self.hilbert_max.parts) if self.hilbert_max else None,
            "hilbert_agreement": self.hilbert_agreement,
            "prime": self.prime,
            "seed": self.seed,
            "flags": list(self.flags),
            "checks": dict(self.checks),
            "version": __version__,
        }


def estimate_D(
    lam,
    samples: int = DEFAULT_SAMPLES,
    field: PrimeField | None = None,
    seed: int = 0,
    with_hilbert: bool = True,
) -> DMapReport:
    """Estimate D(lam) as the dominance maximum of sampled Jordan types.

    Sample ``i`` draws from an RNG derived from ``(seed, lam, i)``.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    lam = as_partition(lam)
    field = field or PrimeField()
    b = jordan_matrix(lam, field) if with_hilbert else None
    types: list[Partition] = []
    ranks: list[int] = []
    hilb: list[Partition] = []
    agree = 0
    for i in range(samples):
        a = sample_nilpotent_commuting(lam, field, sample_rng(seed, lam, i))
        jt = jordan_type(a)
        types.append(jt)
        ranks.append(rank(a))
        if with_hilbert:
            lh = lambda_of_H(hilbert_function(a, b))
            hilb.append(lh)
            agree += lh == jt

    flags: list[str] = []
    est, unique = _top(types)
    if not unique:
        flags.append(INCOMPARABLE_MAXIMA)
    hilbert_max = None
    if with_hilbert:
        hilbert_max, unique = _top(hilb)
        if not unique:
            flags.append(HILBERT_INCOMPARABLE)
        if hilbert_max != est:
            flags.append(HILBERT_MISMATCH)

    r, decomp = ar_count(lam)
    closed = d_closed_form(lam)
    if closed is not None and closed != est:
        flags.append(CLOSED_FORM_MISMATCH)
    counts: dict[Partition, int] = {}
    for t in types:
        counts[t] = counts.get(t, 0) + 1
    return DMapReport(
        lam=lam,
        r=r,
        blocks=decomp.groups(lam),
        estimated_D=est,
        closed_form=closed,
        oblak_index=oblak_index(lam),
        index_observed=max(t.parts[0] for t in types),
        max_sample_rank=ranks[types.index(est)],
        samples=samples,
        type_counts=counts,
        hilbert_max=hilbert_max,
        hilbert_agreement=agree if with_hilbert else None,
        prime=field.p,
        seed=seed,
        flags=flags,
    )


def max_index_observed(
    lam, samples: int = DEFAULT_SAMPLES, field: PrimeField | None = None, seed: int = 0
) -> int:
    """Largest nilpotency index among sampled elements of the nilpotent commutator."""
    return estimate_D(lam, samples, field, seed, with_hilbert=False).index_observed


@dataclass
class SweepResult:
    n: int
    reports: list[DMapReport]

    def _all(self, name: str) -> bool:
        return all(rep.checks.get(name, True) for rep in self.reports)

    @property
    def all_gaps_ge2(self) -> bool:
        return self._all("gaps_ge_two")

    @property
    def all_idempotent(self) -> bool:
        return self._all("idempotent")

    @property
    def all_closed_form_agree(self) -> bool:
        return self._all("closed_form")

    @property
    def all_part_counts_equal_r(self) -> bool:
        return self._all("part_count")

    @property
    def all_ranks_equal(self) -> bool:
        return self._all("rank")

    @property
    def all_dominate(self) -> bool:
        return self._all("dominates_lambda")

    @property
    def all_stable_fixed(self) -> bool:
        return self._all("stable_fixed")

    @property
    def failures(self) -> list[tuple[Partition, list[str]]]:
        return [
            (rep.lam, rep.failed_checks + rep.flags)
            for rep in self.reports
            if rep.failed_checks or rep.flags
        ]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict[str, bool]:
        return {
            "all_gaps_ge2": self.all_gaps_ge2,
            "all_idempotent": self.all_idempotent,
            "all_closed_form_agree": self.all_closed_form_agree,
            "all_part_counts_equal_r": self.all_part_counts_equal_r,
            "all_ranks_equal_n_minus_r": self.all_ranks_equal,
            "all_dominate_lambda": self.all_dominate,
            "all_stable_fixed": self.all_stable_fixed,
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "partitions": len(self.reports),
            "summary": self.summary(),
            "ok": self.ok,
            "reports": [rep.to_dict() for rep in self.reports],
            "version": __version__,
        }


def _estimate_job(args) -> DMapReport:
    lam, samples, p, seed, with_hilbert = args
    return estimate_D(lam, samples, PrimeField(p), seed, with_hilbert)


def estimate_many(
    lams: list[Partition],
    samples: int = DEFAULT_SAMPLES,
    field: PrimeField | None = None,
    seed: int = 0,
    jobs: int | None = 1,
    with_hilbert: bool = False,
) -> list[DMapReport]:
    """Run :func:`estimate_D` over many partitions, optionally in worker processes.

    Results come back in input order and do not depend on ``jobs``.
    """
    field = field or PrimeField()
    jobs = jobs or os.cpu_count() or 1
    tasks = [(lam, samples, field.p, seed, with_hilbert) for lam in lams]
    if jobs == 1 or len(tasks) < 2:
        return [_estimate_job(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_estimate_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def check_report(rep: DMapReport, d_of_mu: Partition) -> None:
    """Fill ``rep.checks`` given the estimate of D at ``rep.estimated_D``."""
    mu = rep.estimated_D
    rep.checks["gaps_ge_two"] = has_gaps_ge_two(mu)
    rep.checks["idempotent"] = d_of_mu == mu
    rep.checks["part_count"] = len(mu) == rep.r
    rep.checks["rank"] = rep.lam.n - rep.max_sample_rank == rep.r
    rep.checks["dominates_lambda"] = dominates(mu, rep.lam)
    if rep.closed_form is not None:
        rep.checks["closed_form"] = mu == rep.closed_form
    if has_gaps_ge_two(rep.lam):
        rep.checks["stable_fixed"] = mu == rep.lam


def verify_theorem(
    n: int,
    samples: int = DEFAULT_SAMPLES,
    field: PrimeField | None = None,
    seed: int = 0,
    jobs: int | None = 1,
    with_hilbert: bool = False,
) -> SweepResult:
    """Estimate D over every partition of ``n`` and check its properties.

    Idempotency reuses the sweep's own estimate at D(lam), which is itself a
    partition of ``n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    lams = list(partitions_of(n))
    reports = estimate_many(lams, samples, field, seed, jobs, with_hilbert)
    by_lam = {rep.lam: rep for rep in reports}
    for rep in reports:
        check_report(rep, by_lam[rep.estimated_D].estimated_D)
    return SweepResult(n=n, reports=reports)


def verify_partition(
    lam,
    samples: int = DEFAULT_SAMPLES,
    field: PrimeField | None = None,
    seed: int = 0,
    with_hilbert: bool = True,
) -> DMapReport:
    """Single-partition version of :func:`verify_theorem`."""
    rep = estimate_D(lam, samples, field, seed, with_hilbert)
    mu = rep.estimated_D
    d_of_mu = mu if mu == rep.lam else estimate_D(mu, samples, field, seed, False).estimated_D
    check_report(rep, d_of_mu)
    return rep
