import json

import pytest

from nilcomm.commutator import sample_nilpotent_commuting, sample_rng
from nilcomm.dmap import (
    CLOSED_FORM_MISMATCH,
    INCOMPARABLE_MAXIMA,
    _top,
    estimate_D,
    estimate_many,
    max_index_observed,
    verify_partition,
    verify_theorem,
)
from nilcomm.exactmat import PrimeField, nilpotency_index
from nilcomm.partition import Partition, dominates, oblak_index, partitions_of


def P(*parts):
    return Partition(parts)


def test_oblak_index_sampling_oracle():
    # independent route: max nilpotency index over 100 raw samples at a prime above 10^6
    f = PrimeField(1_000_003)
    lam = P(4, 3, 2, 1)
    observed = max(
        nilpotency_index(sample_nilpotent_commuting(lam, f, sample_rng(99, lam, i)))
        for i in range(100)
    )
    assert observed == 7 == oblak_index(lam)


@pytest.mark.parametrize(
    "lam, expected",
    [((4, 4, 3, 3, 2), (14, 2)), ((5, 5, 3, 3, 2), (12, 6)), ((1, 1), (2,)), ((5, 3, 1), (5, 3, 1))],
)
def test_estimate_D_examples(field, lam, expected):
    rep = estimate_D(lam, 20, field)
    assert rep.estimated_D.parts == expected
    assert rep.flags == []
    assert rep.hilbert_max == rep.estimated_D


def test_report_invariants(field):
    for n in range(1, 9):
        for lam in partitions_of(n):
            rep = estimate_D(lam, 8, field, seed=3, with_hilbert=False)
            assert rep.estimated_D.n == n
            assert sum(rep.type_counts.values()) == 8
            for t in rep.type_counts:
                assert dominates(rep.estimated_D, t)
            assert rep.index_observed == rep.estimated_D.parts[0]


@pytest.mark.parametrize("lam, index", [((4, 4, 3, 3, 2), 14), ((7,), 7), ((4, 3, 2, 1), 7)])
def test_max_index_observed_examples(field, lam, index):
    assert max_index_observed(lam, 20, field) == index


def test_max_index_matches_oblak_index_everywhere(field):
    for n in range(1, 11):
        for lam in partitions_of(n):
            assert max_index_observed(lam, 10, field) == oblak_index(lam), lam


def test_top_flags_incomparable():
    best, unique = _top([P(4, 1, 1), P(3, 3), P(2, 2, 2)])
    assert not unique and best == P(4, 1, 1)
    best, unique = _top([P(3, 3), P(2, 2, 2)])
    assert unique and best == P(3, 3)


def test_single_sample_is_allowed(field):
    assert estimate_D((3, 1), 1, field).samples == 1
    with pytest.raises(ValueError):
        estimate_D((3, 1), 0, field)


def test_estimate_is_deterministic(field):
    a = estimate_D((4, 2, 2, 1), 10, field, seed=11).to_dict()
    b = estimate_D((4, 2, 2, 1), 10, field, seed=11).to_dict()
    assert a == b


def test_hilbert_evidence_small(field):
    for n in range(1, 7):
        for lam in partitions_of(n):
            rep = estimate_D(lam, 10, field)
            assert rep.hilbert_max == rep.estimated_D, lam
            assert rep.hilbert_agreement == 10


def test_verify_theorem_trivial(field):
    sweep = verify_theorem(1, 5, field)
    assert len(sweep.reports) == 1
    assert sweep.reports[0].estimated_D == P(1)
    assert sweep.ok


def test_verify_theorem_nine_includes_stable(field):
    sweep = verify_theorem(9, 10, field)
    rep = {r.lam: r for r in sweep.reports}[P(5, 3, 1)]
    assert rep.estimated_D == P(5, 3, 1) and rep.stable
    assert rep.checks["idempotent"] and rep.checks["stable_fixed"]
    assert sweep.ok
    assert all(sweep.summary().values())


def test_verify_partition_paper_example(field):
    rep = verify_partition((4, 4, 3, 3, 2), 20, field)
    assert rep.estimated_D == P(14, 2)
    assert rep.checks == {
        "gaps_ge_two": True,
        "idempotent": True,
        "part_count": True,
        "rank": True,
        "dominates_lambda": True,
        "closed_form": True,
    }


def test_parallel_sweep_matches_serial(field):
    lams = list(partitions_of(7))
    serial = [r.to_dict() for r in estimate_many(lams, 5, field, seed=2, jobs=1)]
    parallel = [r.to_dict() for r in estimate_many(lams, 5, field, seed=2, jobs=2)]
    assert serial == parallel


def test_small_prime_runs(rng):
    # nothing is concluded at small p; the sweep must simply complete and report
    sweep = verify_theorem(5, 10, PrimeField(7), seed=0)
    assert len(sweep.reports) == 7


def test_closed_form_mismatch_is_flagged(field, monkeypatch):
    import nilcomm.dmap as dmap

    monkeypatch.setattr(dmap, "d_closed_form", lambda lam: Partition((lam.n,)))
    rep = dmap.estimate_D((3, 1), 5, field, with_hilbert=False)
    assert CLOSED_FORM_MISMATCH in rep.flags
    assert INCOMPARABLE_MAXIMA not in rep.flags


def test_report_json_round_trip(field):
    rep = estimate_D((3, 2, 1), 5, field)
    data = json.loads(json.dumps(rep.to_dict()))
    assert data["d_estimated"] == [5, 1]
    assert data["prime"] == field.p and data["seed"] == 0 and data["samples"] == 5
    assert data["version"]
