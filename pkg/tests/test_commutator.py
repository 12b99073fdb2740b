import numpy as np
import pytest

from nilcomm.commutator import (
    REFERENCE_PARTITION,
    CentralizerElement,
    CommutationError,
    DeltaSign,
    basis_index,
    centralizer_dim,
    is_cyclic,
    jordan_matrix,
    lemma1_C,
    random_centralizer_element,
    sample_centralizer_nilpotent,
    sample_nilpotent_commuting,
    sample_rng,
    validated_delta_sign,
    verify_lemma1,
)
from nilcomm.exactmat import ExactMatrix, is_nilpotent, jordan_type, rank, rank_mod
from nilcomm.partition import Partition, ar_count, partitions_of


def commutation_nullity(lam):
    """dim {X : XB = BX} as the nullity of I (x) B - B^T (x) I, in floating point.

    Entries are 0/±1 and sizes tiny, so numpy's SVD rank is exact here.
    """
    b = jordan_matrix(lam).data.astype(float)
    n = b.shape[0]
    op = np.kron(np.eye(n), b) - np.kron(b.T, np.eye(n))
    return n * n - np.linalg.matrix_rank(op)


@pytest.mark.parametrize("lam, dim", [((2, 1), 5), ((5,), 5), ((1, 1), 4)])
def test_centralizer_dim_examples(lam, dim):
    assert centralizer_dim(lam) == dim


def test_centralizer_dim_matches_commutation_operator():
    for n in range(1, 8):
        for lam in partitions_of(n):
            assert centralizer_dim(lam) == commutation_nullity(lam), lam


def test_jordan_matrix_examples(field):
    assert jordan_matrix((2,), field).data.tolist() == [[0, 0], [1, 0]]
    assert jordan_matrix((1, 1, 1), field).is_zero()
    assert jordan_type(jordan_matrix((4, 2, 1), field)).parts == (4, 2, 1)


def test_centralizer_elements_commute(field, rng):
    for n in range(1, 9):
        for lam in partitions_of(n):
            b = jordan_matrix(lam, field)
            x = random_centralizer_element(lam, field, rng)
            assert len(x.keys) == centralizer_dim(lam)
            assert x.matrix().commutes_with(b)


def test_centralizer_realization_is_linear(field, rng):
    for lam in [Partition((3, 2, 2)), Partition((4, 4, 1)), REFERENCE_PARTITION]:
        x = random_centralizer_element(lam, field, rng)
        y = random_centralizer_element(lam, field, rng)
        assert (x + y).matrix() == x.matrix() + y.matrix()


def test_centralizer_realizations_are_independent(field, rng):
    # the coefficient map is injective: the realized basis spans a space of full dimension
    lam = Partition((3, 2, 2, 1))
    k = centralizer_dim(lam)
    rows = []
    for t in range(k):
        vals = np.zeros(k, dtype=np.int64)
        vals[t] = 1
        rows.append(CentralizerElement(lam, vals, field).matrix().flat())
    assert rank_mod(np.stack(rows), field.p) == k


def test_sampled_elements_are_exactly_nilpotent_and_commuting(field):
    for n in range(1, 11):
        for lam in partitions_of(n):
            b = jordan_matrix(lam, field)
            for i in range(3):
                a = sample_nilpotent_commuting(lam, field, sample_rng(7, lam, i))
                assert a.commutes_with(b)
                assert a.power(n).is_zero()


def test_sampler_group_matrices_are_nilpotent(field):
    lam = Partition((3, 3, 3, 1, 1))
    elem = sample_centralizer_nilpotent(lam, field, sample_rng(0, lam, 0))
    for group in [(0, 1, 2), (3, 4)]:
        g = ExactMatrix(elem.group_matrix(group), field)
        assert is_nilpotent(g) and not g.is_zero()


def test_sample_rank_bounded_by_basili(field):
    for n in range(1, 10):
        for lam in partitions_of(n):
            r, _ = ar_count(lam)
            ranks = [
                rank(sample_nilpotent_commuting(lam, field, sample_rng(1, lam, i)))
                for i in range(5)
            ]
            assert max(ranks) == n - r
            assert all(x <= n - r for x in ranks)


def test_sampling_is_deterministic(field):
    lam = Partition((3, 2, 1))
    a1 = sample_nilpotent_commuting(lam, field, sample_rng(5, lam, 3))
    a2 = sample_nilpotent_commuting(lam, field, sample_rng(5, lam, 3))
    a3 = sample_nilpotent_commuting(lam, field, sample_rng(5, lam, 4))
    assert a1 == a2 and a1 != a3


def test_generic_sample_when_b_is_zero(field):
    lam = Partition((1,) * 5)
    types = {jordan_type(sample_nilpotent_commuting(lam, field, sample_rng(0, lam, i))) for i in range(10)}
    assert types == {Partition((5,))}


def test_sample_frequency_for_paper_example(field):
    lam = Partition((4, 4, 3, 3, 2))
    hits = sum(
        jordan_type(sample_nilpotent_commuting(lam, field, sample_rng(0, lam, i))) == Partition((14, 2))
        for i in range(20)
    )
    assert hits >= 19


def test_stable_partition_sample(field):
    lam = Partition((5, 3, 1))
    a = sample_nilpotent_commuting(lam, field, sample_rng(0, lam, 0))
    assert jordan_type(a) == lam


# --- cyclic vectors ----------------------------------------------------------


def test_is_cyclic_regular_nilpotent(field):
    b = jordan_matrix((5,), field)
    zero = ExactMatrix.zeros(5, field)
    top = np.eye(5, dtype=np.int64)[0]
    bottom = np.eye(5, dtype=np.int64)[4]
    ok, cert = is_cyclic((zero, b), top)
    assert ok and cert.rank == 5 and cert.monomials[:2] == [(0, 0), (0, 1)]
    ok, cert = is_cyclic((zero, b), bottom)
    assert not ok and cert.rank == 1


def test_is_cyclic_rejects_noncommuting(field):
    b = jordan_matrix((2,), field)
    with pytest.raises(CommutationError):
        is_cyclic((b, b.T), np.array([1, 0]))


def test_is_cyclic_scaling_invariant(field, rng):
    lam = Partition((3, 2, 1))
    b = jordan_matrix(lam, field)
    c, v, _ = lemma1_C(lam, field)
    for _ in range(5):
        s = int(rng.integers(1, field.p))
        assert is_cyclic((c, b), v * s % field.p)[0]
        w = field.random(rng, lam.n)
        assert is_cyclic((c, b), w)[0] == is_cyclic((c, b), w * s % field.p)[0]


# --- the construction of C --------------------------------------------------


def test_basis_index_layout():
    idx = basis_index(REFERENCE_PARTITION)
    assert idx[(1, 1, 1)] == 0
    assert idx[(1, 2, 4)] == 7
    assert idx[(2, 1, 1)] == 8
    assert idx[(4, 2, 1)] == 17
    assert len(idx) == 18


def test_validated_delta_sign_is_negated(field):
    assert validated_delta_sign(field) is DeltaSign.NEGATED


def test_literal_sign_breaks_commutation(field):
    rep = verify_lemma1(REFERENCE_PARTITION, field, pencil_trials=1, delta_sign="as-written")
    assert not rep.commutes and not rep.ok


def test_reference_partition(field):
    rep = verify_lemma1(REFERENCE_PARTITION, field, pencil_trials=10)
    assert rep.ok, rep.failures()
    _, v, w = lemma1_C(REFERENCE_PARTITION, field)
    idx = basis_index(REFERENCE_PARTITION)
    assert v[idx[(1, 1, 1)]] == 1 and v.sum() == 1
    assert w[idx[(1, 2, 4)]] == 1 and w.sum() == 1


def test_lemma1_single_block(field):
    c, v, w = lemma1_C((6,), field)
    b = jordan_matrix((6,), field)
    assert c.is_zero()
    assert is_cyclic((c, b), v)[0]
    assert is_cyclic((c.T, b.T), w)[0]


def test_lemma1_two_equal_blocks(field):
    c, _, _ = lemma1_C((2, 2), field)
    # e_11k -> e_12k, e_12k -> 0 (no neighbouring size)
    expected = np.zeros((4, 4), dtype=np.int64)
    expected[2, 0] = expected[3, 1] = 1
    assert c.data.tolist() == expected.tolist()
    b = jordan_matrix((2, 2), field)
    assert (b @ c).data.tolist() == (c @ b).data.tolist()


def test_lemma1_two_sizes_explicit(field):
    # lam = (3, 1): C e_{1,1,k} = e_{2,1,k}; C e_{2,1,1} = e_{1,1,1+2}
    c, _, _ = lemma1_C((3, 1), field)
    expected = np.zeros((4, 4), dtype=np.int64)
    expected[3, 0] = 1
    expected[2, 3] = 1
    assert c.data.tolist() == expected.tolist()


def test_lemma1_all_partitions_up_to_ten(field):
    for n in range(1, 11):
        for lam in partitions_of(n):
            rep = verify_lemma1(lam, field, pencil_trials=3, rng=sample_rng(0, lam, 0, purpose=2))
            assert rep.ok, (lam, rep.failures())


def test_lemma1_pencil_degenerate_point(field):
    c, _, _ = lemma1_C(REFERENCE_PARTITION, field)
    assert is_nilpotent(c.scale(0))
