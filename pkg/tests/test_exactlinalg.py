import numpy as np
import pytest

from oracles import rank_mod_p_naive, rational_rank
from plethysm.errors import InvalidInputError, ResourceLimitError
from plethysm.exactlinalg import (
    DEFAULT_PRIMES,
    ArraySource,
    CertPolicy,
    Certification,
    PrimeFieldMatrix,
    RankMethod,
    RankReport,
    certified_rank,
    is_prime,
    matmul_mod,
    rank_exact,
    rank_mod_p,
)
from plethysm.ortho import KRowStream, build_K
from plethysm.partitions import Partition

J_MINUS_I = np.ones((3, 3), dtype=np.uint8) - np.eye(3, dtype=np.uint8)
FIRST_TEN_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def random_01(rng, max_dim, low_rank_every=4):
    """Random 0/1 matrices; every few cases duplicate rows or columns to force deficiency."""
    m, n = rng.integers(1, max_dim + 1, size=2)
    a = (rng.random((m, n)) < rng.uniform(0.2, 0.8)).astype(np.int64)
    if rng.integers(low_rank_every) == 0 and m > 2:
        a[-1] = a[0]
    if rng.integers(low_rank_every) == 0 and n > 2:
        a[:, -1] = a[:, 0]
    return a


def test_rank_mod_p_examples():
    assert rank_mod_p(np.eye(3, dtype=int), 101) == 3
    assert rank_mod_p(J_MINUS_I, 2) == 2
    assert rank_mod_p(J_MINUS_I, 3) == 3


def test_rank_exact_examples():
    assert rank_exact(J_MINUS_I) == 3
    assert rank_exact([[1]]) == 1
    assert rank_exact(build_K(Partition.rectangle(2, 3))) == 10


def test_certified_rank_examples():
    rep = certified_rank(J_MINUS_I, CertPolicy(primes=(2, 2147483647)))
    assert (rep.rank, rep.certification, rep.moduli_used) == (3, Certification.CERTIFIED_FULL, (2, 2147483647))
    rep = certified_rank(KRowStream(Partition.rectangle(2, 4)))
    assert (rep.rank, rep.n_rows, rep.n_cols) == (35, 35, 105)
    assert rep.certification is Certification.CERTIFIED_FULL
    rep = certified_rank(np.zeros((2, 2), dtype=int))
    assert (rep.rank, rep.certification, rep.method) == (0, Certification.CERTIFIED_EXACT, RankMethod.FRACTION_FREE)


def test_certified_rank_falls_back_to_evidence_above_the_exact_cap():
    a = np.ones((4, 4), dtype=int)
    rep = certified_rank(a, CertPolicy(max_exact=3))
    assert (rep.rank, rep.certification) == (1, Certification.MOD_P_EVIDENCE)
    assert rep.moduli_used == DEFAULT_PRIMES
    assert not rep.certified
    rep = certified_rank(a)
    assert (rep.rank, rep.certification) == (1, Certification.CERTIFIED_EXACT)


def test_rank_deficiency_mod_p_is_not_certified_without_exact_arithmetic():
    # rank 2 over GF(2), rank 3 over Q
    rep = certified_rank(J_MINUS_I, CertPolicy(primes=(2,), max_exact=2))
    assert rep.rank == 2 and rep.certification is Certification.MOD_P_EVIDENCE
    rep = certified_rank(J_MINUS_I, CertPolicy(primes=(2,)))
    assert rep.rank == 3 and rep.certification is Certification.CERTIFIED_EXACT


def test_mod_p_is_a_lower_bound_on_random_matrices(rng):
    primes = (2, 3, 5, 2147483647)
    for _ in range(120):
        a = random_01(rng, 50)
        exact = rank_exact(a)
        assert exact == rational_rank(a)
        for p in primes:
            assert rank_mod_p(a, p) <= exact


def test_first_ten_primes_reach_the_exact_rank(rng):
    for _ in range(150):
        a = random_01(rng, 20)
        ranks = [rank_mod_p(a, p) for p in FIRST_TEN_PRIMES]
        assert max(ranks) == rank_exact(a)
        assert ranks == [rank_mod_p_naive(a, p) for p in FIRST_TEN_PRIMES]


def test_mod_p_agrees_with_naive_elimination_on_integer_entries(rng):
    for p in (2147483647, 65537, 7):
        for _ in range(20):
            m, n = rng.integers(1, 30, size=2)
            a = rng.integers(0, p, size=(m, n))
            if m > 3:
                a[-1] = (a[0] * 5 + a[1] * 3) % p
            assert rank_mod_p(a, p) == rank_mod_p_naive(a.tolist(), p)


def test_matmul_mod_is_exact_for_31_bit_moduli(rng):
    p = 2147483629
    x = rng.integers(0, p, size=(17, 40))
    y = rng.integers(0, p, size=(40, 9))
    expected = (x.astype(object) @ y.astype(object)) % p
    assert np.array_equal(matmul_mod(x, y, p).astype(object), expected)


def test_rank_is_invariant_under_permutations(rng):
    for _ in range(30):
        a = random_01(rng, 25)
        r = rank_exact(a)
        b = a[rng.permutation(a.shape[0])][:, rng.permutation(a.shape[1])]
        assert rank_exact(b) == r
        assert rank_mod_p(b, 2147483647) == rank_mod_p(a, 2147483647)


def test_chunk_size_and_streaming_do_not_change_the_rank(rng):
    for _ in range(20):
        a = random_01(rng, 40)
        expected = rank_mod_p(a, 3)
        for chunk in (1, 2, 7, 64):
            assert rank_mod_p(a, 3, chunk=chunk) == expected
        assert rank_mod_p(iter(a.tolist()), 3) == expected
        assert rank_mod_p((row for row in a), 3, chunk=5) == expected


def test_certified_rank_is_deterministic():
    k = build_K(Partition((3, 2, 1)))
    reports = [certified_rank(k) for _ in range(3)] + [certified_rank(KRowStream(Partition((3, 2, 1))))]
    assert len({r for r in reports}) == 1
    assert len({str(r.to_dict(timing=False)) for r in reports}) == 1


def test_rank_report_serialization_and_invariants():
    rep = RankReport(2, 3, 4, Certification.CERTIFIED_EXACT, (), RankMethod.FRACTION_FREE, 1.23456)
    assert rep.to_dict() == {"rank": 2, "rows": 3, "cols": 4, "certification": "CERTIFIED_EXACT",
                             "moduli_used": [], "method": "fraction_free", "elapsed_ms": 1.235}
    assert rep.to_dict(timing=False)["elapsed_ms"] == 0
    with pytest.raises(InvalidInputError):
        RankReport(4, 3, 4, Certification.CERTIFIED_EXACT)
    with pytest.raises(InvalidInputError):
        RankReport(2, 3, 4, Certification.CERTIFIED_FULL)


@pytest.mark.parametrize("p", [1, 4, 2147483646, 2**31 + 11, -7])
def test_bad_moduli(p):
    with pytest.raises(InvalidInputError):
        rank_mod_p(J_MINUS_I, p)
    with pytest.raises(InvalidInputError):
        PrimeFieldMatrix(J_MINUS_I, p)


def test_is_prime_matches_trial_division():
    def slow(n):
        return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))

    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if slow(n)]
    assert all(is_prime(p) for p in DEFAULT_PRIMES)


def test_inconsistent_lengths():
    with pytest.raises(InvalidInputError):
        rank_mod_p([[1, 0], [1, 0, 1]], 5)
    with pytest.raises(InvalidInputError):
        rank_mod_p([[1, 0]] * 40 + [[1, 0, 1]], 5)


def test_exact_cap():
    with pytest.raises(ResourceLimitError):
        rank_exact(np.eye(5, dtype=int), max_dim=4)


def test_prime_field_matrix():
    m = PrimeFieldMatrix([[5, 7], [3, 9]], 2)
    assert m.shape == (2, 2)
    assert m.rows.tolist() == [[1, 1], [1, 1]]
    assert m.rank() == 1
    assert PrimeFieldMatrix(J_MINUS_I, 3).rank() == 3


def test_empty_inputs():
    assert rank_mod_p([], 7) == 0
    assert rank_exact(np.zeros((0, 3))) == 0
    rep = certified_rank(ArraySource(np.zeros((0, 3), dtype=int)))
    assert rep.rank == 0 and rep.certification is Certification.CERTIFIED_FULL


def test_rank_deficient_self_conjugate_shape_is_confirmed_independently():
    from plethysm.ortho import is_orthogonal

    k = build_K(Partition((4, 2, 1, 1)))
    brute = np.array([[int(is_orthogonal(h, v)) for v in k.col_labels] for h in k.row_labels])
    assert np.array_equal(brute, k.to_array())
    assert k.shape == (420, 420)
    assert rational_rank(brute) == rank_exact(brute) == 280
    rep = certified_rank(k)
    assert (rep.rank, rep.certification) == (280, Certification.CERTIFIED_EXACT)
