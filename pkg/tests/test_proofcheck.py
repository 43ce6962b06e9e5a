import itertools
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from plethysm.errors import InvalidInputError, ResourceLimitError
from plethysm.ortho import is_orthogonal
from plethysm.partitions import Partition
from plethysm.tableaux import HorizontalTableau, block_from, enumerate_horizontal
from plethysm.proofcheck import (
    FULL,
    PartialTableau,
    TwoRowContext,
    TypeStat,
    coefficient_c,
    count_extensions,
    enumerate_partials,
    enumerate_restricted_partials,
    extensions,
    left_kernel_trivial,
    mu0,
    orthogonal_to_partial,
    orthogonal_to_partial_bruteforce,
    type_of,
    verify_coefficient_count,
    verify_induction_chain,
    verify_proof,
    zero_filter_identity,
)


def H(text):
    return HorizontalTableau.parse(text)


def PT(n, *cols):
    return PartialTableau(n, tuple(cols))


def double_factorial_odd(m):
    out = 1
    for x in range(m, 0, -2):
        out *= x
    return out


def test_orthogonal_to_partial_examples():
    mu = H("1,2,3|4,5,6")
    assert orthogonal_to_partial(mu, PT(3, (1, 4)))
    assert not orthogonal_to_partial(mu, PT(3, (1, 2)))
    for m in enumerate_horizontal(Partition.rectangle(2, 3)):
        assert orthogonal_to_partial(m, PT(3))


def test_count_extensions_examples():
    mu = H("1,2,3|4,5,6")
    assert count_extensions(mu, PT(3, (1, 4))) == 2
    assert count_extensions(mu, PT(3, (1, 2))) == 0
    for m in enumerate_horizontal(Partition.rectangle(2, 4)):
        assert count_extensions(m, PT(4)) == 24


def test_zero_filter_examples():
    assert zero_filter_identity(3, 1, PT(3, (1, 4)))
    ctx = TwoRowContext(2)
    partials = [PT(2, c) for c in itertools.permutations(range(1, 5), 2) if c[0] != c[1]]
    assert len(partials) == 12
    assert all(zero_filter_identity(2, 1, p, ctx) for p in partials)
    assert zero_filter_identity(4, 2, PT(4, (1, 5), (2, 6)))


def test_type_of_examples():
    assert type_of(mu0(5)) == TypeStat(5, 0, 5)
    assert type_of(H("1,3|2,4")) == TypeStat(1, 1, 2)
    assert type_of(H("1,2,3,5|4,6,7,8")) == TypeStat(3, 1, 4)


def test_type_of_rejects_other_shapes():
    with pytest.raises(InvalidInputError):
        type_of(H("1,2,3|4"))
    with pytest.raises(InvalidInputError):
        type_of(H("1,2|3,4"), reference=[1, 2, 3])


def test_restricted_partials_examples():
    ps = enumerate_restricted_partials(4, 1)
    assert {p.columns for p in ps} == {((a, b),) for a, b in itertools.combinations(range(1, 5), 2)}
    assert [str(p) for p in enumerate_restricted_partials(2, 1)] == ["1,2"]
    assert len(enumerate_restricted_partials(5, 2)) == 15
    with pytest.raises(InvalidInputError):
        enumerate_restricted_partials(5, 3)


@pytest.mark.parametrize("n", range(1, 8))
def test_partial_counts(n):
    for k in range(0, n // 2 + 1):
        ps = enumerate_restricted_partials(n, k)
        assert len(ps) == factorial(n) // (2 ** k * factorial(k) * factorial(n - 2 * k))
        assert len(set(ps)) == len(ps)
        assert all(p.support < (1 << n) for p in ps)
    if n > 5:
        return
    for k in range(0, n):
        ps = enumerate_partials(n, k, FULL)
        assert len(ps) == comb(2 * n, 2 * k) * double_factorial_odd(2 * k - 1)
        assert len(set(ps)) == len(ps)


def test_coefficient_c_examples():
    assert coefficient_c(4, 2, 1) == 4
    assert all(coefficient_c(n, a, 0) == 1 for n in range(1, 9) for a in range(n + 1))
    # 2!4!/(2!0!2!) = 12: one way to pick the pair from the short side, 4*3 partners
    assert coefficient_c(6, 4, 2) == 12
    ps = enumerate_restricted_partials(6, 2)
    assert sum(orthogonal_to_partial(H("1,2,3,4,7,8|5,6,9,10,11,12"), p) for p in ps) == 12
    assert coefficient_c(4, 4, 1) == 0
    assert coefficient_c(4, 2, 3) == 0


def test_pivot_coefficients_are_nonzero_up_to_8():
    for n in range(2, 9):
        for a in range(n - n // 2, n + 1):
            assert coefficient_c(n, a, n - a) != 0


def test_partial_tableau_validation_and_text():
    p = PT(3, (5, 2), (1, 4))
    assert p.columns == ((1, 4), (2, 5)) and p.k == 2
    assert str(p) == "1,4|2,5"
    assert str(PT(3)) == "-"
    for bad in [((1, 1),), ((1, 2), (2, 3)), ((1, 7),), ((1, 2), (3, 4), (5, 6))]:
        with pytest.raises(InvalidInputError):
            PartialTableau(3, bad)


def test_every_partial_is_a_subtableau():
    for n in range(2, 5):
        for k in range(n):
            for p in enumerate_partials(n, k):
                exts = list(extensions(p))
                assert len(exts) == double_factorial_odd(2 * (n - k) - 1)
                assert all(set(p.masks) <= set(v.blocks) for v in exts)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_split_column_rule_equals_existential_definition(n):
    for k in range(n):
        for p in enumerate_partials(n, k):
            for mu in enumerate_horizontal(Partition.rectangle(2, n)):
                assert orthogonal_to_partial(mu, p) == orthogonal_to_partial_bruteforce(mu, p)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_extension_count_is_the_matching_count(n):
    for k in range(n):
        for p in enumerate_partials(n, k):
            for mu in enumerate_horizontal(Partition.rectangle(2, n)):
                expected = factorial(n - k) if orthogonal_to_partial(mu, p) else 0
                assert count_extensions(mu, p) == expected


def _zero_filter_bruteforce(n, p):
    """Column sums over the brute-force family, via the scalar predicate."""
    rows = enumerate_horizontal(Partition.rectangle(2, n))
    fam = list(extensions(p))
    return ([sum(is_orthogonal(mu, nu) for nu in fam) for mu in rows],
            [factorial(n - p.k) * orthogonal_to_partial_bruteforce(mu, p) for mu in rows])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_zero_filter_identity_for_all_full_partials(n):
    ctx = TwoRowContext(n)
    for k in range(1, n):
        for p in enumerate_partials(n, k):
            assert zero_filter_identity(n, k, p, ctx)
    for p in enumerate_partials(n, 1)[:10]:
        lhs, rhs = _zero_filter_bruteforce(n, p)
        assert lhs == rhs


def test_family_matches_bruteforce_extensions():
    ctx = TwoRowContext(3)
    for p in enumerate_partials(3, 1) + enumerate_partials(3, 2):
        assert {ctx.V[j] for j in ctx.family(p)} == set(extensions(p))


@pytest.mark.parametrize("n", range(1, 7))
def test_coefficient_counts(n):
    for k in range(n // 2 + 1):
        assert verify_coefficient_count(n, k)


def test_coefficient_count_vanishes_above_n_minus_k():
    ctx = TwoRowContext(4)
    ps = enumerate_restricted_partials(4, 2)
    assert sum(orthogonal_to_partial(mu0(4), p) for p in ps) == 0
    ctx2 = TwoRowContext(2)
    counts = {str(mu): sum(orthogonal_to_partial(mu, p) for p in enumerate_restricted_partials(2, 1))
              for mu in ctx2.H}
    assert counts == {"1,2|3,4": 0, "1,3|2,4": 1, "1,4|2,3": 1}
    assert all(verify_coefficient_count(4, k, ctx) for k in range(3))


def test_types_under_relabelling():
    n = 4
    rng = np.random.default_rng(7)
    rows = enumerate_horizontal(Partition.rectangle(2, n))
    base = sorted(type_of(mu).a for mu in rows)
    for _ in range(5):
        perm = [0] + list(rng.permutation(range(1, 2 * n + 1)))
        ref = [perm[e] for e in range(1, n + 1)]
        relabelled = [HorizontalTableau(mu.shape, tuple(block_from(perm[e] for e in range(1, 2 * n + 1)
                                                                   if b >> (e - 1) & 1)
                                                        for b in mu.blocks)) for mu in rows]
        assert sorted(type_of(mu, ref).a for mu in relabelled) == base
        for mu, nu in zip(rows, relabelled):
            assert type_of(nu, ref) == type_of(mu)
    # type distribution: C(n,a) C(n,n-a) tableaux of type a, halved when a = b
    for a in range(n - n // 2, n + 1):
        expected = comb(n, a) ** 2 // (2 if a == n - a else 1)
        assert base.count(a) == expected


def test_induction_chain_n2_isolates_mu0():
    rep = verify_induction_chain(2)
    assert rep.passed and rep.isolates_mu0
    assert [(s.a, s.k, s.pivot) for s in rep.steps] == [(1, 1, 1), (2, 0, 1)]
    assert rep.steps[0].coefficients == {1: Fraction(1)}
    assert rep.steps[1].coefficients == {0: Fraction(1), 1: Fraction(-1)}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_induction_chain(n):
    rep = verify_induction_chain(n)
    assert rep.passed
    assert [s.a for s in rep.steps] == list(range(n - n // 2, n + 1))
    assert all(s.pivot != 0 for s in rep.steps)
    assert rep.records()[-1].check == "isolates_mu0"


def test_induction_certificate_lifts_to_a_unit_vector():
    # K x = e_{mu0} for the final step, recomputed here with Fractions
    n = 3
    ctx = TwoRowContext(n)
    coefs = verify_induction_chain(n, ctx).steps[-1].coefficients
    x = [Fraction(0)] * len(ctx.V)
    for k, c in coefs.items():
        for p in enumerate_restricted_partials(n, k):
            for j in ctx.family(p):
                x[j] += c / factorial(n - k)
    y = [sum(Fraction(int(ctx.K[i, j])) * x[j] for j in range(len(x))) for i in range(len(ctx.H))]
    assert y == [Fraction(int(mu == mu0(n))) for mu in ctx.H]


@pytest.mark.parametrize("n", range(1, 6))
def test_left_kernel_trivial(n):
    assert left_kernel_trivial(n).passed


@pytest.mark.parametrize("n", [2, 3, 4])
def test_verify_proof(n):
    rep = verify_proof(n)
    assert rep.passed
    summary = rep.summary()
    assert set(summary) == {"zero_filter_identity", "extension_count", "coefficient_count",
                            "induction_step", "isolates_mu0", "left_kernel_trivial"}
    assert all(s["checked"] == s["passed"] > 0 for s in summary.values())


def test_verify_proof_limits():
    with pytest.raises(ResourceLimitError):
        verify_proof(7)
    with pytest.raises(InvalidInputError):
        verify_proof(1)
    with pytest.raises(ResourceLimitError):
        TwoRowContext(6)
    rep = verify_proof(6)
    assert rep.passed
    assert "zero_filter_identity" not in rep.summary()


def test_records_serialize():
    rec = verify_induction_chain(2).records()[1].to_dict()
    assert rec["check"] == "induction_step"
    assert rec["inputs"]["coefficients"] == {"0": "1", "1": "-1"}
    assert rec["pass"] is True
