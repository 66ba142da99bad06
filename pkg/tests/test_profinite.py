"""Prime-set residue towers, their arithmetic, and invertibility verdicts."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarseint.profinite import (
    NonproperWitness,
    PrimeSet,
    QClassifyParams,
    QInvertibilityEvidence,
    QadicApprox,
    classify_prime_profinite,
    compare_profinite,
    covering_spot_check,
    crt_combine,
    floor_div_continuity_check,
    nonproper_witness,
    q_star_members,
    qadic_from_int,
    qadic_inverse_sequence,
    spectrum_profinite,
)
from coarseint.spectra import UndecidedError, Verdict

Q23 = PrimeSet.of(2, 3)
FAST_QPARAMS = QClassifyParams(
    n_max=12, magnitude_threshold=2**20, continuity_pairs=300, covering_sets=5
)
# single-prime towers grow slowly; depth 25 clears the same threshold
DEEP_QPARAMS = QClassifyParams(
    n_max=25, magnitude_threshold=2**20, continuity_pairs=300, covering_sets=5
)


class TestPrimeSet:
    def test_of_sorts_and_deduplicates(self):
        q = PrimeSet.of(3, 2, 3)
        assert q.primes == (2, 3)
        assert q.product == 6
        assert q.label() == "Q={2,3}"

    def test_membership(self):
        assert 2 in Q23 and 3 in Q23
        assert 5 not in Q23

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            PrimeSet(())
        with pytest.raises(ValueError):
            PrimeSet((3, 2))
        with pytest.raises(ValueError):
            PrimeSet.of(4)

    def test_tower_modulus(self):
        assert Q23.tower_modulus(1) == 6
        assert Q23.tower_modulus(3) == 216
        with pytest.raises(ValueError):
            Q23.tower_modulus(0)


class TestQStarMembers:
    def test_two_three_up_to_twenty(self):
        values = [m.value for m in q_star_members(Q23, 20)]
        assert values == [1, 2, 3, 4, 6, 8, 9, 12, 16, 18]

    def test_single_prime(self):
        values = [m.value for m in q_star_members(PrimeSet.of(5), 30)]
        assert values == [1, 5, 25]

    def test_factorizations(self):
        members = {m.value: m.factorization for m in q_star_members(Q23, 20)}
        assert members[1] == ()
        assert members[12] == ((2, 2), (3, 1))
        assert members[18] == ((2, 1), (3, 2))

    def test_rejects_empty_range(self):
        with pytest.raises(ValueError):
            q_star_members(Q23, 0)


class TestQadicApprox:
    def test_componentwise_reduction(self):
        a = qadic_from_int(Q23, (3, 2), 17)
        assert a.residues == (1, 8)
        assert a.modulus == 72
        assert a.crt_value() == 17

    def test_crt_combine(self):
        assert crt_combine([(1, 2), (2, 3)]) == 5
        assert crt_combine([(0, 1)]) == 0
        with pytest.raises(ValueError):
            crt_combine([])

    def test_reduce_is_compatible_with_direct_construction(self):
        full = qadic_from_int(Q23, (5, 4), 7**7)
        assert full.reduce((2, 2)) == qadic_from_int(Q23, (2, 2), 7**7)

    def test_reduce_rejects_raising_precision(self):
        a = qadic_from_int(Q23, (2, 2), 5)
        with pytest.raises(ValueError):
            a.reduce((3, 2))

    def test_residue_validation(self):
        with pytest.raises(ValueError):
            QadicApprox(Q23, (2, 2), (4, 1))
        with pytest.raises(ValueError):
            QadicApprox(Q23, (2,), (1, 1))

    @given(st.integers(min_value=-(10**6), max_value=10**6))
    def test_crt_roundtrip(self, k):
        a = qadic_from_int(Q23, (5, 3), k)
        assert a.crt_value() == k % (2**5 * 3**3)


class TestInverseSequence:
    def test_inverse_of_three_along_powers_of_two(self):
        assert qadic_inverse_sequence(PrimeSet.of(2), 3, 6) == [1, 3, 3, 11, 11, 43]

    def test_inverse_of_two_along_powers_of_three(self):
        assert qadic_inverse_sequence(PrimeSet.of(3), 2, 3) == [2, 5, 14]

    def test_each_term_inverts_mod_its_level(self):
        q = PrimeSet.of(2, 3)
        seq = qadic_inverse_sequence(q, 7, 8)
        for n, a in enumerate(seq, start=1):
            assert (7 * a) % q.tower_modulus(n) == 1

    def test_member_primes_have_no_inverse(self):
        with pytest.raises(ValueError):
            qadic_inverse_sequence(Q23, 3, 5)


class TestNonproperWitness:
    def test_one_third_along_powers_of_two(self):
        w = nonproper_witness(PrimeSet.of(2), 3, 30)
        assert isinstance(w, NonproperWitness)
        assert w.cauchy_ok
        assert w.image_converges_to_one
        assert w.last_change_index is not None
        assert w.distinct_terms >= 3
        # the terms outgrow any fixed bound; the largest at depth 30
        assert w.max_abs == 715827883
        assert w.max_abs > 2**20
        assert w.magnitude_bound_checked == 2**30

    def test_image_terms_are_products(self):
        w = nonproper_witness(Q23, 5, 6)
        assert w.image_terms == tuple(5 * a for a in w.a_terms)


class TestContinuityCheck:
    def test_counts_pairs(self):
        ev = floor_div_continuity_check(PrimeSet.of(2), 2, pairs=500, max_exponent=6)
        assert ev.pairs_checked == 500
        assert ev.max_exponent == 6
        assert all(m % 2 == 0 for m in ev.moduli_used)

    def test_rejects_primes_outside_the_set(self):
        with pytest.raises(ValueError):
            floor_div_continuity_check(PrimeSet.of(2), 3, pairs=10)

    def test_divisibility_identity_by_hand(self):
        # x = y mod p**(n+1) * m forces the floors apart by a multiple
        # of p**n * m; two worked instances
        assert (39 - 7) % 2**5 == 0
        assert (39 // 2 - 7 // 2) % 2**4 == 0
        assert (59 - 5) % (3**3 * 2) == 0
        assert (59 // 3 - 5 // 3) % (3**2 * 2) == 0


class TestCoveringSpotCheck:
    def test_counts_sets_and_elements(self):
        assert covering_spot_check(3, sets=5, set_size=4) == (5, 20)

    def test_rejects_nonprime(self):
        with pytest.raises(ValueError):
            covering_spot_check(6, sets=1, set_size=1)


class TestClassifyPrimeProfinite:
    def test_member_prime_is_invertible(self):
        v = classify_prime_profinite(Q23, 2, FAST_QPARAMS)
        assert v.verdict is Verdict.INVERTIBLE
        ev = v.evidence
        assert isinstance(ev, QInvertibilityEvidence)
        assert ev.continuity.pairs_checked == FAST_QPARAMS.continuity_pairs
        assert ev.covering_sets_checked == FAST_QPARAMS.covering_sets

    def test_outside_prime_is_not_invertible(self):
        v = classify_prime_profinite(Q23, 5, FAST_QPARAMS)
        assert v.verdict is Verdict.NOT_INVERTIBLE
        assert isinstance(v.evidence, NonproperWitness)
        assert v.evidence.max_abs > FAST_QPARAMS.magnitude_threshold

    def test_shallow_tower_stays_undecided(self):
        params = QClassifyParams(n_max=2)
        v = classify_prime_profinite(PrimeSet.of(2), 5, params)
        # the inverse of 5 is 1 mod 2 and mod 4, so nothing moves yet
        assert v.verdict is Verdict.UNDECIDED
        assert v.reason != ""


class TestSpectrumProfinite:
    def test_two_five_space(self):
        q = PrimeSet.of(2, 5)
        rep = spectrum_profinite(q, (2, 3, 5, 7), FAST_QPARAMS)
        assert rep.invertible_primes == (2, 5)
        assert rep.nat_members == (1, 2, 4, 5, 8, 10, 16, 20)
        assert rep.int_members == tuple(sorted(
            set(rep.nat_members) | {-n for n in rep.nat_members}
        ))
        assert rep.fully_decided
        assert rep.label() == "Q={2,5}"

    def test_rejects_empty_prime_list(self):
        with pytest.raises(ValueError):
            spectrum_profinite(Q23, (), FAST_QPARAMS)


class TestCompareProfinite:
    def test_distinct_prime_sets_are_distinguished(self):
        a = spectrum_profinite(PrimeSet.of(2), (2, 3), DEEP_QPARAMS)
        b = spectrum_profinite(PrimeSet.of(3), (2, 3), DEEP_QPARAMS)
        r = compare_profinite(a, b)
        assert r.verdict == "DISTINGUISHED"
        assert r.space_a == "Q={2}" and r.space_b == "Q={3}"
        assert (2, "INVERTIBLE", "NOT_INVERTIBLE") in r.differing

    def test_same_set_is_never_distinguished_from_itself(self):
        a = spectrum_profinite(Q23, (2, 3, 5), FAST_QPARAMS)
        assert compare_profinite(a, a).verdict == "NOT_DISTINGUISHED"

    def test_undecided_side_aborts(self):
        shallow = QClassifyParams(n_max=2)
        a = spectrum_profinite(PrimeSet.of(2), (5,), shallow)
        b = spectrum_profinite(PrimeSet.of(3), (5,), DEEP_QPARAMS)
        with pytest.raises(UndecidedError):
            compare_profinite(a, b)
