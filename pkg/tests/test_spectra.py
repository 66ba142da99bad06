"""Verdicts on multiplication maps and the spectra built from them."""

import pytest

from coarseint.digits import distance
from coarseint.spectra import (
    ClassifyParams,
    ComparisonResult,
    DivergenceEvidence,
    InvertibilityEvidence,
    PairSamples,
    UndecidedError,
    Verdict,
    classify_prime,
    compare_spectra,
    compare_verdicts,
    contraction_certificate,
    mu_apply,
    spectrum,
)

# enough sampling to be meaningful, small enough for unit-test speed
FAST_SAMPLES = PairSamples(exhaustive_radius=40, n_random=50)
FAST_PARAMS = ClassifyParams(i_max=15, threshold=10, samples=FAST_SAMPLES)


class TestMuApply:
    def test_is_plain_multiplication(self):
        assert mu_apply(3, 7) == 21
        assert mu_apply(2, -5) == -10
        assert mu_apply(1, 0) == 0


class TestContractionCertificate:
    def test_counts_every_sampled_pair(self):
        samples = PairSamples(exhaustive_radius=50, n_random=100)
        cert = contraction_certificate(2, samples)
        assert cert.pairs_checked == 101 * 101 + 100
        assert cert.roundtrip_observed <= cert.roundtrip_allowed

    def test_roundtrip_bound_is_residue_length(self):
        # remainders {0..g-1} bound base * (k // g) - k exactly
        cert = contraction_certificate(2, FAST_SAMPLES)
        assert cert.roundtrip_allowed == 1
        # remainder 3 base 6 is the single digit 3, of weight 3
        cert6 = contraction_certificate(6, FAST_SAMPLES)
        assert cert6.roundtrip_allowed == 3

    @pytest.mark.parametrize("g", [2, 3, 6, 10])
    def test_holds_for_several_bases(self, g):
        cert = contraction_certificate(g, FAST_SAMPLES)
        assert cert.base == g
        assert cert.roundtrip_observed <= cert.roundtrip_allowed

    def test_rejects_negative_sampling(self):
        with pytest.raises(ValueError):
            PairSamples(exhaustive_radius=-1)
        with pytest.raises(ValueError):
            PairSamples(n_random=5, random_magnitude=0)

    def test_random_pairs_are_seeded(self):
        a = PairSamples(n_random=20, seed=7).random_pairs()
        b = PairSamples(n_random=20, seed=7).random_pairs()
        assert a == b


class TestClassifyPrime:
    def test_divisor_prime_is_invertible(self):
        v = classify_prime(6, 2, FAST_PARAMS)
        assert v.verdict is Verdict.INVERTIBLE
        assert isinstance(v.evidence, InvertibilityEvidence)
        assert v.evidence.certificate.base == 6
        assert v.evidence.prime_roundtrip_allowed == 1
        assert "closed under division" in v.evidence.closure_note

    def test_coprime_prime_diverges(self):
        v = classify_prime(6, 5, FAST_PARAMS)
        assert v.verdict is Verdict.NOT_INVERTIBLE
        ev = v.evidence
        assert isinstance(ev, DivergenceEvidence)
        assert ev.tail_strictly_increasing
        assert ev.max_length > FAST_PARAMS.threshold
        # the image stays bounded while the witness lengths grow
        assert max(ev.image_lengths) <= 2
        assert ev.lengths[-1] == ev.max_length

    def test_starved_search_stays_undecided(self):
        params = ClassifyParams(i_max=3, threshold=1000, samples=FAST_SAMPLES)
        v = classify_prime(6, 5, params)
        assert v.verdict is Verdict.UNDECIDED
        assert v.reason != ""
        assert "threshold" in v.reason

    def test_certificate_reuse_requires_same_base(self):
        cert2 = contraction_certificate(2, FAST_SAMPLES)
        v = classify_prime(6, 3, FAST_PARAMS, certificate=cert2)
        # a certificate for the wrong base is recomputed, not trusted
        assert isinstance(v.evidence, InvertibilityEvidence)
        assert v.evidence.certificate.base == 6

    def test_rejects_nonprime(self):
        with pytest.raises(ValueError):
            classify_prime(6, 4, FAST_PARAMS)


class TestSpectrum:
    def test_base_six_splits_at_its_divisors(self):
        rep = spectrum(6, (2, 3, 5, 7), FAST_PARAMS)
        assert rep.invertible_primes == (2, 3)
        assert rep.nat_members == (1, 2, 3, 4, 6, 8, 9, 12, 16, 18)
        assert rep.int_members == tuple(sorted(
            set(rep.nat_members) | {-n for n in rep.nat_members}
        ))
        assert rep.rational_generators == (2, 3)
        assert rep.composite_crosscheck_ok
        assert rep.fully_decided
        assert rep.undecided_primes == ()

    def test_no_invertible_primes_leaves_the_unit(self):
        rep = spectrum(2, (3, 5), FAST_PARAMS)
        assert rep.invertible_primes == ()
        assert rep.nat_members == (1,)
        assert rep.int_members == (-1, 1)
        assert rep.composite_crosscheck_ok

    def test_primes_are_sorted_and_deduplicated(self):
        rep = spectrum(6, (5, 2, 5, 3), FAST_PARAMS)
        assert rep.primes == (2, 3, 5)
        assert tuple(v.prime for v in rep.verdicts) == (2, 3, 5)

    def test_rejects_empty_prime_list(self):
        with pytest.raises(ValueError):
            spectrum(6, (), FAST_PARAMS)


class TestComparison:
    def test_bases_two_and_three_are_distinguished(self):
        a = spectrum(2, (2, 3), FAST_PARAMS)
        b = spectrum(3, (2, 3), FAST_PARAMS)
        r = compare_spectra(a, b)
        assert r.verdict == "DISTINGUISHED"
        assert r.common_primes == (2, 3)
        assert (2, "INVERTIBLE", "NOT_INVERTIBLE") in r.differing
        assert (3, "NOT_INVERTIBLE", "INVERTIBLE") in r.differing

    def test_bases_six_and_twelve_are_not_separated(self):
        a = spectrum(6, (2, 3, 5), FAST_PARAMS)
        b = spectrum(12, (2, 3, 5), FAST_PARAMS)
        r = compare_spectra(a, b)
        assert r.verdict == "NOT_DISTINGUISHED"
        assert r.differing == ()
        assert "says nothing" in r.note

    def test_report_never_distinguishes_itself(self):
        a = spectrum(6, (2, 5), FAST_PARAMS)
        assert compare_spectra(a, a).verdict == "NOT_DISTINGUISHED"

    def test_undecided_side_aborts_comparison(self):
        starved = ClassifyParams(i_max=3, threshold=1000, samples=FAST_SAMPLES)
        a = spectrum(6, (5,), starved)
        b = spectrum(10, (5,), FAST_PARAMS)
        with pytest.raises(UndecidedError):
            compare_spectra(a, b)

    def test_disjoint_prime_lists_are_an_error(self):
        a = spectrum(6, (2,), FAST_PARAMS)
        b = spectrum(10, (5,), FAST_PARAMS)
        with pytest.raises(ValueError):
            compare_spectra(a, b)

    def test_labels_carry_the_bases(self):
        a = spectrum(2, (2,), FAST_PARAMS)
        b = spectrum(6, (2,), FAST_PARAMS)
        r = compare_spectra(a, b)
        assert isinstance(r, ComparisonResult)
        assert r.space_a == "g=2" and r.space_b == "g=6"


class TestForwardMap:
    @pytest.mark.parametrize("g", [2, 3, 6])
    def test_multiplying_by_the_base_shifts_digits(self, g):
        # mu_g prepends a zero digit, so it is an isometry onto its image
        for a in range(-40, 41):
            for b in range(-40, 41):
                assert distance(g, g * a, g * b) == distance(g, a, b)
