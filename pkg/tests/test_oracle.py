"""Independent length search and its agreement with the digit formula."""

import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarseint.digits import check_digits, word_length
from coarseint.oracle import (
    GeneratorSet,
    SharedBall,
    default_cap,
    oracle_length,
    validate_formula,
    valid_digit_vectors,
)


class TestGeneratorSet:
    def test_geometric_members_are_powers(self):
        gen = GeneratorSet.geometric(3)
        assert gen.members(30)[:4] == (1, 3, 9, 27)

    def test_explicit_members(self):
        gen = GeneratorSet.explicit((5, 1, 3))
        assert gen.members(100) == (1, 3, 5)

    def test_low_cap_warns(self):
        gen = GeneratorSet.geometric(2, cap=4)
        with pytest.warns(UserWarning):
            gen.members(100)


class TestOracleLength:
    def test_known_witnesses(self):
        r = oracle_length(GeneratorSet.geometric(2), 15)
        assert r.length == 2
        assert sorted(r.witness, key=abs) == [-1, 16]
        r = oracle_length(GeneratorSet.geometric(3), 5)
        assert r.length == 3
        assert sorted(r.witness) == [1, 1, 3]

    def test_zero_needs_no_terms(self):
        r = oracle_length(GeneratorSet.geometric(5), 0)
        assert r.length == 0
        assert r.witness == ()

    @given(g=st.integers(min_value=2, max_value=6), k=st.integers(min_value=-500, max_value=500))
    @settings(max_examples=150, deadline=None)
    def test_witness_soundness(self, g, k):
        gen = GeneratorSet.geometric(g)
        r = oracle_length(gen, k)
        assert r.conclusive
        assert sum(r.witness) == k
        assert len(r.witness) == r.length
        cap = default_cap(g, k)
        for term in r.witness:
            p = 1
            while p < abs(term):
                p *= g
            assert p == abs(term) and abs(term) <= cap

    def test_explicit_set_requires_budget(self):
        gen = GeneratorSet.explicit((1, 3))
        with pytest.raises(ValueError):
            oracle_length(gen, 7)

    def test_explicit_set_can_be_inconclusive(self):
        gen = GeneratorSet.explicit((1, 3))
        r = oracle_length(gen, 7, max_terms=2)
        assert not r.conclusive
        assert r.length is None
        r = oracle_length(gen, 7, max_terms=3)
        assert r.conclusive and r.length == 3

    def test_shared_ball_reuse_matches_fresh_runs(self):
        # a fixed cap keeps the member list identical across the range,
        # which is what sharing one ball requires
        gen = GeneratorSet.geometric(2, cap=default_cap(2, 60))
        ball = SharedBall(gen.members(60))
        for k in range(-60, 61):
            shared = oracle_length(gen, k, ball=ball)
            fresh = oracle_length(gen, k)
            assert shared.length == fresh.length == word_length(2, k)


class TestValidateFormula:
    @pytest.mark.parametrize("g", [2, 3, 6])
    def test_formula_matches_search(self, g):
        v = validate_formula(g, -200, 200)
        assert v.ok
        assert v.checked == 401
        assert v.mismatches == ()
        assert v.inconclusive == ()

    def test_report_carries_search_parameters(self):
        v = validate_formula(2, -20, 20)
        assert v.ball_size > 0
        assert v.generator_cap >= 32
        assert v.max_length == max(word_length(2, k) for k in range(-20, 21))


class TestDigitVectorEnumeration:
    def test_vectors_are_canonical_and_distinct(self):
        seen = {}
        for vec in valid_digit_vectors(2, 8):
            if vec:
                check_digits(2, vec)
            value = sum(d * 2**i for i, d in enumerate(vec))
            assert value not in seen, f"{vec} and {seen[value]} share value {value}"
            seen[value] = vec
        # every representable integer in a safe window appears exactly once
        for k in range(-100, 101):
            assert k in seen

    def test_enumeration_counts_per_position(self):
        # base 3 vectors of up to 3 positions hit [-13, 13] once each
        values = sorted(
            sum(d * 3**i for i, d in enumerate(vec)) for vec in valid_digit_vectors(3, 3)
        )
        assert values == list(range(-13, 14))
