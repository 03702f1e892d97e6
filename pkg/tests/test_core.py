import json

import numpy as np
import pytest

from wfametrics import (
    Wfa,
    difference,
    evaluate,
    reverse,
    wfa_from_dict,
    wfa_to_dict,
    with_final,
    with_initial,
)
from conftest import all_words, random_wfa


def one_state(tau):
    return Wfa(alphabet=("a",), alpha=[1.0], beta=[1.0], trans={"a": [[tau]]})


def eval_oracle(a, word):
    """Independent left-to-right vector propagation."""
    state = np.array(a.alpha)
    for sym in word:
        state = np.array(a.trans[sym]) @ state
    return float(np.array(a.beta) @ state)


class TestEvaluate:
    def test_one_state_growth(self):
        # tau = 1 + 2^-1; the value of a word is tau^len
        a = one_state(1.5)
        assert evaluate(a, "aa") == pytest.approx(2.25, abs=1e-12)

    def test_empty_word_is_alpha_dot_beta(self, rng):
        a = random_wfa(rng)
        assert evaluate(a, ()) == pytest.approx(float(a.beta @ a.alpha), abs=1e-12)

    def test_matches_oracle_on_short_words(self, rng):
        a = random_wfa(rng, n=3)
        for word in all_words(a.alphabet, 4):
            assert evaluate(a, word) == pytest.approx(eval_oracle(a, word), rel=1e-12, abs=1e-12)

    def test_unknown_symbol_named_in_error(self):
        a = one_state(1.0)
        with pytest.raises(ValueError, match="'z'"):
            evaluate(a, ("a", "z"))


class TestReverse:
    def test_involution(self, rng):
        a = random_wfa(rng, n=3)
        rr = reverse(reverse(a))
        for word in all_words(a.alphabet, 4):
            assert evaluate(rr, word) == pytest.approx(evaluate(a, word), abs=1e-12)

    def test_one_letter_alphabet_is_palindromic(self):
        a = one_state(1.5)
        r = reverse(a)
        for k in range(5):
            word = ("a",) * k
            assert evaluate(r, word) == pytest.approx(evaluate(a, word), abs=1e-12)

    def test_reversed_word_evaluation(self, rng):
        a = random_wfa(rng, n=2)
        r = reverse(a)
        assert evaluate(r, ("a", "b")) == pytest.approx(eval_oracle(a, ("b", "a")), abs=1e-12)
        for word in all_words(a.alphabet, 3):
            assert evaluate(r, word) == pytest.approx(eval_oracle(a, word[::-1]), abs=1e-12)


class TestDifference:
    def test_self_difference_is_zero(self, rng):
        a = random_wfa(rng)
        d = difference(a, a)
        for word in all_words(a.alphabet, 4):
            assert abs(evaluate(d, word)) <= 1e-12

    def test_growth_pair(self):
        d = difference(one_state(1.0), one_state(1.5))
        assert evaluate(d, "aa") == pytest.approx(1.0 - 2.25, abs=1e-12)

    def test_random_pair_matches_subtraction(self, rng):
        a1 = random_wfa(rng, n=3)
        a2 = random_wfa(rng, n=2)
        d = difference(a1, a2)
        for _ in range(50):
            word = tuple(rng.choice(a1.alphabet, size=rng.integers(0, 6)))
            expected = eval_oracle(a1, word) - eval_oracle(a2, word)
            assert evaluate(d, word) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_exhaustive_small_dims(self, rng):
        for n1, n2 in [(1, 2), (2, 2), (3, 4)]:
            a1 = random_wfa(rng, n=n1)
            a2 = random_wfa(rng, n=n2)
            d = difference(a1, a2)
            for word in all_words(a1.alphabet, 6):
                expected = eval_oracle(a1, word) - eval_oracle(a2, word)
                assert evaluate(d, word) == pytest.approx(expected, rel=1e-10, abs=1e-10)

    def test_alphabet_mismatch_lists_difference(self, rng):
        a1 = random_wfa(rng, alphabet=("a", "b"))
        a2 = random_wfa(rng, alphabet=("a", "c"))
        with pytest.raises(ValueError, match="b.*c|c.*b"):
            difference(a1, a2)


class TestReplaceWeights:
    def test_with_initial_identity(self, rng):
        a = random_wfa(rng)
        b = with_initial(a, a.alpha)
        for word in all_words(a.alphabet, 3):
            assert evaluate(b, word) == evaluate(a, word)

    def test_with_initial_zero(self, rng):
        a = random_wfa(rng)
        b = with_initial(a, np.zeros(a.dim))
        for word in all_words(a.alphabet, 3):
            assert evaluate(b, word) == 0.0

    def test_with_final_matches_oracle(self, rng):
        a = random_wfa(rng)
        w = rng.standard_normal(a.dim)
        b = with_final(a, w)
        for word in all_words(a.alphabet, 3):
            state = a.alpha
            for sym in word:
                state = a.trans[sym] @ state
            assert evaluate(b, word) == pytest.approx(float(w @ state), abs=1e-12)

    def test_dimension_mismatch(self, rng):
        a = random_wfa(rng, n=3)
        with pytest.raises(ValueError):
            with_initial(a, np.ones(4))
        with pytest.raises(ValueError):
            with_final(a, np.ones(2))

    def test_linearity_of_initial_weights(self, rng):
        a = random_wfa(rng)
        u = rng.standard_normal(a.dim)
        v = rng.standard_normal(a.dim)
        c = 1.7
        combo = with_initial(a, c * u + v)
        for word in all_words(a.alphabet, 3):
            lhs = evaluate(combo, word)
            rhs = c * evaluate(with_initial(a, u), word) + evaluate(with_initial(a, v), word)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


class TestValidationAndJson:
    def test_alphabet_constraints(self):
        with pytest.raises(ValueError):
            Wfa(alphabet=(), alpha=[1.0], beta=[1.0], trans={})
        with pytest.raises(ValueError):
            Wfa(alphabet=("a", "a"), alpha=[1.0], beta=[1.0], trans={"a": [[1.0]]})

    def test_shape_constraints(self):
        with pytest.raises(ValueError):
            Wfa(alphabet=("a",), alpha=[1.0, 2.0], beta=[1.0], trans={"a": [[1.0]]})
        with pytest.raises(ValueError):
            Wfa(alphabet=("a",), alpha=[1.0], beta=[1.0], trans={"a": [[1.0, 0.0]]})
        with pytest.raises(ValueError):
            Wfa(alphabet=("a",), alpha=[1.0], beta=[1.0], trans={"b": [[1.0]]})

    def test_immutable(self, rng):
        a = random_wfa(rng)
        with pytest.raises(ValueError):
            a.alpha[0] = 5.0

    def test_json_round_trip(self, rng, tmp_path):
        a = random_wfa(rng)
        doc = wfa_to_dict(a)
        text = json.dumps(doc)
        b = wfa_from_dict(json.loads(text))
        assert b.alphabet == a.alphabet
        assert np.array_equal(b.alpha, a.alpha)
        assert np.array_equal(b.beta, a.beta)
        for sym in a.alphabet:
            assert np.array_equal(b.trans[sym], a.trans[sym])

    def test_json_missing_field(self):
        with pytest.raises(ValueError, match="alpha"):
            wfa_from_dict({"alphabet": ["a"], "dim": 1, "beta": [1.0], "trans": {"a": [[1.0]]}})

    def test_json_bad_shape(self):
        with pytest.raises(ValueError, match="trans"):
            wfa_from_dict(
                {"alphabet": ["a"], "dim": 2, "alpha": [1.0, 0.0], "beta": [1.0, 0.0],
                 "trans": {"a": [[1.0]]}}
            )
