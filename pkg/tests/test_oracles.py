"""Brute-force oracles: worked values plus self-consistency properties."""

import random

import pytest

from mpcmatch.oracles import (
    naive_convolution,
    naive_exact,
    naive_gtm,
    naive_plus_spans,
    naive_question,
    naive_star,
    naive_subset,
)

from helpers import all_strings


# -- exact ------------------------------------------------------------------


def test_exact_abracadabra():
    assert naive_exact(b"abracadabra", b"abra").positions == (1, 8)


def test_exact_self_match():
    assert naive_exact(b"xyz", b"xyz").positions == (1,)


def test_exact_pattern_longer_than_text():
    assert naive_exact(b"ab", b"abc").positions == ()


def test_exact_overlapping():
    assert naive_exact(b"aaaa", b"aa").positions == (1, 2, 3)


# -- question ---------------------------------------------------------------


def test_question_worked_example():
    assert naive_question(b"abracadabra", b"a?a").positions == (4, 6)


def test_question_all_wildcards():
    assert naive_question(b"abcde", b"???").positions == (1, 2, 3)


def test_question_free_equals_exact():
    rng = random.Random(5)
    for _ in range(50):
        t = bytes(rng.choice(b"ab") for _ in range(rng.randrange(1, 12)))
        p = bytes(rng.choice(b"ab") for _ in range(rng.randrange(1, 5)))
        assert naive_question(t, p).positions == naive_exact(t, p).positions


def test_question_escaped_literal():
    # '?' at 1-based position 2 treated as a literal byte
    assert naive_question(b"a?a", b"a?a", frozenset({2})).positions == (1,)
    assert naive_question(b"aba", b"a?a", frozenset({2})).positions == ()


# -- plus -------------------------------------------------------------------


def test_plus_bookkeeper_matches():
    assert naive_plus_spans(b"bookkeeper", b"oo+k+ee+") != set()


def test_plus_bookkeeper_rejects():
    assert naive_plus_spans(b"bookkeeper", b"oo+kee+") == set()


def test_plus_free_degenerates_to_exact():
    t = b"abracadabra"
    p = b"abra"
    assert naive_plus_spans(t, p) == {(i, i + 3) for i in naive_exact(t, p).positions}


def test_plus_simple_span():
    # "ab+" over "abbb": any window starting at an 'a' with >= 1 following b's
    assert naive_plus_spans(b"abbb", b"ab+") == {(1, 2), (1, 3), (1, 4)}


def test_plus_malformed_patterns_rejected():
    with pytest.raises(ValueError):
        naive_plus_spans(b"abc", b"+a")
    with pytest.raises(ValueError):
        naive_plus_spans(b"abc", b"x++")


def test_plus_escaped_literal():
    # '+' at position 2 escaped: pattern is the two literal bytes "a+"
    spans = naive_plus_spans(b"xa+b", b"a+", frozenset({2}))
    assert spans == {(2, 3)}


# -- star -------------------------------------------------------------------


def test_star_matches_everything():
    for s in (b"", b"a", b"abracadabra"):
        assert naive_star(s, b"*")


def test_star_anchored_char_unmatched():
    assert not naive_star(b"", b"a*")


def test_star_worked_example():
    assert naive_star(b"abracadabra", b"abr*ra")
    assert not naive_star(b"abracadabra", b"*aca*z*")


def test_star_free_is_equality():
    assert naive_star(b"abc", b"abc")
    assert not naive_star(b"abc", b"abd")
    assert not naive_star(b"abc", b"ab")


def test_star_anchoring_semantics():
    assert naive_star(b"xxabyy", b"*ab*")
    assert not naive_star(b"xxabyy", b"ab*")
    assert not naive_star(b"xxabyy", b"*ab")
    assert naive_star(b"abyy", b"ab*")


def test_star_escaped_literal():
    assert naive_star(b"a*b", b"a*b", frozenset({2}))
    assert not naive_star(b"axb", b"a*b", frozenset({2}))


def test_star_against_transitive_reference():
    # independent check on every (s, p) pair with fnmatch-style semantics
    import fnmatch

    for n in range(0, 5):
        for s in all_strings(b"ab", n):
            for mlen in range(1, 4):
                for p in all_strings(b"ab*", mlen):
                    expect = fnmatch.fnmatchcase(s.decode(), p.decode())
                    assert naive_star(s, p) == expect, (s, p)


# -- convolution ------------------------------------------------------------


def test_convolution_identity():
    assert naive_convolution([5, 6, 7], [1]) == [5, 6, 7]


def test_convolution_worked():
    assert naive_convolution([1, 2], [3, 4]) == [3, 10, 8]


def test_convolution_zeros():
    assert naive_convolution([0, 0], [9, 9, 9]) == [0] * 4


def test_convolution_commutative():
    rng = random.Random(9)
    a = [rng.randrange(-50, 50) for _ in range(13)]
    b = [rng.randrange(-50, 50) for _ in range(7)]
    assert naive_convolution(a, b) == naive_convolution(b, a)


def test_naive_subset_worked_example():
    T = [{"a", "b"}, {"a"}, {"b", "c"}]
    P = [{"a"}, {"b"}]
    assert naive_subset(T, P).positions == (2,)


def test_naive_subset_empty_pattern_sets_match_everywhere():
    T = [{1}, {2}, {3, 4}]
    P = [set(), set()]
    assert naive_subset(T, P).positions == (1, 2)


def test_naive_gtm_worked_example():
    assert naive_gtm([3, 1, 4, 1, 5], [1, 4]).positions == (2, 4)
    assert naive_gtm([3, 1, 4], [0, 0]).positions == (1, 2)
