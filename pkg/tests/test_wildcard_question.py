"""'?' wildcard matcher: worked examples, oracle agreement in both modes,
round counts, and the reciprocal-pair encoding."""

import random

import numpy as np
import pytest

from mpcmatch.oracles import naive_question
from mpcmatch.runtime import metrics
from mpcmatch.wildcard_question import (
    build_symbol_map,
    encode_dagger,
    match_question,
    wildcard_set,
)

from helpers import all_strings, ctx_for, random_bytes


def oracle_positions(text, pattern, literal_positions=frozenset()):
    return naive_question(text, pattern, literal_positions).positions


# -- encoding ---------------------------------------------------------------

def test_encode_dagger_worked_examples():
    smap = build_symbol_map(b"a", b"a?a")
    assert smap == {ord("a"): 1}
    vec = encode_dagger(b"a?a", smap, wild=wildcard_set(b"a?a"))
    assert list(vec) == [1.0, 1.0, 0.0, 0.0, 1.0, 1.0]
    zeros = encode_dagger(b"???", {}, wild=frozenset({1, 2, 3}))
    assert list(zeros) == [0.0] * 6


def test_encode_dagger_reciprocal_pairs():
    smap = {ord("a"): 1, ord("b"): 2, ord("c"): 3}
    vec = encode_dagger(b"cab", smap)
    assert list(vec) == [3.0, 1 / 3, 1.0, 1.0, 2.0, 0.5]


def test_symbol_map_ranks_only_present_symbols():
    smap = build_symbol_map(b"dba", b"d?f", frozenset())
    # 'f' is a live pattern symbol, the '?' is not
    assert smap == {ord("a"): 1, ord("b"): 2, ord("d"): 3, ord("f"): 4}


# -- worked example ---------------------------------------------------------

@pytest.mark.parametrize("mode", ["exact", "float"])
def test_worked_example_abracadabra(mode):
    ctx = ctx_for(11)
    got = match_question(ctx, b"abracadabra", b"a?a", mode=mode)
    assert got.positions == (4, 6)
    assert got.n == 11 and got.m == 3
    rep = metrics(ctx)
    assert rep.rounds == 5
    assert rep.violations == []
    if mode == "float":
        assert got.precision_flags == ()


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_all_wildcard_pattern_matches_everywhere(mode):
    ctx = ctx_for(9)
    got = match_question(ctx, b"abcbabcba", b"???", mode=mode)
    assert got.positions == tuple(range(1, 8))


def test_question_free_pattern_is_plain_exact_match():
    rng = random.Random(101)
    for _ in range(25):
        n = rng.randrange(4, 40)
        text = random_bytes(rng, n, alphabet=b"abc")
        m = rng.randrange(1, 5)
        pattern = random_bytes(rng, m, alphabet=b"abc")
        ctx = ctx_for(n)
        got = match_question(ctx, text, pattern)
        assert got.positions == oracle_positions(text, pattern)


def test_escaped_question_byte_is_literal():
    text = b"x?z x_z"
    # position 2 is an escaped literal '?'; position 0-based idx 1
    ctx = ctx_for(len(text))
    got = match_question(ctx, text, b"x?z", literal_positions=frozenset({2}))
    assert got.positions == (1,)
    ctx = ctx_for(len(text))
    unescaped = match_question(ctx, text, b"x?z")
    assert unescaped.positions == (1, 5)


def test_pattern_longer_than_text_empty():
    ctx = ctx_for(3)
    got = match_question(ctx, b"abc", b"a?ab")
    assert got.positions == ()


def test_rejects_empty_pattern_and_bad_mode():
    ctx = ctx_for(4)
    with pytest.raises(ValueError):
        match_question(ctx, b"abcd", b"")
    with pytest.raises(ValueError):
        match_question(ctx, b"abcd", b"a?", mode="fast")


# -- oracle agreement -------------------------------------------------------

@pytest.mark.parametrize("mode", ["exact", "float"])
def test_exhaustive_small_against_oracle(mode):
    pats = [p for m in (1, 2, 3) for p in all_strings(b"ab?", m)
            if p.count(b"?") <= 2]
    for text in all_strings(b"ab", 5):
        for pattern in pats:
            ctx = ctx_for(5, x=0.3)
            got = match_question(ctx, text, pattern, mode=mode)
            want = oracle_positions(text, pattern)
            assert got.positions == want, (text, pattern, mode)


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_random_medium_against_oracle(mode):
    rng = random.Random(775)
    for trial in range(40):
        n = rng.randrange(16, 200)
        sigma = b"ab" if trial % 2 else b"abcd"
        text = random_bytes(rng, n, alphabet=sigma)
        m = rng.randrange(1, 9)
        pattern = bytearray(random_bytes(rng, m, alphabet=sigma))
        for j in range(m):
            if rng.random() < 0.25:
                pattern[j] = ord("?")
        pattern = bytes(pattern)
        x = rng.choice([0.3, 0.4, 0.5])
        ctx = ctx_for(n, x=x)
        got = match_question(ctx, text, pattern, mode=mode)
        assert got.positions == oracle_positions(text, pattern), (text, pattern, x)
        assert metrics(ctx).rounds == 5


def test_modes_agree_including_flags_on_clean_instances():
    rng = random.Random(31337)
    for _ in range(15):
        n = rng.randrange(20, 120)
        text = random_bytes(rng, n, alphabet=b"abcdefgh")
        pattern = bytearray(random_bytes(rng, 5, alphabet=b"abcdefgh"))
        pattern[2] = ord("?")
        pattern = bytes(pattern)
        c1, c2 = ctx_for(n), ctx_for(n)
        exact = match_question(c1, text, pattern, mode="exact")
        fl = match_question(c2, text, pattern, mode="float")
        assert exact.positions == fl.positions
        assert fl.precision_flags == ()


def test_full_byte_alphabet_exact_mode():
    rng = random.Random(9001)
    text = bytes(rng.randrange(256) for _ in range(300))
    pattern = bytearray(text[100:108])  # planted
    pattern[3] = ord("?")
    ctx = ctx_for(300)
    got = match_question(ctx, text, bytes(pattern))
    assert 101 in got.positions
    assert got.positions == oracle_positions(text, bytes(pattern))


def test_larger_instance_strict_budgets():
    rng = random.Random(555)
    n = 1 << 13
    text = random_bytes(rng, n, alphabet=b"abc")
    pattern = bytearray(text[4096:4096 + 64])
    for j in (5, 40):
        pattern[j] = ord("?")
    ctx = ctx_for(n, x=0.4)
    got = match_question(ctx, text, bytes(pattern))
    rep = metrics(ctx)
    assert rep.rounds == 5 and rep.violations == []
    assert 4097 in got.positions
    assert got.positions == oracle_positions(text, bytes(pattern))
