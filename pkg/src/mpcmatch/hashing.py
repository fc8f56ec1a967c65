"""Polynomial rolling hashes over a prime field, plus their distributed setup.

A hash system is a prime modulus ``r``, a seeded base ``b``, and a symbol map
``char_map``.  The hash of a symbol sequence ``s_1..s_L`` is

    h(s) = sum_i char_map(s_i) * b^(L-i)  mod r,

i.e. Horner evaluation left to right.  Two sequences of equal length collide
with probability at most (L-1)/r over the choice of ``b``, so with the default
61-bit Mersenne modulus collisions are never expected at this package's sizes.

The module provides plain-Python scalar operations (setup-time), vectorized
uint64 window hashing for the Mersenne modulus (probe-time hot path), and a
one-round distributed computation of cumulative block hashes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .runtime import MpcContext, exchange, run_round

__all__ = [
    "MERSENNE_61",
    "HashSystem",
    "byte_plus_one",
    "is_probable_prime",
    "make_system",
    "make_system_pair",
    "hash_sequence",
    "prefix_hashes",
    "merge_hashes",
    "substring_hash",
    "power",
    "power_array",
    "mulmod_m61",
    "window_hashes",
    "distributed_prefix_hashes",
]

MERSENNE_61 = (1 << 61) - 1


def byte_plus_one(symbol: int) -> int:
    """Default symbol map: value + 1, so that no symbol maps to 0."""
    return symbol + 1


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for all n < 3.3e24 with these witnesses."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class HashSystem:
    modulus: int = MERSENNE_61
    base: int = 131
    char_map: Callable[[int], int] = byte_plus_one


def make_system(seed: int, modulus: int = MERSENNE_61,
                char_map: Callable[[int], int] = byte_plus_one) -> HashSystem:
    """Hash system with a uniformly seeded base in [2, modulus-2]."""
    if not is_probable_prime(modulus):
        raise ValueError(f"hash modulus must be prime, got {modulus}")
    rng = random.Random(seed)
    base = rng.randrange(2, modulus - 1)
    return HashSystem(modulus=modulus, base=base, char_map=char_map)


def make_system_pair(seed: int, modulus: int = MERSENNE_61,
                     char_map: Callable[[int], int] = byte_plus_one) -> tuple[HashSystem, HashSystem]:
    """Two systems over the same modulus with independent bases (for double hashing)."""
    if not is_probable_prime(modulus):
        raise ValueError(f"hash modulus must be prime, got {modulus}")
    rng = random.Random(seed)
    b1 = rng.randrange(2, modulus - 1)
    b2 = rng.randrange(2, modulus - 1)
    while b2 == b1:
        b2 = rng.randrange(2, modulus - 1)
    return (HashSystem(modulus=modulus, base=b1, char_map=char_map),
            HashSystem(modulus=modulus, base=b2, char_map=char_map))


def hash_sequence(hs: HashSystem, s: Sequence[int] | bytes) -> int:
    """h(s) by Horner's rule; the empty sequence hashes to 0."""
    r, b, cmap = hs.modulus, hs.base, hs.char_map
    h = 0
    for ch in s:
        h = (h * b + cmap(ch)) % r
    return h


def prefix_hashes(hs: HashSystem, s: Sequence[int] | bytes) -> list[int]:
    """[h(s[:0]), h(s[:1]), ..., h(s)] — length len(s)+1, starts with 0."""
    r, b, cmap = hs.modulus, hs.base, hs.char_map
    out = [0] * (len(s) + 1)
    h = 0
    for i, ch in enumerate(s):
        h = (h * b + cmap(ch)) % r
        out[i + 1] = h
    return out


def merge_hashes(hs: HashSystem, h_left: int, h_right: int, right_len: int) -> int:
    """h(uv) from h(u), h(v), |v|:  h(u)*b^|v| + h(v)."""
    return (h_left * pow(hs.base, right_len, hs.modulus) + h_right) % hs.modulus


def substring_hash(hs: HashSystem, prefixes: Sequence[int], i: int, j: int) -> int:
    """h(s[i..j]) for 1-based inclusive i..j, from a prefix-hash array."""
    if j < i:
        return 0
    r = hs.modulus
    return (prefixes[j] - prefixes[i - 1] * pow(hs.base, j - i + 1, r)) % r


def power(hs: HashSystem, k: int) -> int:
    return pow(hs.base, k, hs.modulus)


# -- vectorized Mersenne-61 arithmetic --------------------------------------

_MASK32 = np.uint64(0xFFFFFFFF)
_MASK29 = np.uint64((1 << 29) - 1)
_MASK61 = np.uint64(MERSENNE_61)
_M61 = np.uint64(MERSENNE_61)


def mulmod_m61(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise (a*b) mod 2^61-1 on uint64 arrays with a,b < 2^61.

    Splits both factors into 32-bit limbs; 2^64 = 8 and 2^61 = 1 modulo the
    Mersenne prime keep every partial sum inside uint64.
    """
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    a_hi = a >> np.uint64(32)
    a_lo = a & _MASK32
    b_hi = b >> np.uint64(32)
    b_lo = b & _MASK32
    top = a_hi * b_hi  # < 2^58; contributes *2^64 = *8
    mid = a_hi * b_lo + a_lo * b_hi  # < 2^62; contributes *2^32
    low = a_lo * b_lo  # < 2^64
    acc = (top << np.uint64(3))
    acc += (mid >> np.uint64(29)) + ((mid & _MASK29) << np.uint64(32))
    acc = (acc & _MASK61) + (acc >> np.uint64(61))
    acc += (low >> np.uint64(61)) + (low & _MASK61)
    acc = (acc & _MASK61) + (acc >> np.uint64(61))
    return np.where(acc >= _M61, acc - _M61, acc)


def power_array(hs: HashSystem, count: int) -> np.ndarray:
    """[b^0, b^1, ..., b^(count-1)] mod r as uint64 (doubling concatenation)."""
    if count <= 0:
        return np.zeros(0, dtype=np.uint64)
    r, b = hs.modulus, hs.base
    out = np.empty(count, dtype=np.uint64)
    out[0] = 1
    filled = 1
    while filled < count:
        take = min(filled, count - filled)
        step = np.uint64(pow(b, filled, r))
        if r == MERSENNE_61:
            out[filled:filled + take] = mulmod_m61(out[:take], step)
        else:
            out[filled:filled + take] = (out[:take].astype(object) * int(step) % r).astype(np.uint64)
        filled += take
    return out


def window_hashes(hs: HashSystem, prefixes: np.ndarray, starts: np.ndarray,
                  length: int) -> np.ndarray:
    """Hashes of s[start..start+length-1] for many 1-based starts at once.

    ``prefixes`` is the prefix-hash array as uint64 (index 0 holds 0).  The
    vectorized path requires the Mersenne modulus; other moduli fall back to
    exact Python integers.
    """
    starts = np.asarray(starts, dtype=np.int64)
    r = hs.modulus
    if length <= 0:
        return np.zeros(len(starts), dtype=np.uint64)
    if r == MERSENNE_61:
        bl = np.uint64(pow(hs.base, length, r))
        left = mulmod_m61(prefixes[starts - 1], np.broadcast_to(bl, starts.shape))
        right = prefixes[starts + np.int64(length) - np.int64(1)]
        diff = np.where(right >= left, right - left, right + _M61 - left)
        return np.where(diff >= _M61, diff - _M61, diff)
    bl = pow(hs.base, length, r)
    vals = [(int(prefixes[s + length - 1]) - int(prefixes[s - 1]) * bl) % r for s in starts]
    return np.array(vals, dtype=np.uint64)


# -- distributed setup ------------------------------------------------------


def distributed_prefix_hashes(ctx: MpcContext, hs: HashSystem, slot: str = "input",
                              aggregator: int = 0, out_slot: str = "cumulative_hashes") -> None:
    """Cumulative block-boundary hashes at one machine, in a single round.

    Every machine hashes its own block locally and sends ``(id, hash, len)``
    to the aggregator; after the barrier the aggregator folds them in block
    order into ``state[out_slot]``, a list whose entry i is the hash of the
    concatenation of blocks 0..i.  Each machine also keeps its own
    ``block_hash`` and ``block_len`` slots.
    """

    def _hash_block(mid: int, state: dict, inbox: list):
        block = state.get(slot, b"")
        h = hash_sequence(hs, block)
        state["block_hash"] = h
        state["block_len"] = len(block)
        return state, [(aggregator, (mid, h, len(block)))], len(block)

    run_round(ctx, _hash_block)
    exchange(ctx)

    def _fold(mid: int, state: dict, inbox: list):
        if mid != aggregator:
            return state, []
        parts = sorted(msg.payload for msg in inbox)
        cumulative = []
        running = 0
        for _, h, blen in parts:
            running = merge_hashes(hs, running, h, blen)
            cumulative.append(running)
        state[out_slot] = cumulative
        return state, []

    run_round(ctx, _fold)
