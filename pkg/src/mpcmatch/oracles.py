"""Brute-force reference implementations.

Every distributed algorithm in this package is tested for equality against
one of these.  They deliberately share no machinery with the main code paths:
no hashing, no transforms, no runtime — just direct definitions, as slow and
as obviously correct as possible.
"""

from __future__ import annotations

import re
from typing import Sequence

from .exact_match import MatchSet

__all__ = [
    "naive_exact",
    "naive_question",
    "naive_plus_spans",
    "naive_subset",
    "naive_gtm",
    "naive_star",
    "naive_convolution",
]

QUESTION = 0x3F  # '?'
PLUS = 0x2B  # '+'
STAR = 0x2A  # '*'


def naive_exact(text: bytes, pattern: bytes) -> MatchSet:
    """Position-by-position O(nm) comparison."""
    n, m = len(text), len(pattern)
    out = []
    for s in range(n - m + 1):
        if all(text[s + j] == pattern[j] for j in range(m)):
            out.append(s + 1)
    return MatchSet.of(n, m, out)


def naive_question(text: bytes, pattern: bytes,
                   literal_positions: frozenset[int] = frozenset()) -> MatchSet:
    """O(nm) scan where '?' (except at escaped 1-based positions) matches anything."""
    n, m = len(text), len(pattern)
    wild = [pattern[j] == QUESTION and (j + 1) not in literal_positions for j in range(m)]
    out = []
    for s in range(n - m + 1):
        if all(wild[j] or text[s + j] == pattern[j] for j in range(m)):
            out.append(s + 1)
    return MatchSet.of(n, m, out)


def _plus_regex(pattern: bytes, literal_positions: frozenset[int]) -> re.Pattern:
    """Compile the '+' pattern into a bytes regex for whole-window matching."""
    if not pattern:
        raise ValueError("pattern must be non-empty")
    parts = []
    i = 0
    m = len(pattern)
    while i < m:
        ch = pattern[i]
        if ch == PLUS and (i + 1) not in literal_positions:
            raise ValueError(f"'+' at position {i + 1} follows no repeatable character")
        count = 1
        plus = False
        j = i + 1
        while j < m:
            nxt = pattern[j]
            if nxt == PLUS and (j + 1) not in literal_positions:
                if pattern[j - 1] == PLUS and j not in literal_positions:
                    raise ValueError(f"'+' at position {j + 1} follows another '+'")
                plus = True
                j += 1
            elif nxt == ch:
                count += 1
                j += 1
            else:
                break
        quant = f"{{{count},}}" if plus else f"{{{count}}}"
        parts.append(re.escape(bytes([ch])) + quant.encode())
        i = j
    return re.compile(b"\\A" + b"".join(parts) + b"\\Z")


def naive_plus_spans(text: bytes, pattern: bytes,
                     literal_positions: frozenset[int] = frozenset()) -> set[tuple[int, int]]:
    """All 1-based inclusive (s, e) with text[s..e] matching the '+' pattern.

    Checks every window directly; O(n^2) windows, linear check each.
    """
    rx = _plus_regex(pattern, literal_positions)
    n = len(text)
    out = set()
    for s in range(1, n + 1):
        for e in range(s, n + 1):
            if rx.match(text[s - 1:e]):
                out.add((s, e))
    return out


def naive_subset(T, P) -> MatchSet:
    """Direct subset checks: position i matches iff P[j] ⊆ T[i+j-1] for all j."""
    Ts = [frozenset(x) for x in T]
    Ps = [frozenset(x) for x in P]
    n, m = len(Ts), len(Ps)
    out = []
    for s in range(n - m + 1):
        if all(Ps[j] <= Ts[s + j] for j in range(m)):
            out.append(s + 1)
    return MatchSet.of(n, m, out)


def naive_gtm(T, P) -> MatchSet:
    """Element-wise comparisons: i matches iff T[i+j-1] >= P[j] for all j."""
    n, m = len(T), len(P)
    out = []
    for s in range(n - m + 1):
        if all(T[s + j] >= P[j] for j in range(m)):
            out.append(s + 1)
    return MatchSet.of(n, m, out)


def naive_star(s: bytes, p: bytes,
               literal_positions: frozenset[int] = frozenset()) -> bool:
    """Anchored glob matching by O(nm) table DP.

    True iff s can be split into len(p) possibly-empty pieces where each
    non-'*' pattern position matches its single character and each '*'
    absorbs an arbitrary substring.
    """
    n, m = len(s), len(p)
    star = [p[k] == STAR and (k + 1) not in literal_positions for k in range(m)]
    # row[i] = does s[:i] match p[:k], rolled over pattern positions k
    row = [True] + [False] * n
    for k in range(1, m + 1):
        new = [False] * (n + 1)
        if star[k - 1]:
            new[0] = row[0]
            for i in range(1, n + 1):
                new[i] = new[i - 1] or row[i]
        else:
            for i in range(1, n + 1):
                new[i] = row[i - 1] and s[i - 1] == p[k - 1]
        row = new
    return row[n]


def naive_convolution(a: Sequence, b: Sequence) -> list:
    """Schoolbook linear convolution, exact for Python ints."""
    if len(a) == 0 or len(b) == 0:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out
