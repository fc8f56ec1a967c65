"""Exact substring matching, sequential and distributed.

Three matchers with one contract (all 1-based start positions):

* :func:`kmp_search` — sequential Knuth-Morris-Pratt, the reference the
  distributed matchers are tested against.
* :func:`match_small_pattern` — for ``m <= S``: every machine receives the
  ``m-1`` characters following its text block plus a copy of the pattern
  ("double covering"), so every candidate window lies wholly inside one
  machine.  Exactly 1 exchange round.
* :func:`match_large_pattern` — for any ``m``: windows are compared by
  polynomial hash, assembled from a suffix of the start machine's block, a
  middle-blocks interval hash from the aggregator, and a prefix hash routed
  from the end machine.  Exactly 3 exchange rounds; correct up to hash
  collisions (probability ~ n*m / 2^61 per run; ``double_hash=True`` squares
  that down).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .hashing import hash_sequence, make_system, make_system_pair, merge_hashes, prefix_hashes
from .runtime import MpcContext, exchange, place_value, run_round, scatter_input

__all__ = [
    "MatchSet",
    "kmp_failure",
    "kmp_search",
    "first_occurrence_at_or_after",
    "match_small_pattern",
    "match_large_pattern",
    "match_exact",
]


@dataclass(frozen=True)
class MatchSet:
    """Occurrences of an m-symbol pattern in an n-symbol text.

    ``positions`` are the sorted, unique 1-based start indices, each in
    [1, n-m+1].  ``precision_flags`` is used only by the float decision mode
    of the '?' matcher: positions whose accept/reject margin was thinner than
    the documented tolerance.
    """

    n: int
    m: int
    positions: tuple[int, ...]
    precision_flags: tuple[int, ...] = field(default=())

    def __post_init__(self):
        pos = self.positions
        if list(pos) != sorted(set(pos)):
            raise ValueError("positions must be sorted and unique")
        if pos and not (1 <= pos[0] and pos[-1] <= self.n - self.m + 1):
            raise ValueError("positions out of range [1, n-m+1]")

    @classmethod
    def of(cls, n: int, m: int, positions, precision_flags=()) -> "MatchSet":
        return cls(n, m, tuple(sorted(set(positions))), tuple(sorted(set(precision_flags))))


def kmp_failure(pattern: bytes) -> list[int]:
    """fail[i] = length of the longest proper border of pattern[:i+1]."""
    fail = [0] * len(pattern)
    k = 0
    for i in range(1, len(pattern)):
        while k and pattern[i] != pattern[k]:
            k = fail[k - 1]
        if pattern[i] == pattern[k]:
            k += 1
        fail[i] = k
    return fail


def kmp_search(text: bytes, pattern: bytes) -> MatchSet:
    """All (overlapping) occurrences in O(n+m)."""
    if len(pattern) == 0:
        raise ValueError("pattern must be non-empty")
    n, m = len(text), len(pattern)
    if m > n:
        return MatchSet.of(n, m, ())
    fail = kmp_failure(pattern)
    out = []
    k = 0
    for i, ch in enumerate(text):
        while k and ch != pattern[k]:
            k = fail[k - 1]
        if ch == pattern[k]:
            k += 1
        if k == m:
            out.append(i - m + 2)  # 1-based start
            k = fail[k - 1]
    return MatchSet.of(n, m, out)


def first_occurrence_at_or_after(matches: MatchSet, pos: int) -> int | None:
    """Smallest start position >= pos, or None."""
    i = bisect.bisect_left(matches.positions, pos)
    return matches.positions[i] if i < len(matches.positions) else None


# -- distributed matchers ---------------------------------------------------


def match_small_pattern(ctx: MpcContext, text: bytes, pattern: bytes) -> MatchSet:
    """Double-covering matcher: 1 exchange round, requires m <= S."""
    n, m = len(text), len(pattern)
    if m == 0:
        raise ValueError("pattern must be non-empty")
    if m > ctx.memory_budget:
        raise ValueError(f"pattern of {m} words exceeds per-machine budget "
                         f"{ctx.memory_budget}; use match_large_pattern")
    num = ctx.machines
    block = -(-n // num) if n else 1
    scatter_input(ctx, text)
    place_value(ctx, num - 1, "pattern", pattern)

    def cover(mid: int, state: dict, inbox: list):
        out = []
        if mid == num - 1:
            p = state["pattern"]
            for dst in range(num):
                out.append((dst, ("P", p)))
        # ship block prefixes leftward so each left machine sees its next m-1 chars
        mine = state["input"]
        lo = mid * block
        for back in range(1, num):
            dst = mid - back
            if dst < 0:
                break
            hi = min(lo + len(mine), dst * block + block + m - 1)
            if hi <= lo:
                break
            out.append((dst, ("T", mine[: hi - lo])))
        return state, out

    run_round(ctx, cover)
    exchange(ctx)

    def scan(mid: int, state: dict, inbox: list):
        pieces = {}
        p = b""
        for msg in inbox:
            tag, payload = msg.payload
            if tag == "P":
                p = payload
            else:
                pieces[msg.src] = payload
        ext = state["input"] + b"".join(pieces[s] for s in sorted(pieces))
        found = []
        if p and len(p) <= len(ext):
            local = kmp_search(ext, p)
            for s in local.positions:
                if s <= len(state["input"]):  # starts inside my block only
                    found.append(mid * block + s)
        state["matches"] = found
        return state, []

    run_round(ctx, scan)

    hits = [s for i in range(num) for s in ctx.states[i]["matches"]]
    return MatchSet.of(n, m, hits)


def match_large_pattern(ctx: MpcContext, text: bytes, pattern: bytes, seed: int = 0,
                        double_hash: bool = False) -> MatchSet:
    """Hash-aggregation matcher: exactly 3 exchange rounds, any pattern size.

    Round 1: block hashes of the text go to aggregator c = M-1 and of the
    pattern to d = M-2; every machine also routes, for each window end in its
    block, the block-prefix hash up to that end to the machine owning the
    window's start.  Round 2: d sends the assembled pattern hash to c; c folds
    text block hashes into cumulative prefixes.  Round 3: c sends each machine
    the pattern hash plus the middle-interval hashes its windows need (window
    ends span at most 2 blocks).  Final local step: assemble window hashes and
    compare.  Windows contained in a single block are hashed locally without
    any routing.
    """
    n, m = len(text), len(pattern)
    if m == 0:
        raise ValueError("pattern must be non-empty")
    if m > n:
        return MatchSet.of(n, m, ())
    systems = list(make_system_pair(seed)) if double_hash else [make_system(seed)]
    ns = len(systems)

    num = ctx.machines
    block = -(-n // num)
    c = num - 1
    d = num - 2 if num >= 2 else 0
    scatter_input(ctx, text)
    scatter_input(ctx, pattern, slot="pattern")

    def hvec(data: bytes) -> tuple:
        return tuple(hash_sequence(hs, data) for hs in systems)

    def round1(mid: int, state: dict, inbox: list):
        mine = state["input"]
        out = [(c, ("T", mid, hvec(mine), len(mine)))]
        pb = state.pop("pattern")
        out.append((d, ("Pb", mid, hvec(pb), len(pb))))
        pres = [prefix_hashes(hs, mine) for hs in systems]
        pows = [[1] * (len(mine) + 1) for _ in systems]
        for si, hs in enumerate(systems):
            for t in range(len(mine)):
                pows[si][t + 1] = pows[si][t] * hs.base % hs.modulus
        state["prefixes"] = pres
        state["pows"] = pows
        lo = mid * block  # my block covers global positions lo+1 .. lo+len
        per_dst: dict[int, list] = {}
        for off in range(1, len(mine) + 1):
            e = lo + off
            s = e - m + 1
            if s < 1:
                continue
            owner = (s - 1) // block
            if owner == mid:
                continue  # window inside one block: compared locally later
            hv = tuple(pres[si][off] for si in range(ns))
            per_dst.setdefault(owner, []).append((e, hv))
        for dst, entries in per_dst.items():
            out.append((dst, ("E", entries)))
        return state, out

    run_round(ctx, round1)
    exchange(ctx)

    def round2(mid: int, state: dict, inbox: list):
        out = []
        end_hashes = {}
        tparts, pparts = [], []
        for msg in inbox:
            tag = msg.payload[0]
            if tag == "T":
                tparts.append(msg.payload[1:])
            elif tag == "Pb":
                pparts.append(msg.payload[1:])
            else:
                for e, hv in msg.payload[1]:
                    end_hashes[e] = hv
        state["end_hashes"] = end_hashes
        if mid == d:
            ph = tuple(0 for _ in systems)
            for _, hv, ln in sorted(pparts):
                ph = tuple(merge_hashes(hs, a, b, ln) for hs, a, b in zip(systems, ph, hv))
            out.append((c, ("PH", ph)))
        if mid == c:
            cum = []
            run = tuple(0 for _ in systems)
            for _, hv, ln in sorted(tparts):
                run = tuple(merge_hashes(hs, a, b, ln) for hs, a, b in zip(systems, run, hv))
                cum.append((run, ln))
            state["cumulative"] = cum
        return state, out

    run_round(ctx, round2)
    exchange(ctx)

    def round3(mid: int, state: dict, inbox: list):
        if mid != c:
            return state, []
        ph = next(msg.payload[1] for msg in inbox if msg.payload[0] == "PH")
        cum = state.pop("cumulative")
        cum_h = [cv[0] for cv in cum]
        blk_len = [cv[1] for cv in cum]
        starts_of = [0]
        for ln in blk_len:
            starts_of.append(starts_of[-1] + ln)

        def interval_hash(a: int, b: int) -> tuple:
            # hash of blocks a..b inclusive (0-based); empty interval -> zeros
            if a > b:
                return tuple(0 for _ in systems)
            length = starts_of[b + 1] - starts_of[a]
            vals = []
            for si, hs in enumerate(systems):
                hi = cum_h[b][si]
                lo = cum_h[a - 1][si] if a >= 1 else 0
                vals.append((hi - lo * pow(hs.base, length, hs.modulus)) % hs.modulus)
            return tuple(vals)

        messages = []
        for i in range(num):
            lo_s = i * block + 1
            hi_s = min((i + 1) * block, n - m + 1)
            if lo_s > hi_s:
                continue
            ks = sorted({(lo_s + m - 2) // block, (hi_s + m - 2) // block})
            assert len(ks) <= 2, "window ends must span at most 2 blocks"
            per_k = [(k, interval_hash(i + 1, k - 1), starts_of[k])
                     for k in ks if k != i]
            messages.append((i, ("C", ph, per_k)))
        return state, messages

    run_round(ctx, round3)
    exchange(ctx)

    def finale(mid: int, state: dict, inbox: list):
        found = []
        mine = state["input"]
        lo = mid * block
        pres = state.pop("prefixes")
        pows = state.pop("pows")
        ends = state.pop("end_hashes")
        for msg in inbox:
            if msg.payload[0] != "C":
                continue
            ph = msg.payload[1]
            # windows fully inside this block: local substring hash
            for off in range(len(mine) - m + 1):
                s = lo + off + 1
                hv = tuple((pres[si][off + m] - pres[si][off] * pows[si][m])
                           % systems[si].modulus for si in range(ns))
                if hv == ph:
                    found.append(s)
            # windows ending in a later block
            for k, inter_h, k_start in msg.payload[2]:
                inter_len = k_start - (lo + len(mine))
                for s in range(lo + 1, min(lo + len(mine), n - m + 1) + 1):
                    e = s + m - 1
                    if (e - 1) // block != k:
                        continue
                    off = s - 1 - lo
                    suffix = tuple(
                        (pres[si][len(mine)] - pres[si][off] * pows[si][len(mine) - off])
                        % systems[si].modulus for si in range(ns))
                    hv = []
                    for si, hs in enumerate(systems):
                        h = merge_hashes(hs, suffix[si], inter_h[si], inter_len)
                        h = merge_hashes(hs, h, ends[e][si], e - k_start)
                        hv.append(h)
                    if tuple(hv) == ph:
                        found.append(s)
        state["matches"] = sorted(set(found))
        return state, []

    run_round(ctx, finale)
    hits = [s for i in range(num) for s in ctx.states[i].get("matches", [])]
    return MatchSet.of(n, m, hits)


def match_exact(ctx: MpcContext, text: bytes, pattern: bytes, seed: int = 0,
                double_hash: bool = False) -> MatchSet:
    """Dispatch: double covering when pattern + overlap comfortably fit one
    machine's budget (broadcast costs ~2m+B receive words), else hashing."""
    n, m = len(text), len(pattern)
    cap = ctx.memory_budget
    block = -(-max(n, 1) // ctx.machines)
    if m <= cap and block + 2 * (m + 1) + ctx.machines <= cap:
        return match_small_pattern(ctx, text, pattern)
    return match_large_pattern(ctx, text, pattern, seed=seed, double_hash=double_hash)
