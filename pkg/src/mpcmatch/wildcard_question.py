"""Single-character wildcard ('?') matching via batched convolutions.

A pattern position matches any text symbol when it holds '?' (unless that
byte is escaped — see ``literal_positions``).  Both modes reduce matching to
a fixed number of linear convolutions and finish in exactly 5 exchange
rounds: 4 for the convolution batch, 1 to route match decisions to the
machines owning the corresponding text blocks.

Exact mode (default) tests ``sum_j p_j t_{i+j} (p_j - t_{i+j})^2 == 0`` with
p_j = 0 at wildcards — three integer convolutions, bit-exact via the
multi-prime number theoretic backend.

Float mode encodes each symbol as the pair (v, 1/v) of a positive weight and
its reciprocal ('?' becomes (0, 0)); the interleaved cross-correlation sums
``u/v + v/u`` per aligned pair, which equals 2 exactly on agreement and
exceeds it by at least ``(u-v)^2/(uv)`` otherwise.  Matches are windows whose
deviation from twice the non-wildcard count stays below a threshold derived
from the smallest such excess; windows too close to the threshold are
reported in ``MatchSet.precision_flags``.
"""

from __future__ import annotations

from typing import FrozenSet

import numpy as np

from .exact_match import MatchSet
from .fft_engine import (
    KERNEL_FLOAT,
    KERNEL_NTT,
    KERNEL_NTT_CRT,
    NTT_PRIMES,
    _split_by,
    collect_convolution_output,
    convolution_rounds,
    register_conv_input,
)
from .runtime import MpcContext, exchange, run_round, scatter_input

__all__ = [
    "QUESTION_BYTE",
    "build_symbol_map",
    "encode_dagger",
    "wildcard_set",
    "match_question",
]

QUESTION_BYTE = 0x3F  # ord("?")

#: windows whose absolute deviation lands this close to the acceptance
#: threshold are flagged as numerically uncertain in float mode
PRECISION_MARGIN = 1e-4


def wildcard_set(pattern: bytes, literal_positions: FrozenSet[int] = frozenset()) -> frozenset:
    """1-based pattern positions acting as wildcards."""
    return frozenset(
        j + 1 for j, ch in enumerate(pattern)
        if ch == QUESTION_BYTE and (j + 1) not in literal_positions)


def build_symbol_map(text: bytes, pattern: bytes,
                     literal_positions: FrozenSet[int] = frozenset()) -> dict:
    """Dense positive weights 1..sigma for every symbol in play.

    Ranking the symbols actually present keeps the weights small, which
    maximizes the worst-case mismatch excess (u-v)^2/(uv) in float mode.
    """
    wild = wildcard_set(pattern, literal_positions)
    present = set(text) | {ch for j, ch in enumerate(pattern) if (j + 1) not in wild}
    return {ch: rank + 1 for rank, ch in enumerate(sorted(present))}


def encode_dagger(seq: bytes, symbol_map: dict,
                  wild: FrozenSet[int] = frozenset()) -> np.ndarray:
    """Interleaved (weight, 1/weight) encoding; wildcard positions -> (0, 0).

    ``wild`` holds 1-based positions.  Length of the result is 2*len(seq).
    """
    out = np.zeros(2 * len(seq), dtype=np.float64)
    for i, ch in enumerate(seq):
        if (i + 1) in wild:
            continue
        v = symbol_map[ch]
        out[2 * i] = v
        out[2 * i + 1] = 1.0 / v
    return out


def _mismatch_gap(weights) -> float:
    """Smallest excess u/v + v/u - 2 over distinct weight pairs."""
    vals = sorted(set(weights))
    best = float("inf")
    for i, u in enumerate(vals):
        for v in vals[i + 1:]:
            best = min(best, (u - v) ** 2 / (u * v))
    return best


def match_question(ctx: MpcContext, text: bytes, pattern: bytes,
                   literal_positions: FrozenSet[int] = frozenset(),
                   mode: str = "exact") -> MatchSet:
    """All alignments of ``pattern`` ('?' = wildcard) in ``text``; 5 rounds."""
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    n, m = len(text), len(pattern)
    if m < 1:
        raise ValueError("pattern must be non-empty")
    if n < 1:
        raise ValueError("text must be non-empty")
    if m > n:
        return MatchSet(n=n, m=m, positions=())
    wild = wildcard_set(pattern, literal_positions)
    nz = m - len(wild)
    grid = ctx.machines
    tblock = -(-n // grid)
    pblock = -(-m // grid)
    scatter_input(ctx, text, slot="q_text")
    scatter_input(ctx, pattern, slot="q_pat")

    symbol_map = build_symbol_map(text, pattern, literal_positions)
    if mode == "exact":
        out_len = n + m - 1
        # matches are zeros of sum_j w_j (t_{i+j} - p_j)^2 with w_j = 0 at
        # wildcards; the expansion needs conv(t^2, w) and conv(t, w*p), the
        # remaining sum_j w_j p_j^2 term is alignment-independent.  Every
        # convolution coefficient is at most m * w_max^2; one prime suffices
        # when that fits, else exact CRT over three primes.
        bound = m * max(symbol_map.values()) ** 2
        kernel = KERNEL_NTT if bound < NTT_PRIMES[0] else KERNEL_NTT_CRT
        pat_const = sum(symbol_map[ch] ** 2 for j, ch in enumerate(pattern)
                        if (j + 1) not in wild)
    else:
        kernel = KERNEL_FLOAT
        out_len = 2 * n + 2 * m - 1
        if len(symbol_map) > 256:
            raise ValueError("float mode supports at most 256 distinct symbols")
        gap = _mismatch_gap(symbol_map.values()) if len(symbol_map) > 1 else float("inf")
        threshold = min(0.25, gap / 2)

    lut = np.zeros(256, dtype=np.uint64)
    for ch, w in symbol_map.items():
        lut[ch] = w
    live = np.ones(m, dtype=bool)  # non-wildcard pattern positions, 0-based
    for j in wild:
        live[j - 1] = False

    def prepare(mid: int, state: dict, inbox: list):
        tpiece = state.pop("q_text")
        ppiece = state.pop("q_pat")
        if mode == "exact":
            if len(tpiece):
                t = lut[np.frombuffer(tpiece, dtype=np.uint8)]
                idx = mid * tblock + np.arange(len(t))
                register_conv_input(state, "A", "q1", idx, t)
                register_conv_input(state, "A", "q2", idx, t * t)
            if len(ppiece):
                p = lut[np.frombuffer(ppiece, dtype=np.uint8)]
                jg = mid * pblock + np.arange(len(p))  # global 0-based pattern pos
                keep = live[jg]
                if keep.any():
                    p, jg = p[keep], jg[keep]
                    ridx = (m - 1) - jg
                    register_conv_input(state, "B", "q1", ridx, p)
                    register_conv_input(state, "B", "q2", ridx, np.ones(len(p), dtype=np.uint64))
        else:
            if len(tpiece):
                vec = encode_dagger(tpiece, symbol_map)
                base = 2 * mid * tblock
                register_conv_input(state, "A", "dg", base + np.arange(len(vec)), vec)
            if len(ppiece):
                jg0 = mid * pblock
                local_wild = frozenset(
                    j - jg0 for j in range(jg0 + 1, jg0 + len(ppiece) + 1) if j in wild)
                vec = encode_dagger(ppiece, symbol_map, wild=local_wild)
                pairs = vec.reshape(-1, 2)
                jg = jg0 + np.arange(len(pairs))
                ridx = 2 * ((m - 1) - jg)  # group-reversed base index
                idx = np.stack([ridx, ridx + 1], axis=1).ravel()
                keepv = pairs.ravel()
                nzmask = np.repeat(pairs[:, 0] > 0, 2)
                if nzmask.any():
                    register_conv_input(state, "B", "dg", idx[nzmask], keepv[nzmask])

    da = out_len  # registration already spans the full output index range
    layout = convolution_rounds(ctx, kernel, da, 1, prepare=prepare)

    def decide(mid: int, state: dict, inbox: list):
        lo, hi, rows = collect_convolution_output(layout, mid, inbox)
        if mode == "exact":
            ks = np.arange(lo, hi)
            starts0 = ks - (m - 1)
            valid = (starts0 >= 0) & (starts0 <= n - m)
            q1 = rows.get("q1", np.zeros(hi - lo, dtype=np.uint64)).astype(np.int64)
            q2 = rows.get("q2", np.zeros(hi - lo, dtype=np.uint64)).astype(np.int64)
            dev = q2 - 2 * q1 + pat_const
            hit = valid & (dev == 0)
            starts1 = starts0[hit] + 1
            flags1 = np.zeros(0, dtype=np.int64)
        else:
            ks = np.arange(lo, hi)
            # window i (0-based) reads the correlation at 2i + 2m - 1
            num = ks - (2 * m - 1)
            valid = (num >= 0) & (num % 2 == 0)
            starts0 = num // 2
            valid &= (starts0 >= 0) & (starts0 <= n - m)
            dg = rows.get("dg", np.zeros(hi - lo, dtype=np.complex128))
            dev = np.abs(dg.real - 2.0 * nz)
            hit = valid & (dev <= threshold)
            near = valid & (np.abs(dev - threshold) < PRECISION_MARGIN)
            starts1 = starts0[hit] + 1
            flags1 = starts0[near] + 1
        out: dict[int, list] = {}
        for arr, tag in ((starts1, "M"), (flags1, "F")):
            for dst, sel in _split_by((arr - 1) // tblock).items():
                out.setdefault(dst, []).append((tag, arr[sel]))
        return state, [(d, ("D", parts)) for d, parts in out.items()]

    run_round(ctx, decide)
    exchange(ctx)

    def collect(mid: int, state: dict, inbox: list):
        got, flg = [], []
        for msg in inbox:
            if msg.payload[0] != "D":
                continue
            for tag, arr in msg.payload[1]:
                (got if tag == "M" else flg).extend(int(v) for v in arr)
        state["q_matches"] = sorted(got)
        state["q_flags"] = sorted(flg)
        return state, []

    run_round(ctx, collect)
    positions, flags = [], []
    for i in range(grid):
        positions.extend(ctx.states[i].get("q_matches", []))
        flags.extend(ctx.states[i].get("q_flags", []))
    return MatchSet(n=n, m=m, positions=tuple(positions),
                    precision_flags=tuple(flags))
