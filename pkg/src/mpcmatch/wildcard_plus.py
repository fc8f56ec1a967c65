"""'+' wildcard matching over run-length encodings.

A '+' in the pattern means "one or more of the preceding character":
"ab+c" matches "abc", "abbc", "abbbc", ...  Text and pattern are first
compressed into maximal runs of equal characters (blocks).  A pattern block
then constrains the text block it aligns with: the characters must agree,
interior blocks need an exact count (no '+') or a minimum count ('+'), and
the first and last pattern blocks always act as minimum-count constraints
because an occurrence may truncate the text runs at its ends.

The default pipeline reduces this to *subset matching*: every text block
expands into the set of "(char, at-least-k)" and "(char, exactly-k)" facts it
satisfies, every pattern block into the single fact it requires, and an
alignment works iff all required facts are present.  Requirements are counted
by per-symbol indicator convolutions batched through the shared 4-exchange
convolution engine, so the matcher always runs in 6 exchange rounds:

    1. run-length summaries and required-symbol lists go all-to-all;
    2.-5. every machine merges the summaries identically, registers its
       indicator rows, and the convolution engine does the rest;
    6. matching alignments are routed to the machines owning their first and
       last text blocks, which look up the run facts that bound the spans.

An independent pipeline ("constraint-split") checks the same alignments by
splitting the constraints differently — character equality via indicator
convolutions, exact counts via a masked quadratic that vanishes exactly on
agreement, and minimum counts via the greater-than-to-subset reduction — and
tests require both pipelines to agree.

Work stays near-linear only while the pattern needs few distinct block
symbols; the exchange-round count is unconditional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exact_match import MatchSet
from .fft_engine import (
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
    "PLUS_BYTE",
    "RleBlock",
    "RleString",
    "PlusAlignment",
    "PlusMatchReport",
    "rle_encode",
    "rle_encode_distributed",
    "subset_match",
    "reduce_gtm_to_subset",
    "greater_than_match",
    "match_plus",
]

PLUS_BYTE = 0x2B  # '+'
# Bytes an unescaped '+' may not follow: another '+', or the other wildcards.
_NO_HOST = frozenset({0x2B, 0x3F, 0x2A})
GE, EQ = 1, 0  # count-constraint flavors of an effective block symbol


@dataclass(frozen=True)
class RleBlock:
    """One maximal run: ``count`` copies of ``char`` starting at 1-based ``offset``.

    ``plus`` records that a '+' applied to this run, so it matches ``count``
    or more repetitions instead of exactly ``count``.
    """

    char: int
    count: int
    plus: bool
    offset: int


@dataclass(frozen=True)
class RleString:
    """Run-length encoding of a string; blocks are in source order.

    Adjacent blocks always have distinct characters, and the counts sum to
    the number of non-wildcard symbols in the source.
    """

    blocks: tuple[RleBlock, ...]
    source_len: int

    def triples(self) -> list[tuple[int, int, bool]]:
        """(char, count, plus) per block, offsets dropped; convenient in tests."""
        return [(b.char, b.count, b.plus) for b in self.blocks]


@dataclass(frozen=True)
class PlusAlignment:
    """One family of occurrences, all starting inside text block ``block_index``.

    Every (s, e) with min_start <= s <= max_start and min_end <= e <= max_end
    is an occurrence.  Start and end freedom are independent because they
    truncate different text runs; for single-block patterns the matcher emits
    one record per start so the rectangle stays exact.
    """

    block_index: int
    min_start: int
    max_start: int
    min_end: int
    max_end: int

    def as_dict(self) -> dict:
        return {
            "block_index": self.block_index,
            "min_start": self.min_start,
            "max_start": self.max_start,
            "min_end": self.min_end,
            "max_end": self.max_end,
        }


@dataclass(frozen=True)
class PlusMatchReport:
    """All alignment families of one '+'-pattern run, in text order."""

    alignments: tuple[PlusAlignment, ...]

    def to_json(self) -> str:
        return json.dumps([a.as_dict() for a in self.alignments],
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "PlusMatchReport":
        return cls(tuple(PlusAlignment(**d) for d in json.loads(text)))

    def spans(self, limit: int = 1_000_000) -> list[tuple[int, int]]:
        """Expand to the sorted list of 1-based inclusive (start, end) pairs."""
        out = set()
        for a in self.alignments:
            grow = (a.max_start - a.min_start + 1) * (a.max_end - a.min_end + 1)
            if len(out) + grow > limit:
                raise ValueError(f"span expansion exceeds limit of {limit}")
            for s in range(a.min_start, a.max_start + 1):
                for e in range(a.min_end, a.max_end + 1):
                    out.add((s, e))
        return sorted(out)


# --------------------------------------------------------------------------
# Run-length encoding: sequential, and the piece/merge machinery shared with
# the distributed version.
# --------------------------------------------------------------------------


def _literal_mask(length: int, literal_positions, base: int) -> np.ndarray:
    """Local boolean mask for escaped bytes in [base+1, base+length] (1-based)."""
    mask = np.zeros(length, dtype=np.uint8)
    for p in literal_positions:
        if base < p <= base + length:
            mask[p - base - 1] = 1
    return mask


def _parse_piece(data: bytes, base: int, lit, plus_sem: bool) -> dict:
    """Run-length encode one contiguous piece of the input.

    ``base`` is the piece's 0-based global offset (used for block offsets and
    error positions); ``lit`` marks piece-local escaped bytes.  Only errors
    fully visible inside the piece are raised here; boundary conditions are
    validated after summaries have been exchanged.
    """
    blocks: list[list] = []  # [char, count, plus, offset]
    lead_plus = False
    for i, b in enumerate(data):
        literal = lit is not None and bool(lit[i])
        if plus_sem and b == PLUS_BYTE and not literal:
            if i == 0:
                lead_plus = True
                continue
            prev_literal = lit is not None and bool(lit[i - 1])
            if not prev_literal and data[i - 1] in _NO_HOST:
                raise ValueError(
                    f"'+' at position {base + i + 1} must follow a literal character")
            blocks[-1][2] = True
        elif blocks and blocks[-1][0] == b:
            blocks[-1][1] += 1
        else:
            blocks.append([b, 1, False, base + i + 1])
    last_host = False
    if data:
        last_literal = lit is not None and bool(lit[len(data) - 1])
        last_host = not plus_sem or last_literal or data[-1] not in _NO_HOST
    return {
        "blocks": blocks,
        "lead_plus": lead_plus,
        "last_host": last_host,
        "raw_len": len(data),
    }


# Summary tuple layout broadcast between machines; every field is one word.
_RAW, _NB, _LEAD, _HOST, _FC, _FCT, _FPL, _LC, _LCT, _LPL = range(10)


def _summary(piece: dict) -> tuple:
    blocks = piece["blocks"]
    if blocks:
        f, l = blocks[0], blocks[-1]
        return (piece["raw_len"], len(blocks), piece["lead_plus"],
                piece["last_host"], f[0], f[1], f[2], l[0], l[1], l[2])
    return (piece["raw_len"], 0, piece["lead_plus"], piece["last_host"],
            -1, 0, False, -1, 0, False)


def _merge_plan(summaries: list[tuple], plus_sem: bool) -> dict:
    """Combine piece summaries into the global block structure.

    Runs identically on every machine from the same summaries.  Returns which
    pieces' first blocks continue an earlier run (absorbed), cumulative new-
    block counts (cum, length M+1, for owner lookup), the total block count,
    merged (count, plus) facts for each piece's last owned block (ext), and
    the merged facts of the global first and last blocks.
    """
    m = len(summaries)
    if plus_sem:
        # A piece-leading '+' needs a literal character at the end of the
        # nearest preceding piece that has any bytes at all.
        prefix = 0
        prev_bytes = -1
        for i, s in enumerate(summaries):
            if s[_LEAD] and (prev_bytes < 0 or not summaries[prev_bytes][_HOST]):
                raise ValueError(
                    f"'+' at position {prefix + 1} must follow a literal character")
            prefix += s[_RAW]
            if s[_RAW] > 0:
                prev_bytes = i

    absorbed = [False] * m
    prev_blocks = -1
    for i, s in enumerate(summaries):
        if s[_NB] == 0:
            continue
        if prev_blocks >= 0 and summaries[prev_blocks][_LC] == s[_FC]:
            absorbed[i] = True
        prev_blocks = i
    newblocks = [s[_NB] - (1 if absorbed[i] else 0) for i, s in enumerate(summaries)]
    cum = [0]
    for v in newblocks:
        cum.append(cum[-1] + v)

    ext: dict[int, tuple[int, bool]] = {}
    for i, s in enumerate(summaries):
        if s[_NB] == 0 or (absorbed[i] and s[_NB] == 1):
            continue  # owns no last block here
        char, cnt, plus = s[_LC], s[_LCT], s[_LPL]
        j = i + 1
        while j < m:
            t = summaries[j]
            if t[_RAW] == 0:
                j += 1
                continue
            if t[_LEAD]:
                plus = True
            if t[_NB] == 0:  # the piece was only '+' bytes
                j += 1
                continue
            if t[_FC] != char:
                break
            cnt += t[_FCT]
            plus = plus or t[_FPL]
            if t[_NB] > 1:
                break
            j += 1
        ext[i] = (cnt, plus)

    first_facts = last_facts = None
    bearing = [i for i in range(m) if newblocks[i] > 0]
    if bearing:
        fi, li = bearing[0], bearing[-1]
        s = summaries[fi]
        if s[_NB] == 1:
            cnt, plus = ext[fi]
        else:
            cnt, plus = s[_FCT], s[_FPL]
        first_facts = (s[_FC], cnt, plus)
        cnt, plus = ext[li]
        last_facts = (summaries[li][_LC], cnt, plus)
    return {
        "absorbed": absorbed,
        "cum": cum,
        "total": cum[-1],
        "ext": ext,
        "first": first_facts,
        "last": last_facts,
    }


def _own_blocks(mid: int, piece_blocks: list, plan: dict) -> list[tuple]:
    """(global_index, char, count, plus, offset) for the blocks this machine
    owns, with merged count/plus facts substituted for its last block."""
    out = []
    nb = len(piece_blocks)
    if nb == 0:
        return out
    a = 1 if plan["absorbed"][mid] else 0
    if a and nb == 1:
        return out
    g0 = plan["cum"][mid] + 1
    for k in range(a, nb):
        char, cnt, plus, off = piece_blocks[k]
        if k == nb - 1:
            cnt, plus = plan["ext"][mid]
        out.append((g0 + (k - a), char, cnt, plus, off))
    return out


def rle_encode(s, literal_positions: frozenset[int] = frozenset()) -> RleString:
    """Run-length encode ``s``, folding '+' wildcards into block flags.

    A '+' marks the block of the character right before it as "this count or
    more"; repeated forms like "o+o+" accumulate into one flagged block.
    Bytes at 1-based positions in ``literal_positions`` are ordinary
    characters.  Raises ValueError when a '+' has nothing to apply to.
    """
    data = bytes(s)
    lit = _literal_mask(len(data), literal_positions, 0) if literal_positions else None
    piece = _parse_piece(data, 0, lit, True)
    if piece["lead_plus"]:
        raise ValueError("'+' at position 1 must follow a literal character")
    blocks = tuple(RleBlock(char, cnt, bool(plus), off)
                   for char, cnt, plus, off in piece["blocks"])
    return RleString(blocks=blocks, source_len=len(data))


def rle_encode_distributed(ctx: MpcContext, s,
                           literal_positions: frozenset[int] = frozenset()) -> RleString:
    """Distributed run-length encoding in exactly one exchange round.

    Each machine encodes its scattered piece locally, all machines swap
    constant-size boundary summaries, and every machine then derives the same
    global block numbering; blocks spanning several pieces are credited to the
    machine where the run starts.  The assembled result equals
    :func:`rle_encode` of the whole string.
    """
    data = bytes(s)
    n = len(data)
    grid = ctx.machines
    bs = -(-n // grid) if n else 0
    scatter_input(ctx, data, slot="rle_in")
    scatter_input(ctx, _literal_mask(n, literal_positions, 0), slot="rle_lit")

    def encode_local(mid: int, state: dict, inbox: list):
        piece = _parse_piece(bytes(state.pop("rle_in")), mid * bs,
                             state.pop("rle_lit"), True)
        state["rle_piece"] = piece["blocks"]
        return state, [(d, ("RS", _summary(piece))) for d in range(grid)]

    run_round(ctx, encode_local)
    exchange(ctx)

    def merge(mid: int, state: dict, inbox: list):
        summaries: list = [None] * grid
        for msg in inbox:
            if msg.payload[0] == "RS":
                summaries[msg.src] = msg.payload[1]
        plan = _merge_plan(summaries, plus_sem=True)
        state["rle_blocks"] = _own_blocks(mid, state.pop("rle_piece"), plan)
        return state, []

    run_round(ctx, merge)
    merged = []
    for i in range(grid):
        merged.extend(ctx.states[i].get("rle_blocks", []))
    merged.sort()
    blocks = tuple(RleBlock(char, cnt, bool(plus), off)
                   for _g, char, cnt, plus, off in merged)
    return RleString(blocks=blocks, source_len=n)


# --------------------------------------------------------------------------
# Subset matching and the greater-than reduction.
# --------------------------------------------------------------------------


def subset_match(ctx: MpcContext, T, P) -> MatchSet:
    """Positions i where P[j] ⊆ T[i+j-1] for every j, in 5 exchange rounds.

    ``T`` and ``P`` are sequences of finite symbol sets; symbols must be
    hashable and mutually comparable (used as sorted convolution keys).  For
    each symbol required anywhere in ``P``, indicator vectors are convolved
    and the per-symbol hit counts are summed in the frequency domain; position
    i matches iff the total equals the number of required (position, symbol)
    pairs.  Empty pattern sets are allowed and constrain nothing.
    """
    tsets = [frozenset(x) for x in T]
    psets = [frozenset(x) for x in P]
    n, m = len(tsets), len(psets)
    if m == 0:
        raise ValueError("pattern must be non-empty")
    if n == 0:
        raise ValueError("text must be non-empty")
    if m > n:
        return MatchSet.of(n, m, [])
    target = sum(len(s) for s in psets)
    grid = ctx.machines
    tb = -(-n // grid)
    pb = -(-m // grid)
    scatter_input(ctx, tsets, slot="sub_t")
    scatter_input(ctx, psets, slot="sub_p")

    def prepare(mid: int, state: dict, inbox: list):
        rows: dict = {}
        for li, symbols in enumerate(state.pop("sub_t")):
            for sym in symbols:
                rows.setdefault(sym, []).append(mid * tb + li)
        for sym in sorted(rows):
            idx = np.asarray(rows[sym], dtype=np.int64)
            register_conv_input(state, "A", sym, idx, np.ones(len(idx), dtype=np.uint64))
        rows = {}
        for lj, symbols in enumerate(state.pop("sub_p")):
            for sym in symbols:
                rows.setdefault(sym, []).append((m - 1) - (mid * pb + lj))
        for sym in sorted(rows):
            idx = np.asarray(rows[sym], dtype=np.int64)
            register_conv_input(state, "B", sym, idx, np.ones(len(idx), dtype=np.uint64))

    layout = convolution_rounds(ctx, KERNEL_NTT, n, m, prepare=prepare,
                                sum_keys=lambda _sym: 0)

    def decide(mid: int, state: dict, inbox: list):
        lo, hi, rows = collect_convolution_output(layout, mid, inbox)
        ks = np.arange(lo, hi, dtype=np.int64)
        starts0 = ks - (m - 1)
        valid = (starts0 >= 0) & (starts0 <= n - m)
        count = rows.get(0, np.zeros(hi - lo, dtype=np.uint64)).astype(np.int64)
        starts1 = starts0[valid & (count == target)] + 1
        return state, [(dst, ("D", starts1[sel]))
                       for dst, sel in _split_by((starts1 - 1) // tb).items()]

    run_round(ctx, decide)
    exchange(ctx)

    def collect(mid: int, state: dict, inbox: list):
        got = []
        for msg in inbox:
            if msg.payload[0] == "D":
                got.extend(int(v) for v in msg.payload[1])
        state["sub_matches"] = sorted(got)
        return state, []

    run_round(ctx, collect)
    positions = []
    for i in range(grid):
        positions.extend(ctx.states[i].get("sub_matches", []))
    return MatchSet.of(n, m, positions)


def reduce_gtm_to_subset(T, P) -> tuple[list[frozenset], list[frozenset]]:
    """Map greater-than matching onto subset matching, literally.

    Text entry v becomes the set {0, ..., v}; pattern entry w becomes {w}; then
    {w} ⊆ {0..v} iff v >= w.  Total materialized size is Σ(T_i+1) + |P|.
    """
    timg = []
    for v in T:
        v = int(v)
        if v < 0:
            raise ValueError("entries must be non-negative")
        timg.append(frozenset(range(v + 1)))
    pimg = []
    for w in P:
        w = int(w)
        if w < 0:
            raise ValueError("entries must be non-negative")
        pimg.append(frozenset((w,)))
    return timg, pimg


def greater_than_match(ctx: MpcContext, T, P) -> MatchSet:
    """Positions i where T[i+j-1] >= P[j] for every j (element-wise)."""
    timg, pimg = reduce_gtm_to_subset(T, P)
    return subset_match(ctx, timg, pimg)


# --------------------------------------------------------------------------
# The '+' matcher.
# --------------------------------------------------------------------------


def _boundary_blocks(summaries: list[tuple], plan: dict) -> list[tuple]:
    """(char, count, global_index, plus) of every piece's first and last owned
    blocks, with merged facts — reconstructible from the summaries alone.

    Together with the broadcast piece-interior lists this covers every block:
    a piece's later-interior blocks travel in the broadcast, its last block's
    merged facts come from the plan, and its first owned block is either the
    same block, locally final (summary), or itself piece-interior.
    """
    out = []
    for i, s in enumerate(summaries):
        nb = s[_NB]
        if nb == 0:
            continue
        absorbed = plan["absorbed"][i]
        if absorbed and nb == 1:
            continue  # fully merged into an earlier piece's run
        cnt, plus = plan["ext"][i]
        out.append((s[_LC], cnt, plan["cum"][i + 1], plus))
        if nb - (1 if absorbed else 0) >= 2 and not absorbed:
            out.append((s[_FC], s[_FCT], plan["cum"][i] + 1, s[_FPL]))
    return out


def _by_char_index(blocks: list[tuple]) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """char -> (counts sorted ascending, matching 0-based global indices)."""
    grouped: dict[int, list] = {}
    for g, char, cnt, _plus, _off in blocks:
        grouped.setdefault(char, []).append((cnt, g - 1))
    out = {}
    for char, pairs in grouped.items():
        pairs.sort()
        out[char] = (np.asarray([c for c, _ in pairs], dtype=np.int64),
                     np.asarray([i for _, i in pairs], dtype=np.int64))
    return out


def match_plus(ctx: MpcContext, text, pattern,
               literal_positions: frozenset[int] = frozenset(),
               pipeline: str = "subset") -> PlusMatchReport:
    """All occurrences of a '+'-wildcard pattern, in exactly 6 exchange rounds.

    Text bytes are always ordinary characters; '+' semantics apply only to the
    pattern (escape positions come in via ``literal_positions``).  Occurrences
    are reported per starting text block with independent start/end ranges;
    see :class:`PlusAlignment`.

    ``pipeline`` selects between two internally distinct but equivalent
    constraint encodings ("subset", the default, and "constraint-split");
    both share the round structure and the span derivation.
    """
    if pipeline not in ("subset", "constraint-split"):
        raise ValueError(f"unknown pipeline: {pipeline!r}")
    data = bytes(text)
    pat = bytes(pattern)
    n, mlen = len(data), len(pat)
    if mlen == 0:
        raise ValueError("pattern must be non-empty")
    if n == 0:
        raise ValueError("text must be non-empty")

    # Driver-side scalar facts about the pattern (block count, end-block
    # constraints, the masked-quadratic constant); the per-block symbol lists
    # themselves travel as messages below.
    pref = rle_encode(pat, literal_positions)
    mo = len(pref.blocks)
    k1, plus1 = pref.blocks[0].count, pref.blocks[0].plus
    km, plusm = pref.blocks[-1].count, pref.blocks[-1].plus
    masked = {1, mo} | {g for g in range(2, mo)
                        if pref.blocks[g - 1].plus}
    nmask = len(masked)
    qconst = sum(b.count ** 2 for g, b in enumerate(pref.blocks, start=1)
                 if g not in masked)

    grid = ctx.machines
    tb = -(-n // grid)
    pb = -(-mlen // grid)
    scatter_input(ctx, data, slot="pl_t")
    scatter_input(ctx, pat, slot="pl_p")
    scatter_input(ctx, _literal_mask(mlen, literal_positions, 0), slot="pl_l")
    subset = pipeline == "subset"

    def summarize(mid: int, state: dict, inbox: list):
        tpiece = _parse_piece(bytes(state.pop("pl_t")), mid * tb, None, False)
        ppiece = _parse_piece(bytes(state.pop("pl_p")), mid * pb,
                              state.pop("pl_l"), True)
        state["pl_tblocks"] = tpiece["blocks"]
        state["pl_pblocks"] = ppiece["blocks"]
        # Piece-interior pattern blocks are final right now; only first/last
        # blocks can change in the merge, and every machine recomputes those
        # from the summaries itself.
        interior = ppiece["blocks"][1:-1]
        if subset:
            symbols = sorted({(b[0], b[1], GE if b[2] else EQ) for b in interior})
        else:
            symbols = sorted({("c", b[0]) for b in ppiece["blocks"]} |
                             {("g", b[1]) for b in interior if b[2]})
        payload = ("PS", _summary(tpiece), _summary(ppiece), symbols)
        return state, [(d, payload) for d in range(grid)]

    run_round(ctx, summarize)
    exchange(ctx)  # round 1

    def prepare(mid: int, state: dict, inbox: list):
        tsumm: list = [None] * grid
        psumm: list = [None] * grid
        broadcast: set = set()
        for msg in inbox:
            if msg.payload[0] != "PS":
                continue
            tsumm[msg.src] = msg.payload[1]
            psumm[msg.src] = msg.payload[2]
            broadcast.update(msg.payload[3])
        tplan = _merge_plan(tsumm, plus_sem=False)
        pplan = _merge_plan(psumm, plus_sem=True)
        state["pl_cum"] = tplan["cum"]
        state["pl_total"] = tplan["total"]
        towns = _own_blocks(mid, state.pop("pl_tblocks"), tplan)
        state["pl_own"] = {g: (char, cnt, off) for g, char, cnt, _p, off in towns}
        powns = _own_blocks(mid, state.pop("pl_pblocks"), pplan)
        boundary = _boundary_blocks(psumm, pplan)
        by_char = _by_char_index(towns)

        if subset:
            edge = {(char, cnt, GE if (plus or g == 1 or g == mo) else EQ)
                    for char, cnt, g, plus in boundary}
            symbols = sorted(broadcast | edge)
            for sym in symbols:
                char, k, flavor = sym
                if char not in by_char:
                    continue
                cnts, gidx = by_char[char]
                if flavor == GE:
                    sel = gidx[np.searchsorted(cnts, k, "left"):]
                else:
                    sel = gidx[np.searchsorted(cnts, k, "left"):
                               np.searchsorted(cnts, k, "right")]
                if len(sel):
                    register_conv_input(state, "A", sym, sel,
                                        np.ones(len(sel), dtype=np.uint64))
            for g, char, cnt, plus, _off in powns:
                flavor = GE if (plus or g == 1 or g == mo) else EQ
                register_conv_input(state, "B", (char, cnt, flavor),
                                    np.asarray([mo - g], dtype=np.int64),
                                    np.ones(1, dtype=np.uint64))
        else:
            chars = sorted(v for tag, v in broadcast if tag == "c")
            edge_ge = {cnt for _char, cnt, g, plus in boundary
                       if plus or g == 1 or g == mo}
            ge_vals = sorted({v for tag, v in broadcast if tag == "g"} | edge_ge)
            if towns:
                gidx = np.asarray([g - 1 for g, *_ in towns], dtype=np.int64)
                cnts = np.asarray([cnt for _g, _c, cnt, _p, _o in towns],
                                  dtype=np.uint64)
                chs = np.asarray([char for _g, char, *_ in towns], dtype=np.int64)
                register_conv_input(state, "A", ("q", 1), gidx, cnts)
                register_conv_input(state, "A", ("q", 2), gidx, cnts * cnts)
                for char in chars:
                    sel = gidx[chs == char]
                    if len(sel):
                        register_conv_input(state, "A", ("c", char), sel,
                                            np.ones(len(sel), dtype=np.uint64))
                for char, (ccnts, cgidx) in by_char.items():
                    for v in ge_vals:
                        sel = cgidx[np.searchsorted(ccnts, v, "left"):]
                        if len(sel):
                            register_conv_input(state, "A", ("g", v), sel,
                                                np.ones(len(sel), dtype=np.uint64))
            for g, char, cnt, plus, _off in powns:
                ridx = np.asarray([mo - g], dtype=np.int64)
                one = np.ones(1, dtype=np.uint64)
                register_conv_input(state, "B", ("c", char), ridx, one)
                if plus or g == 1 or g == mo:
                    register_conv_input(state, "B", ("g", cnt), ridx, one)
                else:
                    register_conv_input(state, "B", ("q", 1), ridx,
                                        np.asarray([cnt], dtype=np.uint64))
                    register_conv_input(state, "B", ("q", 2), ridx, one)

    if subset:
        kernel, fold = KERNEL_NTT, (lambda _sym: 0)
    else:
        # Convolution values are bounded by n^2 (squared-count rows dominate),
        # so one prime is exact until that outgrows it.
        kernel = KERNEL_NTT if n * n < NTT_PRIMES[0] else KERNEL_NTT_CRT

        def fold(key):
            if key[0] == "c":
                return ("C", 0)
            if key[0] == "g":
                return ("G", 0)
            return key

    layout = convolution_rounds(ctx, kernel, n, mo, prepare=prepare,
                                sum_keys=fold)  # rounds 2-5

    def decide(mid: int, state: dict, inbox: list):
        lo, hi, rows = collect_convolution_output(layout, mid, inbox)
        width = hi - lo
        ks = np.arange(lo, hi, dtype=np.int64)
        i0 = ks - (mo - 1) + 1  # 1-based text-block alignment index
        total = state["pl_total"]
        valid = (i0 >= 1) & (i0 <= total - mo + 1)

        def row(key):
            return rows.get(key, np.zeros(width, dtype=np.uint64)).astype(np.int64)

        if subset:
            hit = valid & (row(0) == mo)
        else:
            dev = row(("q", 2)) - 2 * row(("q", 1)) + qconst
            hit = (valid & (row(("C", 0)) == mo)
                   & (row(("G", 0)) == nmask) & (dev == 0))
        hits = i0[hit]
        cum = np.asarray(state["pl_cum"], dtype=np.int64)
        routed: dict[int, list] = {}
        first_owner = np.searchsorted(cum, hits - 1, "right") - 1
        if mo == 1:
            for dst, sel in _split_by(first_owner).items():
                routed.setdefault(dst, []).append(("H1", hits[sel]))
        else:
            for dst, sel in _split_by(first_owner).items():
                routed.setdefault(dst, []).append(("HF", hits[sel]))
            last_owner = np.searchsorted(cum, hits + (mo - 2), "right") - 1
            for dst, sel in _split_by(last_owner).items():
                routed.setdefault(dst, []).append(("HL", hits[sel]))
        return state, [(d, ("PD", parts)) for d, parts in routed.items()]

    run_round(ctx, decide)
    exchange(ctx)  # round 6

    def emit_halves(mid: int, state: dict, inbox: list):
        own = state.get("pl_own", {})
        firsts: dict = {}
        lasts: dict = {}
        singles: dict = {}
        for msg in inbox:
            if msg.payload[0] != "PD":
                continue
            for tag, arr in msg.payload[1]:
                for v in arr:
                    i0 = int(v)
                    if tag == "HF":
                        _c, cnt, off = own[i0]
                        firsts[i0] = (off, cnt)
                    elif tag == "HL":
                        _c, cnt, off = own[i0 + mo - 1]
                        lasts[i0] = (off, cnt)
                    else:
                        _c, cnt, off = own[i0]
                        singles[i0] = (off, cnt)
        state["pl_half"] = (firsts, lasts, singles)
        return state, []

    run_round(ctx, emit_halves)

    firsts: dict = {}
    lasts: dict = {}
    singles: dict = {}
    for i in range(grid):
        f, l, s = ctx.states[i].get("pl_half", ({}, {}, {}))
        firsts.update(f)
        lasts.update(l)
        singles.update(s)

    alignments = []
    if mo == 1:
        for i0 in sorted(singles):
            off, cnt = singles[i0]
            for s in range(off, off + cnt - k1 + 1):
                e = s + k1 - 1
                emax = off + cnt - 1 if plus1 else e
                alignments.append(PlusAlignment(i0, s, s, e, emax))
    else:
        for i0 in sorted(firsts):
            off, cnt = firsts[i0]
            loff, lcnt = lasts[i0]
            shi = off + cnt - k1
            slo = off if plus1 else shi
            elo = loff + km - 1
            ehi = loff + lcnt - 1 if plusm else elo
            alignments.append(PlusAlignment(i0, slo, shi, elo, ehi))
    return PlusMatchReport(tuple(alignments))
