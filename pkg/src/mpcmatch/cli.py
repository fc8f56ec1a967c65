"""Command-line front end for the simulated-MPC string matchers and FFT.

Subcommands
-----------
``match``
    Run one matcher over a text/pattern pair and emit a JSON report with the
    result and the run's cost metrics.  ``--mode`` selects the algorithm:

    - ``exact``          every pattern byte is literal (wildcard bytes too)
    - ``q``              '?' matches any single byte
    - ``plus``           'c+' matches one or more copies of the run of c
    - ``star-dp``        '*' matches any (possibly empty) piece; table-fold
    - ``star-nonprefix`` '*' decider for patterns whose '*'-separated words
      are pairwise prefix-free
    - ``oracle``         sequential brute-force reference; the wildcard class
      is inferred from the unescaped wildcard bytes in the pattern

    ``--verify`` re-runs the matching brute-force oracle and fails the
    process (exit 1) on any discrepancy.

``gen``
    Deterministic instance generators (same seed => byte-identical output):
    ``random``, ``periodic``, ``adversarial-plus`` (long-run texts plus a
    derived '+'-pattern), ``prefix-free-star`` (planted '*'-pattern whose
    words are validated pairwise prefix-free).

``bench``
    Run a cross product of modes/sizes/x-values and emit one CSV row per run
    with columns ``mode,n,x,rounds,peak_memory,peak_receive,wall_time``.  An
    empty mode list produces a header-only CSV.

``fft``
    Read whitespace-separated ``re im`` pairs (power-of-two count), run the
    distributed transform, and write the transformed pairs one per line.
    ``--inverse`` applies conj(FFT(conj(v)))/n on the same engine.

``oracle``
    Shorthand for ``match --mode oracle``.

Pattern syntax
--------------
Patterns are given as UTF-8 strings; ``\\?``, ``\\+``, ``\\*`` and ``\\\\``
escape the wildcard bytes and backslash.  Escaped wildcard positions are
passed to the matchers as literal positions (1-based byte positions).  Any
other backslash sequence is a usage error.  Text is treated as raw bytes
(``--text FILE`` is read binary; ``--text-inline`` is UTF-8 encoded).

Exit codes: 0 success, 1 usage or precondition error (including verification
failure), 2 memory/communication budget violation under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

import numpy as np

from .exact_match import match_exact, match_large_pattern
from .fft_engine import mpc_fft
from .oracles import naive_exact, naive_plus_spans, naive_question, naive_star
from .runtime import (
    RECORD_ONLY,
    STRICT,
    BudgetError,
    MpcConfig,
    MpcContext,
    metrics,
)
from .wildcard_plus import match_plus, rle_encode
from .wildcard_question import match_question
from .wildcard_star import split_subpatterns, star_match_dp, star_match_nonprefix

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2

_QUESTION, _PLUS, _STAR, _BACKSLASH = 0x3F, 0x2B, 0x2A, 0x5C
_WILDCARD_BYTES = frozenset((_QUESTION, _PLUS, _STAR))

MATCH_MODES = ("exact", "q", "plus", "star-dp", "star-nonprefix", "oracle")
GEN_KINDS = ("random", "periodic", "adversarial-plus", "prefix-free-star")
BENCH_COLUMNS = ("mode", "n", "x", "rounds", "peak_memory", "peak_receive",
                 "wall_time")


class CliError(ValueError):
    """Usage/precondition failure that should exit with code 1."""


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage by default; we reserve 2 for
    budget violations, so remap parser errors to exit code 1."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# Pattern unescaping and wildcard-class inference.
# --------------------------------------------------------------------------

def parse_pattern(text: str) -> tuple[bytes, frozenset[int]]:
    """Unescape a pattern string into (bytes, literal 1-based positions).

    ``\\?``, ``\\+``, ``\\*`` produce the wildcard byte marked literal;
    ``\\\\`` produces a backslash byte.  Positions count bytes, so the sets
    plug directly into the matchers' ``literal_positions`` arguments.
    """
    raw = text.encode("utf-8")
    out = bytearray()
    literal = set()
    i = 0
    while i < len(raw):
        b = raw[i]
        if b == _BACKSLASH:
            if i + 1 >= len(raw) or raw[i + 1] not in b"?+*\\":
                raise CliError(
                    f"bad escape at byte {i + 1}: only \\?, \\+, \\* and \\\\ "
                    "are recognized")
            nxt = raw[i + 1]
            out.append(nxt)
            if nxt != _BACKSLASH:
                literal.add(len(out))
            i += 2
        else:
            out.append(b)
            i += 1
    return bytes(out), frozenset(literal)


def wildcard_class(pattern: bytes, literal_positions: frozenset[int]) -> str:
    """'star' > 'plus' > 'q' > 'exact', by unescaped wildcard bytes present."""
    present = {pattern[j] for j in range(len(pattern))
               if pattern[j] in _WILDCARD_BYTES and (j + 1) not in literal_positions}
    if _STAR in present:
        return "star"
    if _PLUS in present:
        return "plus"
    if _QUESTION in present:
        return "q"
    return "exact"


# --------------------------------------------------------------------------
# Shared plumbing.
# --------------------------------------------------------------------------

def _read_text(args) -> bytes:
    if args.text_inline is not None:
        return args.text_inline.encode("utf-8")
    with open(args.text, "rb") as fh:
        return fh.read()


def _make_context(n: int, args) -> MpcContext:
    cfg = MpcConfig(n=max(1, n), x=args.x, slack_c=args.slack_c,
                    slack_log_exp=args.slack_log_exp,
                    enforce=STRICT if args.strict else RECORD_ONLY)
    return MpcContext(cfg)


def _dump_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _emit(payload: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


# --------------------------------------------------------------------------
# match / oracle
# --------------------------------------------------------------------------

def _run_oracle(cls: str, text: bytes, pattern: bytes,
                lits: frozenset[int]) -> tuple[str, object]:
    """(report key, JSON-ready value) for the brute-force result."""
    if cls == "exact":
        return "matches", list(naive_exact(text, pattern).positions)
    if cls == "q":
        return "matches", list(naive_question(text, pattern, lits).positions)
    if cls == "plus":
        spans = sorted(naive_plus_spans(text, pattern, lits))
        return "spans", [list(se) for se in spans]
    return "decision", bool(naive_star(text, pattern, lits))


def cmd_match(args) -> int:
    text = _read_text(args)
    pattern, lits = parse_pattern(args.pattern)
    mode = args.mode
    report: dict = {"mode": mode, "n": len(text), "m": len(pattern)}

    if mode == "oracle":
        cls = wildcard_class(pattern, lits)
        if len(pattern) == 0:
            raise CliError("pattern must be non-empty")
        if len(text) == 0 and cls != "star":
            raise CliError("text must be non-empty")
        key, value = _run_oracle(cls, text, pattern, lits)
        report["class"] = cls
        report[key] = value
        if args.verify:
            report["oracle_checked"] = True
        _emit(_dump_json(report), args.json)
        return EXIT_OK

    ctx = _make_context(len(text), args)
    if mode == "exact":
        result = match_exact(ctx, text, pattern, seed=args.seed)
        report["matches"] = list(result.positions)
    elif mode == "q":
        result = match_question(ctx, text, pattern, literal_positions=lits)
        report["matches"] = list(result.positions)
    elif mode == "plus":
        result = match_plus(ctx, text, pattern, literal_positions=lits)
        report["alignments"] = [a.as_dict() for a in result.alignments]
    elif mode == "star-dp":
        decision = star_match_dp(ctx, text, pattern, literal_positions=lits)
        report["decision"] = bool(decision)
    else:  # star-nonprefix
        decision = star_match_nonprefix(ctx, text, pattern,
                                        literal_positions=lits, seed=args.seed)
        report["decision"] = bool(decision)
    report["metrics"] = metrics(ctx).as_dict()

    if args.verify:
        _verify_against_oracle(mode, report, text, pattern, lits)
        report["oracle_checked"] = True

    _emit(_dump_json(report), args.json)
    return EXIT_OK


def _verify_against_oracle(mode: str, report: dict, text: bytes,
                           pattern: bytes, lits: frozenset[int]) -> None:
    if mode == "exact":
        want = list(naive_exact(text, pattern).positions)
        got = report["matches"]
    elif mode == "q":
        want = list(naive_question(text, pattern, lits).positions)
        got = report["matches"]
    elif mode == "plus":
        want = naive_plus_spans(text, pattern, lits)
        from .wildcard_plus import PlusMatchReport, PlusAlignment
        rep = PlusMatchReport(tuple(PlusAlignment(**d)
                                    for d in report["alignments"]))
        got = set(rep.spans())
    else:
        want = naive_star(text, pattern, lits)
        got = report["decision"]
    if got != want:
        raise CliError(f"verification failed for mode {mode}: "
                       f"matcher produced {got!r}, oracle produced {want!r}")


def cmd_oracle(args) -> int:
    args.mode = "oracle"
    return cmd_match(args)


# --------------------------------------------------------------------------
# gen
# --------------------------------------------------------------------------

def _gen_random(rng: random.Random, n: int, alphabet: bytes) -> bytes:
    return bytes(rng.choice(alphabet) for _ in range(n))


def _gen_periodic(n: int, period: int, alphabet: bytes | None) -> bytes:
    if period < 1:
        raise CliError("period must be >= 1")
    pool = alphabet if alphabet else b"abcdefghijklmnopqrstuvwxyz"
    base = bytes(pool[i % len(pool)] for i in range(period))
    reps = -(-n // period)
    return (base * reps)[:n]


def _gen_adversarial_plus(rng: random.Random, n: int) -> tuple[bytes, bytes]:
    """Long-run a/b text (stresses run-length merging) + a derived pattern."""
    text = bytearray()
    ch = ord("a")
    while len(text) < n:
        text.extend(bytes([ch]) * rng.randint(1, 8))
        ch = ord("b") if ch == ord("a") else ord("a")
    text = bytes(text[:n])
    runs = rle_encode(text).blocks
    pieces = []
    for blk in runs[:4]:
        if blk.count > 1:
            pieces.append(bytes([blk.char, _PLUS]))
        else:
            pieces.append(bytes([blk.char]))
    pattern = b"".join(pieces) if pieces else b"a"
    return text, pattern


def _gen_prefix_free_star(rng: random.Random, n: int) -> tuple[bytes, bytes]:
    """Planted '*'-pattern whose words are pairwise prefix-free (validated)."""
    alphabet = b"abc"
    while True:
        words = [bytes(rng.choice(alphabet) for _ in range(rng.randint(2, 4)))
                 for _ in range(3)]
        if all(not words[i].startswith(words[j]) and
               not words[j].startswith(words[i])
               for i in range(3) for j in range(i + 1, 3)):
            break
    pattern = b"*" + b"*".join(words) + b"*"
    sp = split_subpatterns(pattern)
    subs = sp.subpatterns
    for i in range(len(subs)):
        for j in range(len(subs)):
            if i != j and subs[j].startswith(subs[i]):
                raise CliError("generated star pattern is not prefix-free")
    text = bytearray(_gen_random(rng, n, alphabet))
    total = sum(len(w) for w in words)
    if n >= total:
        gap = (n - total) // (len(words) + 1)
        pos = gap
        for w in words:
            text[pos:pos + len(w)] = w
            pos += len(w) + gap
    return bytes(text), pattern


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    alphabet = args.alphabet.encode("utf-8") if args.alphabet else None
    pattern = None
    if args.kind == "random":
        text = _gen_random(rng, args.n, alphabet or b"ab")
    elif args.kind == "periodic":
        text = _gen_periodic(args.n, args.period, alphabet)
    elif args.kind == "adversarial-plus":
        text, pattern = _gen_adversarial_plus(rng, args.n)
    else:  # prefix-free-star
        text, pattern = _gen_prefix_free_star(rng, args.n)

    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(text)
        if pattern is not None:
            ppath = args.pattern_out or args.out + ".pattern"
            with open(ppath, "wb") as fh:
                fh.write(pattern)
    else:
        sys.stdout.write(text.decode("ascii") + "\n")
        if pattern is not None:
            sys.stdout.write(pattern.decode("ascii") + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# bench
# --------------------------------------------------------------------------

def _bench_instance(mode: str, n: int, x: float, seed: int) -> tuple[bytes, bytes, frozenset[int]]:
    rng = random.Random(f"{seed}:{mode}:{n}:{x}")
    text = _gen_random(rng, n, b"ab")
    mid = n // 3
    m = min(8, n)
    if mode == "exact":
        return text, text[mid:mid + m] or b"a", frozenset()
    if mode == "q":
        pat = bytearray(text[mid:mid + m] or b"a")
        if len(pat) >= 2:
            pat[len(pat) // 2] = _QUESTION
        return text, bytes(pat), frozenset()
    if mode == "plus":
        runs = rle_encode(text[mid:mid + m] or b"a").blocks
        pieces = [bytes([blk.char, _PLUS]) if blk.count > 1 else bytes([blk.char])
                  for blk in runs]
        return text, b"".join(pieces), frozenset()
    if mode == "star-dp":
        inner = text[mid:mid + min(4, n)] or b"a"
        return text, b"*" + inner + b"*", frozenset()
    # star-nonprefix: fixed prefix-free word pair over the text alphabet
    return text, b"*aab*bba*", frozenset()


def _bench_run(mode: str, ctx: MpcContext, text: bytes, pattern: bytes,
               lits: frozenset[int], seed: int) -> None:
    if mode == "exact":
        match_large_pattern(ctx, text, pattern, seed=seed)
    elif mode == "q":
        match_question(ctx, text, pattern, literal_positions=lits)
    elif mode == "plus":
        match_plus(ctx, text, pattern, literal_positions=lits)
    elif mode == "star-dp":
        star_match_dp(ctx, text, pattern, literal_positions=lits)
    else:
        star_match_nonprefix(ctx, text, pattern, literal_positions=lits,
                             seed=seed)


def cmd_bench(args) -> int:
    modes = [m for m in args.modes.split(",") if m]
    for m in modes:
        if m not in MATCH_MODES or m == "oracle":
            raise CliError(f"unknown bench mode {m!r}")
    sizes = [int(s) for s in args.sizes.split(",") if s]
    xs = [float(v) for v in args.x_values.split(",") if v]

    buf = []
    out = csv.writer(_ListWriter(buf), lineterminator="\n")
    out.writerow(BENCH_COLUMNS)
    for mode in modes:
        for n in sizes:
            for x in xs:
                text, pattern, lits = _bench_instance(mode, n, x, args.seed)
                cfg = MpcConfig(n=max(1, n), x=x, slack_c=args.slack_c,
                                slack_log_exp=args.slack_log_exp,
                                enforce=STRICT if args.strict else RECORD_ONLY)
                ctx = MpcContext(cfg)
                t0 = time.perf_counter()
                _bench_run(mode, ctx, text, pattern, lits, args.seed)
                wall = time.perf_counter() - t0
                rep = metrics(ctx)
                out.writerow([mode, n, x, rep.rounds,
                              rep.peak_machine_memory_words,
                              rep.peak_round_receive_words,
                              f"{wall:.6f}"])
    _emit("".join(buf), args.out)
    return EXIT_OK


class _ListWriter:
    """Minimal file-like adapter so csv.writer can fill a string list."""

    def __init__(self, sink: list):
        self._sink = sink

    def write(self, chunk: str) -> None:
        self._sink.append(chunk)


# --------------------------------------------------------------------------
# fft
# --------------------------------------------------------------------------

def cmd_fft(args) -> int:
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            tokens = fh.read().split()
    else:
        tokens = sys.stdin.read().split()
    if not tokens or len(tokens) % 2:
        raise CliError("input must be a non-empty even count of numbers "
                       "(re im pairs)")
    try:
        vals = [float(t) for t in tokens]
    except ValueError as exc:
        raise CliError(f"bad number in input: {exc}") from None
    n = len(vals) // 2
    if n & (n - 1):
        raise CliError(f"pair count must be a power of two, got {n}")
    v = np.array(vals[0::2]) + 1j * np.array(vals[1::2])

    ctx = _make_context(n, args)
    if args.inverse:
        result = np.conj(mpc_fft(ctx, np.conj(v))) / n
    else:
        result = mpc_fft(ctx, v)
    lines = [f"{z.real:.17g} {z.imag:.17g}\n" for z in result]
    _emit("".join(lines), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# Argument wiring.
# --------------------------------------------------------------------------

def _add_context_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x", type=float, default=0.5,
                   help="machine-count exponent: M = ceil(n^x)")
    p.add_argument("--slack-c", type=int, default=4,
                   help="budget slack constant")
    p.add_argument("--slack-log-exp", type=int, default=2,
                   help="budget polylog exponent")
    p.add_argument("--strict", action="store_true",
                   help="raise (exit 2) on budget violations instead of "
                        "recording them")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for all randomness in the run")


def _add_text_pattern_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", help="read the text from this file (raw bytes)")
    src.add_argument("--text-inline", help="take the text from the argument "
                                           "(UTF-8 encoded)")
    p.add_argument("--pattern", required=True,
                   help="pattern string; \\?, \\+, \\*, \\\\ escape")
    p.add_argument("--json", help="write the JSON report here instead of "
                                  "stdout")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="mpcmatch",
                  description="Simulated-MPC string matching and FFT.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="run one matcher, emit a JSON report")
    p.add_argument("--mode", choices=MATCH_MODES, required=True)
    _add_text_pattern_flags(p)
    _add_context_flags(p)
    p.add_argument("--verify", action="store_true",
                   help="re-run the brute-force oracle and fail on mismatch")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("oracle", help="run the brute-force reference matcher")
    _add_text_pattern_flags(p)
    p.add_argument("--verify", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate deterministic instances")
    p.add_argument("--kind", choices=GEN_KINDS, required=True)
    p.add_argument("--n", type=int, required=True, help="text length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--period", type=int, default=2,
                   help="period for --kind periodic")
    p.add_argument("--alphabet", help="override the generation alphabet")
    p.add_argument("--out", help="write the text here (else stdout)")
    p.add_argument("--pattern-out",
                   help="write the generated pattern here (default: "
                        "OUT.pattern)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a benchmark grid, emit CSV")
    p.add_argument("--modes", default="",
                   help="comma-separated matcher modes (empty: header only)")
    p.add_argument("--sizes", default="1024", help="comma-separated n values")
    p.add_argument("--x-values", default="0.5",
                   help="comma-separated machine exponents")
    p.add_argument("--slack-c", type=int, default=4)
    p.add_argument("--slack-log-exp", type=int, default=2)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the CSV here (else stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fft", help="distributed FFT over re/im pairs")
    p.add_argument("--input", help="read pairs from this file (else stdin)")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--out", help="write pairs here (else stdout)")
    _add_context_flags(p)
    p.set_defaults(func=cmd_fft)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"mpcmatch: budget violation: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CliError, ValueError, OSError) as exc:
        print(f"mpcmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover - exercised via console script
    sys.exit(main())
