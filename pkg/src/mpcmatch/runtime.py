"""Deterministic simulation of a massively parallel machine grid.

The model: ``M = ceil(n**x)`` machines, each with a memory budget of
``S = ceil(slack_c * n**(1-x) * log2(n+2)**slack_log_exp)`` words, computing in
barrier-synchronized rounds.  Within a round every machine runs the same pure
step function over its isolated local state and inbox; between rounds the
buffered messages are delivered, and no machine may receive more than ``S``
words per barrier.

Conventions (relied on by every algorithm in this package):

* Initial input placement (:func:`scatter_input`, :func:`place_value`) and
  driver-side reads of final machine state are *not* rounds.  Only
  :func:`exchange` barriers count.
* ``run_round`` applies the step function and buffers outgoing messages but
  does **not** advance the round counter; ``exchange`` delivers and increments.
  A trailing ``run_round`` with no following ``exchange`` is final local
  compute and is free.
* One word = one 64-bit unit.  A complex number costs 2 words, a byte symbol
  or a hash value costs 1, numpy arrays cost their element count (doubled for
  complex dtypes).  Every delivered message additionally costs 1 routing word,
  so senders consolidate everything for one destination into one message.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "STRICT",
    "RECORD_ONLY",
    "BudgetError",
    "MemoryBudgetError",
    "ReceiveBudgetError",
    "MpcConfig",
    "Message",
    "MetricsReport",
    "MpcContext",
    "create_context",
    "scatter_input",
    "place_value",
    "run_round",
    "exchange",
    "metrics",
    "sample_sort",
    "word_size",
]

STRICT = "strict"
RECORD_ONLY = "record-only"

#: Step functions receive (machine_id, state, inbox) and return
#: ``(state, outgoing)`` or ``(state, outgoing, extra_work)`` where outgoing is
#: a list of ``(dst, payload)`` pairs.
Program = Callable[[int, dict, list], tuple]


class BudgetError(RuntimeError):
    """A machine exceeded its memory or receive budget in strict mode."""

    def __init__(self, kind: str, machine: int, round_no: int, amount: int, budget: int):
        self.kind = kind
        self.machine = machine
        self.round_no = round_no
        self.amount = amount
        self.budget = budget
        super().__init__(
            f"{kind} budget exceeded on machine {machine} at round {round_no}: "
            f"{amount} words > budget {budget}"
        )


class MemoryBudgetError(BudgetError):
    def __init__(self, machine: int, round_no: int, amount: int, budget: int):
        super().__init__("memory", machine, round_no, amount, budget)


class ReceiveBudgetError(BudgetError):
    def __init__(self, machine: int, round_no: int, amount: int, budget: int):
        super().__init__("receive", machine, round_no, amount, budget)


def _iceil(v: float) -> int:
    """Ceiling with an epsilon guard against float crumbs (1024**0.5 = 32.000…004)."""
    return int(math.ceil(v - 1e-9))


@dataclass(frozen=True)
class MpcConfig:
    """Grid shape: input size ``n``, machine exponent ``x``, and budget slack.

    ``0 < x <= 1/2`` is required: beyond 1/2 the machine count would outgrow
    per-machine memory and the transpose-style algorithms stop fitting.
    ``enforce`` selects strict (raise on violation) or record-only behavior.
    """

    n: int
    x: float
    slack_c: int = 4
    slack_log_exp: int = 2
    enforce: str = STRICT

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not (0.0 < self.x <= 0.5):
            raise ValueError(f"x must satisfy 0 < x <= 1/2, got {self.x!r}")
        if self.slack_c < 1:
            raise ValueError("slack_c must be >= 1")
        if self.slack_log_exp < 0:
            raise ValueError("slack_log_exp must be >= 0")
        if self.enforce not in (STRICT, RECORD_ONLY):
            raise ValueError(f"enforce must be {STRICT!r} or {RECORD_ONLY!r}")

    @property
    def machines(self) -> int:
        """M = ceil(n^x)."""
        return _iceil(self.n**self.x)

    @property
    def memory_budget(self) -> int:
        """S = ceil(slack_c * n^(1-x) * log2(n+2)^slack_log_exp), in words."""
        base = self.n ** (1.0 - self.x)
        poly = math.log2(self.n + 2) ** self.slack_log_exp
        return _iceil(self.slack_c * base * poly)


class Message:
    """One directed transfer: ``payload_words`` data words plus 1 routing word."""

    __slots__ = ("src", "dst", "payload", "payload_words")

    def __init__(self, src: int, dst: int, payload: Any, payload_words: int):
        self.src = src
        self.dst = dst
        self.payload = payload
        self.payload_words = payload_words

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Message(src={self.src}, dst={self.dst}, words={self.payload_words})"


def word_size(obj: Any) -> int:
    """Number of 64-bit words the accounting model charges for ``obj``."""
    t = type(obj)
    if t is int or t is float or t is bool:
        return 1
    if t is complex:
        return 2
    if t is np.ndarray:
        return int(obj.size) * (2 if obj.dtype.kind == "c" else 1)
    if t is bytes or t is bytearray or t is str:
        return len(obj)
    if t is tuple or t is list:
        total = 0
        for v in obj:
            total += word_size(v)
        return total
    if t is dict:
        total = 0
        for k, v in obj.items():
            total += word_size(k) + word_size(v)
        return total
    if t is set or t is frozenset:
        total = 0
        for v in obj:
            total += word_size(v)
        return total
    if obj is None:
        return 1
    if isinstance(obj, (np.integer, np.floating, np.bool_)):
        return 1
    if isinstance(obj, np.complexfloating):
        return 2
    if isinstance(obj, np.ndarray):  # odd subclasses
        return int(obj.size) * (2 if obj.dtype.kind == "c" else 1)
    raise TypeError(f"cannot account words for payload of type {t.__name__}")


def _state_words(state: dict) -> int:
    # Top-level slot labels are bookkeeping, not data; only values are charged.
    return sum(word_size(v) for v in state.values())


@dataclass
class MetricsReport:
    """Accumulated cost of a run; serializes to a flat JSON object."""

    rounds: int = 0
    peak_machine_memory_words: int = 0
    peak_round_receive_words: int = 0
    total_work_ops: int = 0
    violations: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "peak_machine_memory_words": self.peak_machine_memory_words,
            "peak_round_receive_words": self.peak_round_receive_words,
            "total_work_ops": self.total_work_ops,
            "violations": [dict(v) for v in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "MetricsReport":
        d = json.loads(text)
        return cls(
            rounds=d["rounds"],
            peak_machine_memory_words=d["peak_machine_memory_words"],
            peak_round_receive_words=d["peak_round_receive_words"],
            total_work_ops=d["total_work_ops"],
            violations=list(d["violations"]),
        )


class MpcContext:
    """The machine grid: per-machine state dicts, inboxes, and metric ledgers.

    Machine state is only ever touched through :func:`run_round` programs (one
    machine at a time, isolated) or through the driver-side input/output
    helpers.  Nothing here is thread-shared; one context serves one algorithm
    run.
    """

    def __init__(self, config: MpcConfig):
        self.config = config
        self.machines = config.machines
        self.memory_budget = config.memory_budget
        self.round = 0
        self.states: list[dict] = [{} for _ in range(self.machines)]
        self.inboxes: list[list[Message]] = [[] for _ in range(self.machines)]
        self._pending: list[Message] = []
        self._metrics = MetricsReport()

    # -- violation plumbing -------------------------------------------------

    def _violation(self, kind: str, machine: int, amount: int) -> None:
        self._metrics.violations.append(
            {"round": self.round, "machine": machine, "kind": kind, "amount": amount}
        )
        if self.config.enforce == STRICT:
            if kind == "memory":
                raise MemoryBudgetError(machine, self.round, amount, self.memory_budget)
            raise ReceiveBudgetError(machine, self.round, amount, self.memory_budget)

    def _note_memory(self, machine: int, words: int) -> None:
        if words > self._metrics.peak_machine_memory_words:
            self._metrics.peak_machine_memory_words = words
        if words > self.memory_budget:
            self._violation("memory", machine, words)


def create_context(config: MpcConfig) -> MpcContext:
    """Fresh grid: M empty machines, round counter 0, zeroed metrics."""
    return MpcContext(config)


def scatter_input(ctx: MpcContext, data: Sequence | bytes | np.ndarray, slot: str = "input") -> None:
    """Partition ``data`` into M contiguous balanced blocks, one per machine.

    Block size is ``ceil(len(data)/M)`` with a ragged tail; machines beyond the
    data hold an empty block.  Placement is input setup, not a round, but the
    memory ledger is updated and over-budget blocks are violations.
    """
    m = ctx.machines
    total = len(data)
    block = -(-total // m) if total else 0
    for i in range(m):
        piece = data[i * block : (i + 1) * block] if block else data[:0]
        ctx.states[i][slot] = piece
        ctx._note_memory(i, _state_words(ctx.states[i]))


def place_value(ctx: MpcContext, machine: int, slot: str, value: Any) -> None:
    """Put one input value on one machine (driver-side setup, not a round)."""
    ctx.states[machine][slot] = value
    ctx._note_memory(machine, _state_words(ctx.states[machine]))


def run_round(ctx: MpcContext, program: Program) -> None:
    """Apply ``program`` to every machine over its isolated state and inbox.

    Outgoing ``(dst, payload)`` pairs are buffered for the next
    :func:`exchange`; the round counter is *not* advanced here.  Work is
    accounted as inbox words + emitted words, plus whatever explicit op count
    the program returns as an optional third element.
    """
    m = ctx.machines
    budget = ctx.memory_budget
    pending = ctx._pending
    work = 0
    for mid in range(m):
        inbox = ctx.inboxes[mid]
        ctx.inboxes[mid] = []
        result = program(mid, ctx.states[mid], inbox)
        if len(result) == 3:
            state, outgoing, extra = result
            work += int(extra)
        else:
            state, outgoing = result
        ctx.states[mid] = state
        for msg in inbox:
            work += msg.payload_words
        for dst, payload in outgoing:
            if not (0 <= dst < m):
                raise ValueError(f"machine {mid} addressed invalid destination {dst}")
            words = word_size(payload)
            pending.append(Message(mid, dst, payload, words))
            work += words
        words_resident = _state_words(state)
        if words_resident > budget or words_resident > ctx._metrics.peak_machine_memory_words:
            ctx._note_memory(mid, words_resident)
    ctx._metrics.total_work_ops += work


def exchange(ctx: MpcContext) -> None:
    """Barrier: deliver all buffered messages, advance the round counter.

    Each machine's receive volume this barrier (payload words + 1 routing word
    per message) is capped at the memory budget S.
    """
    received = [0] * ctx.machines
    for msg in ctx._pending:
        ctx.inboxes[msg.dst].append(msg)
        received[msg.dst] += msg.payload_words + 1
    ctx._pending = []
    ctx.round += 1
    ctx._metrics.rounds = ctx.round
    peak = ctx._metrics.peak_round_receive_words
    budget = ctx.memory_budget
    for mid, words in enumerate(received):
        if words > peak:
            peak = words
            ctx._metrics.peak_round_receive_words = peak
        if words > budget:
            ctx._violation("receive", mid, words)


def metrics(ctx: MpcContext) -> MetricsReport:
    """Snapshot of the accumulated metrics (violations list is shared state)."""
    m = ctx._metrics
    return MetricsReport(
        rounds=m.rounds,
        peak_machine_memory_words=m.peak_machine_memory_words,
        peak_round_receive_words=m.peak_round_receive_words,
        total_work_ops=m.total_work_ops,
        violations=list(m.violations),
    )


# -- built-in distributed sort ---------------------------------------------


def sample_sort(ctx: MpcContext, slot: str, samples_per_machine: int = 8) -> None:
    """Globally sort the items stored under ``slot`` in exactly 3 rounds.

    Items must be mutually comparable (tuples of scalars in practice).  Round
    1 sends a deterministic stride-sample from every machine to machine 0;
    round 2 broadcasts M-1 splitters; round 3 routes every item to its bucket.
    Afterwards the concatenation of ``state[slot]`` over machines 0..M-1 is
    sorted, and the multiset of items is unchanged.
    """
    m = ctx.machines

    def _sample(mid: int, state: dict, inbox: list):
        items = sorted(state.get(slot) or [])
        state[slot] = items
        if not items:
            return state, []
        stride = max(1, len(items) // samples_per_machine)
        sample = items[::stride][:samples_per_machine]
        return state, [(0, tuple(sample))]

    run_round(ctx, _sample)
    exchange(ctx)

    def _splitters(mid: int, state: dict, inbox: list):
        if mid != 0:
            return state, []
        merged = sorted(x for msg in inbox for x in msg.payload)
        if merged and m > 1:
            step = len(merged) / m
            splitters = tuple(merged[min(len(merged) - 1, int(step * (i + 1)))] for i in range(m - 1))
        else:
            splitters = ()
        return state, [(dst, splitters) for dst in range(m)]

    run_round(ctx, _splitters)
    exchange(ctx)

    def _route(mid: int, state: dict, inbox: list):
        splitters = inbox[0].payload if inbox else ()
        buckets: dict[int, list] = {}
        for item in state.get(slot) or []:
            lo, hi = 0, len(splitters)
            while lo < hi:
                mid_i = (lo + hi) // 2
                if splitters[mid_i] < item:
                    lo = mid_i + 1
                else:
                    hi = mid_i
            buckets.setdefault(lo, []).append(item)
        state[slot] = []
        return state, [(dst, tuple(items)) for dst, items in buckets.items()]

    run_round(ctx, _route)
    exchange(ctx)

    def _collect(mid: int, state: dict, inbox: list):
        items = list(state.get(slot) or [])
        for msg in inbox:
            items.extend(msg.payload)
        items.sort()
        state[slot] = items
        return state, []

    run_round(ctx, _collect)
