"""Shared test utilities: context builders and instance generators.

Oracle logic lives in mpcmatch.oracles (importable, CLI-exposed); anything
here is test-only convenience.
"""

from __future__ import annotations

import random

from mpcmatch.runtime import RECORD_ONLY, MpcConfig, create_context


def ctx_for(n: int, x: float = 0.5, slack_c: int = 4, slack_log_exp: int = 2,
            enforce: str = "strict"):
    return create_context(MpcConfig(n=n, x=x, slack_c=slack_c,
                                    slack_log_exp=slack_log_exp, enforce=enforce))


def tight_ctx(n: int, x: float = 0.5):
    """Context with minimal slack, used to observe structure without aborting."""
    return create_context(MpcConfig(n=n, x=x, slack_c=1, slack_log_exp=0,
                                    enforce=RECORD_ONLY))


def random_bytes(rng: random.Random, n: int, alphabet: bytes = b"ab") -> bytes:
    return bytes(rng.choice(alphabet) for _ in range(n))


def all_strings(alphabet: bytes, length: int):
    """Every string of exactly `length` over `alphabet`, as bytes."""
    if length == 0:
        yield b""
        return
    for prefix in all_strings(alphabet, length - 1):
        for ch in alphabet:
            yield prefix + bytes([ch])
