"""Budgeted massively-parallel-computation simulator with distributed string
matching (exact and ?/+/* wildcards) and a constant-round distributed FFT."""

from .exact_match import (
    MatchSet,
    kmp_failure,
    kmp_search,
    match_exact,
    match_large_pattern,
    match_small_pattern,
)
from .fft_engine import (
    dft_naive,
    fft_local,
    ifft_local,
    mpc_convolution,
    mpc_fft,
    ntt_local,
)
from .hashing import MERSENNE_61, HashSystem, hash_sequence, make_system_pair
from .runtime import (
    BudgetError,
    MemoryBudgetError,
    MetricsReport,
    MpcConfig,
    MpcContext,
    ReceiveBudgetError,
    create_context,
    exchange,
    metrics,
    run_round,
    sample_sort,
    scatter_input,
    word_size,
)
from .wildcard_plus import (
    PlusAlignment,
    PlusMatchReport,
    RleBlock,
    RleString,
    greater_than_match,
    match_plus,
    rle_encode,
    rle_encode_distributed,
    subset_match,
)
from .wildcard_question import match_question
from .wildcard_star import (
    StarDpTable,
    StarPattern,
    pointer_doubling_reach,
    split_subpatterns,
    star_base_table,
    star_match_dp,
    star_match_nonprefix,
    star_match_sequential,
    star_merge_f,
)

__all__ = [
    "BudgetError",
    "HashSystem",
    "MatchSet",
    "MemoryBudgetError",
    "MERSENNE_61",
    "MetricsReport",
    "MpcConfig",
    "MpcContext",
    "PlusAlignment",
    "PlusMatchReport",
    "ReceiveBudgetError",
    "RleBlock",
    "RleString",
    "StarDpTable",
    "StarPattern",
    "create_context",
    "dft_naive",
    "exchange",
    "fft_local",
    "greater_than_match",
    "hash_sequence",
    "ifft_local",
    "kmp_failure",
    "kmp_search",
    "make_system_pair",
    "match_exact",
    "match_large_pattern",
    "match_plus",
    "match_question",
    "match_small_pattern",
    "metrics",
    "mpc_convolution",
    "mpc_fft",
    "ntt_local",
    "pointer_doubling_reach",
    "rle_encode",
    "rle_encode_distributed",
    "run_round",
    "sample_sort",
    "scatter_input",
    "split_subpatterns",
    "star_base_table",
    "star_match_dp",
    "star_match_nonprefix",
    "star_match_sequential",
    "star_merge_f",
    "subset_match",
    "word_size",
]

__version__ = "0.1.0"
