"""Fourier transforms, sequential and distributed, plus exact NTT backends.

Sign convention: the *forward* transform is ``a*_k = sum_j a_j e^{+2 pi i jk/n}``
(positive exponent); the inverse uses the conjugate kernel and a single 1/n
scaling.  Many libraries use the opposite sign — comparisons against them need
a conjugate.

The distributed transform is the four-step decomposition over n = M*S with
M <= S: residue classes z = j mod M are colocated, length-S transforms run
locally, twiddle factors ``w_n^{z j}`` are applied, a transpose colocates
fixed-j columns, length-M transforms finish the job, and a final permutation
restores natural order — 3 exchange rounds.  Convolution fuses two forward
transforms (final permutation dropped), a pointwise product in the transposed
layout, and the mirrored inverse (initial permutation dropped): 4 rounds.

Exact integer convolution uses the same script over prime fields (number
theoretic transform), with 1 prime for small values or 3 primes + Chinese
remaindering for values up to 2^64.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .runtime import MpcContext, exchange, run_round, scatter_input

__all__ = [
    "NTT_PRIMES",
    "NTT_ROOTS",
    "FftPlan",
    "make_plan",
    "dft_naive",
    "fft_local",
    "ifft_local",
    "ntt_local",
    "bit_reversal_perm",
    "mpc_fft",
    "mpc_convolution",
    "register_conv_input",
    "convolution_rounds",
    "collect_convolution_output",
    "ConvLayout",
]

#: NTT-friendly 31-bit primes p = c * 2^k + 1 with a known primitive root;
#: max transform lengths 2^27, 2^25, 2^26 respectively.
NTT_PRIMES = (2013265921, 2113929217, 1811939329)
NTT_ROOTS = {2013265921: 31, 2113929217: 5, 1811939329: 13}

KERNEL_FLOAT = "float"
KERNEL_NTT = "ntt"
KERNEL_NTT_CRT = "ntt-crt"


# -- sequential transforms --------------------------------------------------

_bitrev_cache: dict[int, np.ndarray] = {}


def bit_reversal_perm(m: int) -> np.ndarray:
    """pi(i) = i with its log2(m) bits reversed."""
    if m & (m - 1) or m < 1:
        raise ValueError("size must be a power of two")
    got = _bitrev_cache.get(m)
    if got is None:
        bits = m.bit_length() - 1
        perm = np.zeros(m, dtype=np.int64)
        for b in range(bits):
            perm = (perm << 1) | ((np.arange(m) >> b) & 1)
        got = _bitrev_cache[m] = perm
    return got


def dft_naive(a: Sequence[complex]) -> np.ndarray:
    """O(n^2) transform straight from the definition; the numeric oracle.

    Evaluated in row chunks so n up to 2^14 stays within memory.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = len(a)
    out = np.empty(n, dtype=np.complex128)
    js = np.arange(n)
    step = max(1, (1 << 22) // max(n, 1))
    for k0 in range(0, n, step):
        ks = np.arange(k0, min(n, k0 + step))
        out[ks] = np.exp(2j * np.pi * np.outer(ks, js) / n) @ a
    return out


_fft_tw_cache: dict[tuple[int, bool], list[np.ndarray]] = {}


def _fft_twiddles(n: int, inverse: bool) -> list[np.ndarray]:
    key = (n, inverse)
    got = _fft_tw_cache.get(key)
    if got is None:
        sign = -1j if inverse else 1j
        got = []
        half = 1
        while half < n:
            got.append(np.exp(sign * np.pi / half * np.arange(half)))
            half *= 2
        _fft_tw_cache[key] = got
    return got


def fft_local(a, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 transform along the last axis; no scaling on inverse."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    out = a[..., bit_reversal_perm(n)].copy()
    for level, w in enumerate(_fft_twiddles(n, inverse)):
        half = 1 << level
        step = half * 2
        shaped = out.reshape(out.shape[:-1] + (n // step, step))
        u = shaped[..., :half]
        t = shaped[..., half:] * w
        shaped[..., half:] = u - t
        shaped[..., :half] = u + t
    return out


def ifft_local(a) -> np.ndarray:
    """Scaled inverse: ifft_local(fft_local(a)) == a."""
    a = np.asarray(a, dtype=np.complex128)
    return fft_local(a, inverse=True) / a.shape[-1]


def _pow_table(base: int, count: int, p: int) -> np.ndarray:
    """[base^0 .. base^(count-1)] mod p as uint64 (values < p < 2^31)."""
    out = np.empty(max(count, 1), dtype=np.uint64)
    out[0] = 1
    filled = 1
    while filled < count:
        take = min(filled, count - filled)
        step = np.uint64(pow(base, filled, p))
        out[filled:filled + take] = out[:take] * step % np.uint64(p)
        filled += take
    return out[:count]


_ntt_tw_cache: dict[tuple[int, int, bool], list[np.ndarray]] = {}


def _ntt_twiddles(n: int, p: int, inverse: bool) -> list[np.ndarray]:
    key = (n, p, inverse)
    got = _ntt_tw_cache.get(key)
    if got is None:
        if (p - 1) % n:
            raise ValueError(f"modulus {p} has no order-{n} root")
        root = pow(NTT_ROOTS[p], (p - 1) // n, p)
        if inverse:
            root = pow(root, p - 2, p)
        got = []
        half = 1
        while half < n:
            got.append(_pow_table(pow(root, n // (2 * half), p), half, p))
            half *= 2
        _ntt_tw_cache[key] = got
    return got


@lru_cache(maxsize=256)
def _ntt_matrix(n: int, p: int, inverse: bool) -> np.ndarray:
    root = pow(NTT_ROOTS[p], (p - 1) // n, p)
    if inverse:
        root = pow(root, p - 2, p)
    tbl = _pow_table(root, n, p)
    return tbl[np.outer(np.arange(n), np.arange(n)) % n]


def ntt_local(a, p: int, inverse: bool = False) -> np.ndarray:
    """Radix-2 number theoretic transform mod p along the last axis (unscaled)."""
    a = np.asarray(a, dtype=np.uint64)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    pp = np.uint64(p)
    if 1 < n <= 64:
        # direct matrix evaluation; 16-bit limb split keeps every uint64
        # intermediate below 2^53
        w = _ntt_matrix(n, p, inverse)
        hi = (a >> np.uint64(16)) @ w % pp
        lo = (a & np.uint64(0xFFFF)) @ w % pp
        return ((hi << np.uint64(16)) + lo) % pp
    out = a[..., bit_reversal_perm(n)].copy()
    for level, w in enumerate(_ntt_twiddles(n, p, inverse)):
        half = 1 << level
        step = half * 2
        shaped = out.reshape(out.shape[:-1] + (n // step, step))
        u = shaped[..., :half]
        t = shaped[..., half:] * w % pp
        shaped[..., half:] = (u + pp - t) % pp
        shaped[..., :half] = (u + t) % pp
    return out


# -- distributed plan -------------------------------------------------------


@dataclass(frozen=True)
class FftPlan:
    """Shape of one distributed transform: n = machines * chunk, machines <= chunk."""

    n: int
    machines: int
    chunk: int

    @property
    def bitrev(self) -> np.ndarray:
        """Machine-index bit reversal; sorting by it makes residue classes
        contiguous chunks."""
        return bit_reversal_perm(self.machines)


def make_plan(grid_machines: int, need: int) -> FftPlan:
    """Smallest power-of-two transform covering ``need``, on as many machines
    as the grid and the M <= S constraint allow."""
    n = 1
    while n < max(need, 1):
        n <<= 1
    mf = 1
    while mf * 2 <= grid_machines and (mf * 2) * (mf * 2) <= n:
        mf <<= 1
    return FftPlan(n=n, machines=mf, chunk=n // mf)


@lru_cache(maxsize=512)
def _forward_twiddle_float_cached(n: int, chunk: int, z: int) -> np.ndarray:
    return np.exp(2j * np.pi * z * np.arange(chunk) / n)


def _forward_twiddle_float(plan: FftPlan, z: int) -> np.ndarray:
    return _forward_twiddle_float_cached(plan.n, plan.chunk, z)


@lru_cache(maxsize=1024)
def _twiddle_ntt_cached(n: int, chunk: int, z: int, p: int, inverse: bool) -> np.ndarray:
    root = pow(NTT_ROOTS[p], (p - 1) // n, p)
    if inverse:
        root = pow(root, p - 2, p)
    return _pow_table(pow(root, z, p), chunk, p)


def _twiddle_ntt(plan: FftPlan, z: int, p: int, inverse: bool) -> np.ndarray:
    return _twiddle_ntt_cached(plan.n, plan.chunk, z, p, inverse)


def _split_by(dsts: np.ndarray) -> dict:
    """Group positions by destination id: {dst: index array}."""
    if len(dsts) == 0:
        return {}
    if len(dsts) <= 128:
        buckets: dict[int, list] = {}
        for i, d in enumerate(dsts.tolist()):
            buckets.setdefault(int(d), []).append(i)
        return {d: np.asarray(ix, dtype=np.int64) for d, ix in buckets.items()}
    order = np.argsort(dsts, kind="stable")
    cuts = np.flatnonzero(np.diff(dsts[order])) + 1
    groups = np.split(order, cuts)
    return {int(dsts[g[0]]): g for g in groups}


# -- distributed FFT (3 rounds) --------------------------------------------


def mpc_fft(ctx: MpcContext, a, keep_layout: bool = False) -> np.ndarray:
    """Forward transform of a power-of-two-length complex vector; 3 exchanges.

    With ``keep_layout`` the column machines retain their post-transpose
    matrices under state key ``"layout_cols"`` for structural inspection.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = len(a)
    if n & (n - 1) or n < 1:
        raise ValueError("input length must be a power of two")
    plan = make_plan(ctx.machines, n)
    mf, chunk = plan.machines, plan.chunk
    cols_per = chunk // mf
    grid = ctx.machines
    out_block = -(-n // grid)
    scatter_input(ctx, a, slot="fft_in")

    def r1_route(mid: int, state: dict, inbox: list):
        vals = state.pop("fft_in")
        base = mid * (-(-n // grid))
        idx = base + np.arange(len(vals))
        out = []
        for z in range(mf):
            mask = (idx % mf) == z
            if mask.any():
                out.append((z, ("r", idx[mask] // mf, vals[mask])))
        return state, out

    run_round(ctx, r1_route)
    exchange(ctx)

    def r2_transform(mid: int, state: dict, inbox: list):
        if mid >= mf:
            return state, []
        vec = np.zeros(chunk, dtype=np.complex128)
        for msg in inbox:
            _, offs, vals = msg.payload
            vec[offs] = vals
        spec = fft_local(vec) * _forward_twiddle_float(plan, mid)
        out = []
        for c in range(mf):
            sl = spec[c * cols_per:(c + 1) * cols_per]
            out.append((c, ("c", sl)))
        return state, out

    run_round(ctx, r2_transform)
    exchange(ctx)

    def r3_transform(mid: int, state: dict, inbox: list):
        if mid >= mf:
            return state, []
        mat = np.zeros((mf, cols_per), dtype=np.complex128)
        for msg in inbox:
            mat[msg.src] = msg.payload[1]
        if keep_layout:
            state["layout_cols"] = (mid * cols_per, mat.copy())
        spec = fft_local(mat.T).T  # transform over the z axis per column
        # spec[q, j_local]: output index q*chunk + mid*cols_per + j_local
        j_global = mid * cols_per + np.arange(cols_per)
        out_idx = (np.arange(mf)[:, None] * chunk + j_global[None, :]).ravel()
        flat = spec.ravel()
        out = []
        for dst, sel in _split_by(out_idx // out_block).items():
            out.append((dst, ("o", out_idx[sel] - dst * out_block, flat[sel])))
        return state, out

    run_round(ctx, r3_transform)
    exchange(ctx)

    def r4_collect(mid: int, state: dict, inbox: list):
        lo = mid * out_block
        width = max(0, min(n, lo + out_block) - lo)
        vec = np.zeros(width, dtype=np.complex128)
        for msg in inbox:
            _, offs, vals = msg.payload
            vec[offs] = vals
        state["fft_out"] = vec
        return state, []

    run_round(ctx, r4_collect)
    return np.concatenate([ctx.states[i]["fft_out"] for i in range(grid)])


# -- batched distributed convolution (4 rounds) -----------------------------


@dataclass(frozen=True)
class ConvLayout:
    """Where a convolution batch left its outputs."""

    kernel: str
    out_len: int
    out_block: int
    plan: FftPlan


def register_conv_input(state: dict, side: str, key, indices, values,
                        reg_slot: str = "conv_reg") -> None:
    """Queue sparse coefficients (side 'A' or 'B') for the next conv batch."""
    idx = np.asarray(indices, dtype=np.int64)
    state.setdefault(reg_slot, []).append((side, key, idx, values))


def _crt_primes(kernel: str) -> tuple[int, ...]:
    if kernel == KERNEL_NTT:
        return (NTT_PRIMES[0],)
    if kernel == KERNEL_NTT_CRT:
        return NTT_PRIMES
    return ()


def _garner(res: np.ndarray, primes: tuple[int, ...]) -> np.ndarray:
    """Exact CRT lift of per-prime residues (axis 0), valid for true < 2^64."""
    if len(primes) == 1:
        return res[0].copy()
    p0, p1, p2 = (np.uint64(p) for p in primes)
    r0, r1, r2 = res[0], res[1], res[2]
    inv01 = np.uint64(pow(primes[0] % primes[1], primes[1] - 2, primes[1]))
    t1 = (r1 + p1 - r0 % p1) % p1 * inv01 % p1
    p0p1_mod2 = np.uint64(pow(primes[0] * primes[1] % primes[2], primes[2] - 2, primes[2]))
    mid = (r0 % p2 + np.uint64(primes[0] % primes[2]) * (t1 % p2)) % p2
    t2 = (r2 + p2 - mid) % p2 * p0p1_mod2 % p2
    return r0 + np.uint64(primes[0]) * t1 + np.uint64(primes[0] * primes[1]) * t2


def convolution_rounds(ctx: MpcContext, kernel: str, da: int, db: int,
                       prepare: Callable | None = None,
                       reg_slot: str = "conv_reg",
                       sum_keys: Callable | None = None) -> ConvLayout:
    """Run C_key = A_key (*) B_key for every registered key: exactly 4 exchanges.

    Inputs come from ``state[reg_slot]`` entries (see :func:`register_conv_input`)
    on any machines; ``prepare(mid, state, inbox)`` — if given — runs inside the
    first round's program to produce them (so callers can fold registration into
    the round that consumes their previous exchange).  Output values land in
    natural block layout over all grid machines, tagged "o" in the inbox after
    the 4th exchange; decode with :func:`collect_convolution_output`.

    ``sum_keys`` maps each input key to an output key; keys sharing an output
    key have their products summed in the frequency domain, so whole indicator
    families cost one output row instead of one per key (convolution is
    bilinear, so the sum commutes with the inverse transform).

    The float kernel convolves real/complex values with ~1e-9 relative error;
    'ntt' is exact for non-negative integers with results < 2013265921;
    'ntt-crt' is exact for results < 2^64 (sums after key merging included).
    """
    out_len = max(da + db - 1, 1)
    plan = make_plan(ctx.machines, out_len)
    mf, chunk, nfft = plan.machines, plan.chunk, plan.n
    cols_per = chunk // mf
    grid = ctx.machines
    out_block = -(-out_len // grid)
    primes = _crt_primes(kernel)
    npr = len(primes)

    def r1_route(mid: int, state: dict, inbox: list):
        if prepare is not None:
            prepare(mid, state, inbox)
        entries = state.pop(reg_slot, [])
        grouped: dict[int, list] = {}
        for side, key, idx, vals in entries:
            if kernel == KERNEL_FLOAT:
                vals = np.asarray(vals)  # float64 travels at 1 word/entry
            else:
                vals = np.asarray(vals, dtype=np.uint64)
            for z, sel in _split_by(idx % mf).items():
                grouped.setdefault(z, []).append(
                    (side, key, idx[sel] // mf, vals[sel]))
        return state, [(z, ("r", parts)) for z, parts in grouped.items()]

    run_round(ctx, r1_route)
    exchange(ctx)

    def r2_forward(mid: int, state: dict, inbox: list):
        if mid >= mf:
            return state, []
        rows: dict[tuple, np.ndarray] = {}
        for msg in inbox:
            if msg.payload[0] != "r":
                continue
            for side, key, offs, vals in msg.payload[1]:
                rk = (side, key)
                if rk not in rows:
                    if kernel == KERNEL_FLOAT:
                        rows[rk] = np.zeros(chunk, dtype=np.complex128)
                    else:
                        rows[rk] = np.zeros((npr, chunk), dtype=np.uint64)
                if kernel == KERNEL_FLOAT:
                    np.add.at(rows[rk], offs, vals)
                else:
                    for pi, p in enumerate(primes):
                        np.add.at(rows[rk][pi], offs, vals % np.uint64(p))
                        rows[rk][pi] %= np.uint64(p)
        keys = sorted(rows)
        if not keys:
            return state, []
        stack = np.stack([rows[rk] for rk in keys])  # (K, chunk) or (K, npr, chunk)
        if kernel == KERNEL_FLOAT:
            spec = fft_local(stack) * _forward_twiddle_float(plan, mid)
        else:
            spec = np.empty_like(stack)
            for pi, p in enumerate(primes):
                tw = _twiddle_ntt(plan, mid, p, False)
                spec[:, pi, :] = ntt_local(stack[:, pi, :], p) * tw % np.uint64(p)
        out_msgs = []
        for c in range(mf):
            sl = spec[..., c * cols_per:(c + 1) * cols_per]
            out_msgs.append((c, ("c", [(rk, sl[ki]) for ki, rk in enumerate(keys)])))
        return state, out_msgs

    run_round(ctx, r2_forward)
    exchange(ctx)

    def r3_pointwise(mid: int, state: dict, inbox: list):
        if mid >= mf:
            return state, []
        mats: dict[tuple, np.ndarray] = {}
        for msg in inbox:
            if msg.payload[0] != "c":
                continue
            for rk, sl in msg.payload[1]:
                if rk not in mats:
                    if kernel == KERNEL_FLOAT:
                        mats[rk] = np.zeros((mf, cols_per), dtype=np.complex128)
                    else:
                        mats[rk] = np.zeros((npr, mf, cols_per), dtype=np.uint64)
                mats[rk][..., msg.src, :] = sl
        pair_keys = sorted(key for side, key in mats
                           if side == "A" and ("B", key) in mats)
        if not pair_keys:
            return state, []
        astack = np.stack([mats[("A", k)] for k in pair_keys]).swapaxes(-2, -1)
        bstack = np.stack([mats[("B", k)] for k in pair_keys]).swapaxes(-2, -1)
        if kernel == KERNEL_FLOAT:
            prod = fft_local(astack) * fft_local(bstack)
            chs = fft_local(prod, inverse=True).swapaxes(-2, -1)
        else:
            chs = np.empty_like(astack)
            for pi, p in enumerate(primes):
                prod = ntt_local(astack[:, pi], p) * ntt_local(bstack[:, pi], p) % np.uint64(p)
                chs[:, pi] = ntt_local(prod, p, inverse=True)
            chs = chs.swapaxes(-2, -1)
        if sum_keys is not None:
            fold: dict = {}
            for ki, k in enumerate(pair_keys):
                fold.setdefault(sum_keys(k), []).append(ki)
            pair_keys = sorted(fold)
            merged = np.empty((len(pair_keys),) + chs.shape[1:], dtype=chs.dtype)
            for gi, gk in enumerate(pair_keys):
                acc = chs[fold[gk]].sum(axis=0)
                if kernel != KERNEL_FLOAT:
                    for pi, p in enumerate(primes):
                        acc[pi] %= np.uint64(p)
                merged[gi] = acc
            chs = merged
        out_msgs = []
        for t in range(mf):
            out_msgs.append((t, ("t", [(k, chs[ki][..., t, :])
                                       for ki, k in enumerate(pair_keys)])))
        return state, out_msgs

    run_round(ctx, r3_pointwise)
    exchange(ctx)

    def r4_inverse(mid: int, state: dict, inbox: list):
        if mid >= mf:
            return state, []
        rows: dict = {}
        for msg in inbox:
            if msg.payload[0] != "t":
                continue
            for key, sl in msg.payload[1]:
                if key not in rows:
                    if kernel == KERNEL_FLOAT:
                        rows[key] = np.zeros(chunk, dtype=np.complex128)
                    else:
                        rows[key] = np.zeros((npr, chunk), dtype=np.uint64)
                rows[key][..., msg.src * cols_per:(msg.src + 1) * cols_per] = sl
        keys = sorted(rows)
        if not keys:
            return state, []
        idx_all = np.int64(mid) + np.int64(mf) * np.arange(chunk, dtype=np.int64)
        keep = idx_all < out_len
        idx = idx_all[keep]
        groups = _split_by(idx // out_block)
        stack = np.stack([rows[k] for k in keys])
        if kernel == KERNEL_FLOAT:
            stack = stack * np.conj(_forward_twiddle_float(plan, mid))
            vals = fft_local(stack, inverse=True)[..., keep] / nfft
        else:
            for pi, p in enumerate(primes):
                tw = _twiddle_ntt(plan, mid, p, True)
                inv_n = np.uint64(pow(nfft, p - 2, p))
                v = ntt_local(stack[:, pi, :] * tw % np.uint64(p), p, inverse=True)
                stack[:, pi, :] = v * inv_n % np.uint64(p)
            vals = _garner(stack.swapaxes(0, 1), primes)[..., keep]
        out_msgs = []
        for dst, sel in groups.items():
            offs = idx[sel] - dst * out_block
            out_msgs.append((dst, ("o", [(k, offs, vals[ki][..., sel])
                                         for ki, k in enumerate(keys)])))
        return state, out_msgs

    run_round(ctx, r4_inverse)
    exchange(ctx)
    return ConvLayout(kernel=kernel, out_len=out_len, out_block=out_block, plan=plan)


def collect_convolution_output(layout: ConvLayout, mid: int, inbox: list):
    """Decode the delivery messages after the 4th exchange.

    Returns (lo, hi, {key: values over [lo, hi)}), global 0-based indices.
    """
    lo = mid * layout.out_block
    hi = min(layout.out_len, lo + layout.out_block)
    width = max(0, hi - lo)
    dtype = np.complex128 if layout.kernel == KERNEL_FLOAT else np.uint64
    rows: dict = {}
    for msg in inbox:
        if msg.payload[0] != "o":
            continue
        for key, offs, vals in msg.payload[1]:
            if key not in rows:
                rows[key] = np.zeros(width, dtype=dtype)
            rows[key][offs] = vals
    return lo, hi, rows


def mpc_convolution(ctx: MpcContext, a, b, exact: bool = False) -> np.ndarray:
    """Linear convolution of two vectors in exactly 4 exchange rounds.

    Float path (default) returns complex128 of length la+lb-1; ``exact=True``
    uses the 3-prime NTT and returns uint64, valid for non-negative integer
    inputs with every output < 2^64.
    """
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.uint64 if exact else np.complex128)
    kernel = KERNEL_NTT_CRT if exact else KERNEL_FLOAT
    dt = np.uint64 if exact else np.complex128
    scatter_input(ctx, np.asarray(a, dtype=dt), slot="cv_a")
    scatter_input(ctx, np.asarray(b, dtype=dt), slot="cv_b")
    grid = ctx.machines
    ablock, bblock = -(-la // grid), -(-lb // grid)

    def prepare(mid: int, state: dict, inbox: list):
        av = state.pop("cv_a")
        bv = state.pop("cv_b")
        if len(av):
            register_conv_input(state, "A", 0, mid * ablock + np.arange(len(av)), av)
        if len(bv):
            register_conv_input(state, "B", 0, mid * bblock + np.arange(len(bv)), bv)

    layout = convolution_rounds(ctx, kernel, la, lb, prepare=prepare)

    def collect(mid: int, state: dict, inbox: list):
        lo, hi, rows = collect_convolution_output(layout, mid, inbox)
        state["cv_out"] = rows.get(0, np.zeros(max(0, hi - lo), dtype=dt))
        return state, []

    run_round(ctx, collect)
    return np.concatenate([ctx.states[i]["cv_out"] for i in range(grid)])[:la + lb - 1]
