"""Finite-blocklength double binning over the linear deterministic wiretap channel.

Codewords live in the span of ``Y1`` values (the auxiliary is ``U = Y1``).
A message picks a bin; the local randomness picks where the covering search
starts among that bin's sub-bins. Decoding error, eavesdropper leakage
``I(W; Y2^n) / n`` and covering failure are computed exactly by enumerating
every (message, randomness, state sequence) triple with uniform weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .deterministic import DetWiretapParams, channel_matrices
from .errors import BudgetExceededError
from .limits import check_budget

MAX_QN = 20


def _rate_bits(n: int, rate: float, name: str) -> int:
    if rate < 0:
        raise ValueError(f"{name} must be nonnegative, got {rate}")
    k = round(n * rate)
    if abs(n * rate - k) > 1e-9:
        raise ValueError(f"{name}={rate} is not a multiple of 1/n with n={n}")
    return int(k)


@dataclass(frozen=True)
class BinningConfig:
    channel: DetWiretapParams
    n: int
    rate: float
    rate_confusion: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"blocklength must be at least 1, got {self.n}")
        _rate_bits(self.n, self.rate, "rate")
        _rate_bits(self.n, self.rate_confusion, "rate_confusion")

    @property
    def message_bits(self) -> int:
        return _rate_bits(self.n, self.rate, "rate")

    @property
    def confusion_bits(self) -> int:
        return _rate_bits(self.n, self.rate_confusion, "rate_confusion")

    @property
    def num_bins(self) -> int:
        return 1 << self.message_bits

    @property
    def num_subbins(self) -> int:
        return 1 << self.confusion_bits


@dataclass(frozen=True)
class Codebook:
    """``table[w, l, i]`` is the packed ``q``-bit symbol ``i`` of codeword ``(w, l)``."""

    config: BinningConfig
    table: np.ndarray
    span_basis: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.table.shape


@dataclass(frozen=True)
class SimReport:
    error_probability: float
    leakage: float
    covering_failure: float
    success_probability: float
    mutual_information_bits: float
    total_outcomes: int
    error_count: int = field(repr=False)
    failure_count: int = field(repr=False)


class _ChannelMaps:
    """Packed linear maps of one channel instance."""

    def __init__(self, p: DetWiretapParams):
        q = p.q
        self.q = q
        self.x_to_y1 = gf2.downshift_power(q, q - p.n1)
        self.s_to_y1 = gf2.downshift_power(q, q - p.m1)
        self.x_to_y2 = gf2.downshift_power(q, q - p.n2)
        self.s_to_y2 = gf2.downshift_power(q, q - p.m2)
        self.solver = gf2.affine_solver(self.x_to_y1)


def generate_codebook(cfg: BinningConfig, budget: int | None = None) -> Codebook:
    """Draw every codeword symbol i.i.d. uniform over the span of ``Y1`` values."""
    p = cfg.channel
    check_budget(cfg.num_bins * cfg.num_subbins * cfg.n, "codebook table", budget)
    a, _ = channel_matrices(p)
    basis = gf2.column_space_basis(a) if p.q else ()
    span = gf2.span_table(basis)
    rng = np.random.default_rng(cfg.seed)
    coeffs = rng.integers(0, len(span), size=(cfg.num_bins, cfg.num_subbins, cfg.n))
    table = span[coeffs]
    table.setflags(write=False)
    return Codebook(config=cfg, table=table, span_basis=basis)


def _bits(v: int, q: int) -> list[int]:
    return [(v >> i) & 1 for i in range(q)]


def encode(cb: Codebook, w: int, s_seq: Sequence[int], randomness: int):
    """Find channel inputs that make ``Y1`` equal a codeword of bin ``w``.

    Sub-bins are scanned cyclically starting at ``randomness mod L``. Each
    symbol must solve ``D^(q-n1) x = u xor D^(q-m1) s``. Returns the packed
    input sequence for the first feasible codeword, or ``None`` when none in
    the bin is feasible (a covering failure).
    """
    cfg = cb.config
    if not 0 <= w < cfg.num_bins:
        raise ValueError(f"message {w} outside [0, {cfg.num_bins})")
    if len(s_seq) != cfg.n:
        raise ValueError(f"state sequence has length {len(s_seq)}, expected {cfg.n}")
    maps = _ChannelMaps(cfg.channel)
    q = maps.q
    nsub = cfg.num_subbins
    for j in range(nsub):
        l = (randomness + j) % nsub
        xs = []
        for i, s in enumerate(s_seq):
            target = int(cb.table[w, l, i]) ^ maps.s_to_y1.apply_int(int(s))
            x = gf2.solve_in_affine(_bits(target, q), maps.x_to_y1)
            if x is None:
                break
            xs.append(sum(int(b) << k for k, b in enumerate(x)))
        else:
            return tuple(xs)
    return None


def decoded_bins(cb: Codebook) -> np.ndarray:
    """Decoder output per codeword: the lowest bin containing that sequence."""
    m, l, _ = cb.shape
    lowest: dict[tuple[int, ...], int] = {}
    keys = [[tuple(int(v) for v in cb.table[w, k]) for k in range(l)] for w in range(m)]
    for w in range(m):
        for key in keys[w]:
            lowest.setdefault(key, w)
    return np.array([[lowest[key] for key in keys[w]] for w in range(m)], dtype=np.int64)


def _check_enumeration(cfg: BinningConfig, budget: int | None) -> None:
    q, n = cfg.channel.q, cfg.n
    if q * n > MAX_QN:
        raise BudgetExceededError(
            f"q*n = {q}*{n} = {q * n} exceeds the exact-enumeration limit of {MAX_QN}")
    total = cfg.num_bins * cfg.num_subbins * (1 << (q * n))
    check_budget(total, f"bins*subbins*states = {cfg.num_bins}*{cfg.num_subbins}"
                        f"*2^{q * n}", budget)


def evaluate(cfg: BinningConfig, cb: Codebook, budget: int | None = None) -> SimReport:
    """Exact decoding error, leakage and covering failure of ``cb`` on ``cfg.channel``.

    A covering failure transmits the all-zero input; such outcomes are kept
    out of the error count but still contribute to the eavesdropper's view.
    """
    _check_enumeration(cfg, budget)
    maps = _ChannelMaps(cfg.channel)
    q, n = maps.q, cfg.n
    nbins, nsub = cfg.num_bins, cfg.num_subbins
    nstates = 1 << (q * n)
    symbols = np.arange(1 << q, dtype=np.uint64)
    s_y1 = maps.s_to_y1.apply_packed(symbols)
    s_y2 = maps.s_to_y2.apply_packed(symbols)
    idx = np.arange(nstates, dtype=np.uint64)
    mask = np.uint64((1 << q) - 1)
    state_syms = [((idx >> np.uint64(q * i)) & mask).astype(np.int64) for i in range(n)]
    fallback_y2 = np.zeros(nstates, dtype=np.uint64)
    for i in range(n):
        fallback_y2 |= s_y2[state_syms[i]] << np.uint64(q * i)

    dec = decoded_bins(cb)
    total = nbins * nsub * nstates
    errors = failures = 0
    key_chunks, count_chunks = [], []
    for w in range(nbins):
        feas = np.ones((nsub, nstates), dtype=bool)
        y2 = np.zeros((nsub, nstates), dtype=np.uint64)
        for l in range(nsub):
            for i in range(n):
                v = np.uint64(cb.table[w, l, i]) ^ s_y1
                ok = maps.solver.check.apply_packed(v) == 0
                x = maps.solver.particular.apply_packed(v)
                y2_sym = maps.x_to_y2.apply_packed(x) ^ s_y2
                feas[l] &= ok[state_syms[i]]
                y2[l] |= y2_sym[state_syms[i]] << np.uint64(q * i)
        # first feasible sub-bin at or after r, cyclically: scan 2L-1 .. 0
        first = np.empty((nsub, nstates), dtype=np.int64)
        nxt = np.full(nstates, -1, dtype=np.int64)
        for l in range(2 * nsub - 1, -1, -1):
            nxt = np.where(feas[l % nsub], l % nsub, nxt)
            if l < nsub:
                first[l] = nxt
        cols = np.arange(nstates)
        keys_w = []
        for r in range(nsub):
            chosen = first[r]
            failed = chosen < 0
            failures += int(failed.sum())
            picked = np.where(failed, 0, chosen)
            errors += int(((dec[w, picked] != w) & ~failed).sum())
            keys_w.append(np.where(failed, fallback_y2, y2[picked, cols]))
        uniq, counts = np.unique(np.concatenate(keys_w), return_counts=True)
        key_chunks.append(uniq)
        count_chunks.append(counts.astype(np.int64))

    keys = np.concatenate(key_chunks)
    counts = np.concatenate(count_chunks)
    _, inv = np.unique(keys, return_inverse=True)
    per_y = np.zeros(inv.max() + 1, dtype=np.int64)
    np.add.at(per_y, inv, counts)
    # p(w,y) / (p(w) p(y)) = c(w,y) * M / c(y) with uniform W
    ratio = (counts * nbins) / per_y[inv]
    mi = float(np.sum(counts / total * np.log2(ratio)))
    mi = max(mi, 0.0) + 0.0
    successes = total - errors - failures
    return SimReport(
        error_probability=errors / total,
        leakage=mi / n,
        covering_failure=failures / total,
        success_probability=successes / total,
        mutual_information_bits=mi,
        total_outcomes=total,
        error_count=errors,
        failure_count=failures,
    )


def simulate(cfg: BinningConfig, budget: int | None = None) -> SimReport:
    _check_enumeration(cfg, budget)
    return evaluate(cfg, generate_codebook(cfg, budget), budget)


@dataclass(frozen=True)
class ProbeRow:
    rate: float
    rate_confusion: float
    seed: int | None
    error: float
    leakage: float
    covering_failure: float


def rate_region_probe(channel: DetWiretapParams, n: int, seeds: Sequence[int],
                      rate_confusion: float = 0.0, max_rate: float | None = None,
                      budget: int | None = None) -> list[ProbeRow]:
    """Sweep ``R = 0, 1/n, ...`` at a fixed confusion rate.

    Emits one row per (rate, seed) followed by a mean row (``seed=None``) for
    each rate. Rates whose cells exceed the enumeration budget are skipped.
    """
    if max_rate is None:
        max_rate = channel.n1 + 1.0 / n
    rows: list[ProbeRow] = []
    k = 0
    while k / n <= max_rate + 1e-12:
        rate = k / n
        cfg0 = BinningConfig(channel, n, rate, rate_confusion, 0)
        try:
            _check_enumeration(cfg0, budget)
        except BudgetExceededError:
            break
        cell = []
        for seed in seeds:
            rep = simulate(BinningConfig(channel, n, rate, rate_confusion, seed), budget)
            cell.append(ProbeRow(rate, rate_confusion, seed, rep.error_probability,
                                 rep.leakage, rep.covering_failure))
        rows.extend(cell)
        if cell:
            rows.append(ProbeRow(
                rate, rate_confusion, None,
                math.fsum(c.error for c in cell) / len(cell),
                math.fsum(c.leakage for c in cell) / len(cell),
                math.fsum(c.covering_failure for c in cell) / len(cell),
            ))
        k += 1
    return rows
