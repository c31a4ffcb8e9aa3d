"""Exact and Monte Carlo block-error probabilities under MAP decoding."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _rng
from .channel import DiscreteChannel
from .code import LinearCode, rank_profile
from .errors import CodeTooLargeForMAP, InputError, TooLarge
from .tensor_fn import MAX_EXACT_N

MAX_MAP_CODEWORDS = 2**16
TIE_TOL = 1e-9
_CELLS = 2**22  # batch x codewords per likelihood slab


@dataclass(frozen=True)
class SimResult:
    p_b_estimate: float
    stderr: float
    trials: int
    seed: int
    exact: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def erasure_exact(code: LinearCode, lam: float):
    """``(p_amb, p_b)`` on the k-ary erasure channel with erasure probability ``lam``.

    Given the unerased set ``S``, the decoder's candidates are a coset of size
    ``k^(dim C - dim C_S)`` and it guesses uniformly among them.
    """
    if not 0.0 <= lam <= 1.0:
        raise InputError(f"lambda must lie in [0, 1], got {lam}")
    if code.n > MAX_EXACT_N:
        raise TooLarge(f"n={code.n} > {MAX_EXACT_N}")
    n, dim, k = code.n, code.dim, code.k
    prof = rank_profile(code)
    s = np.arange(n + 1)
    w = np.array([(1.0 - lam) ** i * lam ** (n - i) for i in s])
    r = np.arange(dim + 1)
    amb = (w[:, None] * prof * (r < dim)).sum()
    p_b = (w[:, None] * prof * -np.expm1((r - dim) * math.log(k))).sum()
    return float(amb), float(p_b)


def _sample_outputs(rng, cdf, x):
    u = rng.random(x.shape)
    y = (u[..., None] >= cdf[x]).sum(axis=-1)
    return np.minimum(y, cdf.shape[1] - 1)


def monte_carlo_pb(code: LinearCode, channel: DiscreteChannel, trials: int, seed: int,
                   tie_break: str = "first", transmit: str = "uniform") -> SimResult:
    """Estimate the MAP block-error probability by exhaustive decoding.

    Codewords are ranked lexicographically; ``tie_break`` picks the first or
    last maximizer in that order. ``transmit="zero"`` always sends the zero word
    and scores a tie among ``m`` maximizers containing it as ``1 - 1/m`` errors,
    which keeps the estimate unbiased for linear codes whatever the tie-break.
    """
    if code.size > MAX_MAP_CODEWORDS:
        raise CodeTooLargeForMAP(f"{code.size} codewords exceed {MAX_MAP_CODEWORDS}")
    if channel.input_size != code.k:
        raise InputError(f"channel alphabet {channel.input_size} != field order {code.k}")
    if tie_break not in ("first", "last") or transmit not in ("uniform", "zero"):
        raise InputError("tie_break must be first|last and transmit uniform|zero")
    if trials < 1:
        raise InputError("need at least one trial")
    cws = code.all_codewords()
    cws = cws[np.lexsort(cws.T[::-1])]
    M, n = cws.shape
    W = channel.transition
    with np.errstate(divide="ignore"):
        logW = np.log(W)
    cdf = np.cumsum(W, axis=1)
    zero_idx = 0  # the zero word sorts first
    errors = 0.0
    sub = max(1, _CELLS // M)
    for t0, rng in _rng.blocks(seed, trials):
        b = min(_rng.BLOCK, trials - t0)
        sent = rng.integers(0, M, b) if transmit == "uniform" else np.full(b, zero_idx)
        y = _sample_outputs(rng, cdf, cws[sent])
        for s0 in range(0, b, sub):
            ys = y[s0:s0 + sub]
            score = np.zeros((ys.shape[0], M))
            for i in range(n):
                score += logW[cws[None, :, i], ys[:, i, None]]
            top = score.max(axis=1, keepdims=True)
            best = score >= top - TIE_TOL
            if transmit == "zero":
                errors += float((1.0 - best[:, zero_idx] / best.sum(axis=1)).sum())
                continue
            if tie_break == "first":
                dec = best.argmax(axis=1)
            else:
                dec = M - 1 - best[:, ::-1].argmax(axis=1)
            errors += int((dec != sent[s0:s0 + sub]).sum())
    p = errors / trials
    exact = None
    if channel.kind == "erasure" and code.n <= MAX_EXACT_N:
        exact = erasure_exact(code, channel.param)[1]
    return SimResult(p, math.sqrt(p * (1.0 - p) / trials), trials, seed, exact)
