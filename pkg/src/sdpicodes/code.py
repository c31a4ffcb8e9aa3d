"""Linear codes over GF(p^ell).

Covers codeword enumeration, weight distributions, the MacWilliams transform,
Fourier analysis on ``F_k^n``, projected dimensions and the conditional
entropy of a codeword seen through an erasure channel.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import _rng
from .errors import (
    CodeTooLarge,
    EmptyGenerator,
    InputError,
    NonIntegerResult,
    TooLarge,
    TooLargeForExact,
    ZeroDimensional,
)
from .gf import Field, Matrix, _rref, null_space, rank
from .prob_space import make_uniform
from .tensor_fn import MAX_EXACT_N, TensorFn

MAX_CODEWORDS = 2**24
MAX_FOURIER = 10**6
_CHUNK = 2**16


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Row space of ``generator``; the generator is kept in reduced echelon form."""

    field: Field
    generator: Matrix

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def dim(self) -> int:
        return self.generator.rows

    @property
    def k(self) -> int:
        return self.field.k

    @property
    def size(self) -> int:
        return self.field.k**self.dim

    def __repr__(self):
        return f"LinearCode([{self.n},{self.dim}] over GF({self.field.p}^{self.field.ell}))"

    def __eq__(self, other):
        return isinstance(other, LinearCode) and self.generator == other.generator

    def __hash__(self):
        return hash((self.field, self.generator.entries.tobytes(), self.generator.entries.shape))

    def dual(self) -> "LinearCode":
        return _dual(self)

    def codewords(self, chunk: int = _CHUNK):
        """Yield codeword blocks ``(m, n)`` in lexicographic message order."""
        if self.size > MAX_CODEWORDS:
            raise CodeTooLarge(f"{self.size} codewords exceed {MAX_CODEWORDS}")
        f, G, k = self.field, self.generator.entries, self.field.k
        pw = k ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        for start in range(0, self.size, chunk):
            idx = np.arange(start, min(start + chunk, self.size), dtype=np.int64)
            msg = (idx[:, None] // pw) % k
            cw = np.zeros((idx.size, self.n), dtype=np.int64)
            for t in range(self.dim):
                cw = f.add(cw, f.mul(msg[:, t, None], G[None, t, :]))
            yield cw

    def all_codewords(self) -> np.ndarray:
        return np.concatenate(list(self.codewords()), axis=0)


def _from_rows(field: Field, rows, n: int) -> LinearCode:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    A, pivots = _rref(field, rows) if rows.shape[0] else (rows, [])
    return LinearCode(field, Matrix(field, A[: len(pivots)].reshape(len(pivots), n)))


@functools.lru_cache(maxsize=256)
def _dual(code: LinearCode) -> LinearCode:
    return _from_rows(code.field, null_space(code.generator).entries, code.n)


def make_code(field: Field, rows) -> LinearCode:
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        raise EmptyGenerator("generator needs at least one row")
    if rows.ndim == 1:
        rows = rows[None, :]
    Matrix(field, rows)  # range check
    return _from_rows(field, rows, rows.shape[1])


def code_from_matrix(m: Matrix) -> LinearCode:
    return make_code(m.field, m.entries)


@dataclass(frozen=True)
class WeightDistribution:
    counts: tuple
    n: int
    code_size: int

    def __post_init__(self):
        if len(self.counts) != self.n + 1:
            raise InputError("need n + 1 weight counts")
        if self.counts[0] != 1 or sum(self.counts) != self.code_size:
            raise InputError("weight distribution must have a_0 = 1 and sum |C|")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float)


@functools.lru_cache(maxsize=256)
def weight_distribution(code: LinearCode) -> WeightDistribution:
    counts = np.zeros(code.n + 1, dtype=np.int64)
    for cw in code.codewords():
        counts += np.bincount((cw != 0).sum(axis=1), minlength=code.n + 1)
    return WeightDistribution(tuple(int(c) for c in counts), code.n, code.size)


def krawtchouk(n: int, k: int, j: int, i: int) -> int:
    return sum(
        (-1) ** s * (k - 1) ** (j - s) * math.comb(i, s) * math.comb(n - i, j - s)
        for s in range(j + 1)
    )


def macwilliams(wd: WeightDistribution, k: int, n: int | None = None) -> WeightDistribution:
    """Dual weight distribution by exact Krawtchouk expansion."""
    n = wd.n if n is None else n
    if n != wd.n:
        raise InputError(f"length mismatch: {n} vs {wd.n}")
    size = wd.code_size
    if k**n % size:
        raise NonIntegerResult(f"|C| = {size} does not divide {k}^{n}")
    out = []
    for j in range(n + 1):
        num = sum(a * krawtchouk(n, k, j, i) for i, a in enumerate(wd.counts) if a)
        if num % size:
            raise NonIntegerResult(f"b_{j} = {num}/{size} is not an integer")
        out.append(num // size)
    if out[0] != 1 or any(b < 0 for b in out):
        raise NonIntegerResult(f"invalid dual distribution {out}")
    return WeightDistribution(tuple(out), n, k**n // size)


def min_distance(code: LinearCode) -> int:
    if code.dim == 0:
        raise ZeroDimensional("minimum distance undefined for the zero code")
    wd = weight_distribution(code)
    return next(i for i in range(1, code.n + 1) if wd.counts[i])


def projected_dim(code: LinearCode, S) -> int:
    S = sorted(set(int(i) for i in S))
    if not S or code.dim == 0:
        return 0
    return rank(code.generator.columns(S))


def _zero_mask_hist(code: LinearCode) -> np.ndarray:
    """Histogram of codeword zero-sets, as bitmasks over coordinates."""
    bits = 1 << np.arange(code.n, dtype=np.int64)
    hist = np.zeros(1 << code.n, dtype=np.int64)
    for cw in code.codewords():
        hist += np.bincount((cw == 0) @ bits, minlength=1 << code.n)
    return hist


@functools.lru_cache(maxsize=32)
def subset_dims(code: LinearCode) -> np.ndarray:
    """``dim C_S`` for every ``S``, indexed by bitmask (bit ``i`` = coordinate ``i``).

    Uses ``#{c in C : c_S = 0} = k^(dim C - dim C_S)``; the counts come from a
    superset-sum over codeword zero-sets. The smaller of ``C`` and its dual is
    enumerated, the other side follows from rank duality.
    """
    n = code.n
    if n > MAX_EXACT_N:
        raise TooLargeForExact(f"n={n} > {MAX_EXACT_N}")
    dual = code.dual()
    use_dual = dual.dim < code.dim
    base = dual if use_dual else code
    if base.size > MAX_CODEWORDS:
        raise CodeTooLarge("both the code and its dual are too large to enumerate")
    cnt = _zero_mask_hist(base)
    for i in range(n):
        v = cnt.reshape(-1, 2, 1 << i)
        v[:, 0, :] += v[:, 1, :]
    dims = base.dim - np.rint(np.log(cnt) / math.log(code.k)).astype(np.int64)
    if use_dual:
        # dim C_S = |S| - dim C_dual + dim (C_dual)_{S^c}
        dims = _popcount(n) - dual.dim + dims[::-1]
    dims.flags.writeable = False
    return dims


def _popcount(n):
    masks = np.arange(1 << n)
    return sum((masks >> i) & 1 for i in range(n)) if n else np.zeros(1, dtype=np.int64)


def rank_profile(code: LinearCode) -> np.ndarray:
    """``N[s, r]`` = number of ``|S| = s`` subsets with ``dim C_S = r``."""
    dims = subset_dims(code)
    size = _popcount(code.n)
    prof = np.zeros((code.n + 1, code.dim + 1), dtype=np.int64)
    np.add.at(prof, (size, dims), 1)
    return prof


def _subset_weights(n, keep):
    s = np.arange(n + 1)
    with np.errstate(invalid="ignore"):
        return np.where(s == 0, 1.0, keep**s) * np.where(s == n, 1.0, (1 - keep) ** (n - s))


def erasure_entropy(code: LinearCode, lam: float, mode: str = "exact",
                    trials: int | None = None, seed: int | None = None) -> float:
    """``H(X|Y)`` in bits when each symbol is erased independently w.p. ``lam``."""
    if not 0.0 <= lam <= 1.0:
        raise InputError(f"lambda must lie in [0, 1], got {lam}")
    n, lk = code.n, math.log2(code.k)
    if mode == "exact":
        if n > MAX_EXACT_N:
            raise TooLargeForExact(f"n={n} > {MAX_EXACT_N}; use mode='mc'")
        prof = rank_profile(code)
        w = _subset_weights(n, 1.0 - lam)
        mean_dim = float((w[:, None] * prof * np.arange(code.dim + 1)).sum())
        return lk * (code.dim - mean_dim)
    if mode != "mc":
        raise InputError(f"unknown mode {mode!r}")
    if trials is None or seed is None:
        raise InputError("Monte Carlo mode needs trials and seed")
    cache: dict = {}
    total = 0
    for t0, rng in _rng.blocks(seed, trials):
        keep = rng.random((min(_rng.BLOCK, trials - t0), n)) >= lam
        for row in keep:
            key = row.tobytes()
            if key not in cache:
                cache[key] = projected_dim(code, np.flatnonzero(row))
            total += cache[key]
    return lk * (code.dim - total / trials)


def code_indices(code: LinearCode) -> np.ndarray:
    """Mixed-radix indices (first coordinate most significant) of all codewords."""
    pw = code.k ** np.arange(code.n - 1, -1, -1, dtype=np.int64)
    return np.concatenate([cw @ pw for cw in code.codewords()])


def code_function(code: LinearCode) -> TensorFn:
    """``f_C = (k^n / |C|) 1_C`` under the uniform measure."""
    k, n = code.k, code.n
    if k**n > 10**7:
        raise TooLarge(f"{k}^{n} values exceed the dense cap")
    v = np.zeros(k**n)
    v[code_indices(code)] = k**n / code.size
    return TensorFn(v, make_uniform(k), n)


def character_matrix(field: Field, phi: str = "trace") -> np.ndarray:
    """``M[a, x] = exp(-2 pi i Phi(a x) / p)``."""
    a = np.arange(field.k)
    prod = field.mul(a[:, None], a[None, :])
    if phi == "trace":
        val = field.trace(prod)
    elif phi == "coeff0":
        val = prod % field.p
    else:
        raise InputError(f"unknown homomorphism {phi!r}")
    return np.exp(-2j * np.pi * val / field.p)


def fourier(f, field: Field, phi: str = "trace") -> np.ndarray:
    """``f_hat(a) = E_x f(x) conj(chi_a(x))`` on ``F_k^n`` (shape ``(k,) * n``)."""
    arr = np.asarray(f.values if isinstance(f, TensorFn) else f, dtype=complex)
    k = field.k
    if arr.size > MAX_FOURIER:
        raise TooLarge(f"{arr.size} values exceed {MAX_FOURIER}")
    n = arr.ndim if arr.ndim > 1 else round(math.log(arr.size, k))
    arr = arr.reshape((k,) * n)
    M = character_matrix(field, phi) / k
    for ax in range(n):
        arr = np.moveaxis(np.tensordot(M, arr, axes=([1], [ax])), 0, ax)
    return arr
