"""Real functions on a finite product space, their norms and noise operators.

A :class:`TensorFn` stores ``f(x_1, ..., x_n)`` as a dense array of shape
``(k,) * n``. Flattened in C order this is the mixed-radix vector with
``x_1`` as the most significant digit, which is also the CSV layout.
Coordinates are 0-based throughout the Python API.

The array helpers prefixed with ``_`` accept extra *leading* batch axes;
coordinate ``i`` of an ``n``-coordinate function lives on array axis
``i - n``. The verifier relies on this to evaluate many functions at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _rng
from .errors import AxisCoverage, BadCoordinate, InputError, TooLarge, TooLargeForExact
from .prob_space import FiniteDist

MAX_VALUES = 10**7
MAX_EXACT_N = 20


def _weights(probs, ndim, ax):
    shape = [1] * ndim
    shape[ax] = len(probs)
    return np.asarray(probs).reshape(shape)


def _expect(arr, axes, probs):
    """Average over ``axes`` (array axes, keepdims) under ``probs``."""
    for ax in axes:
        arr = (arr * _weights(probs, arr.ndim, ax)).sum(axis=ax, keepdims=True)
    return arr


def _norm_axis(arr, ax, q, probs):
    a = np.abs(arr)
    w = _weights(probs, a.ndim, ax)
    if q == math.inf:
        return a.max(axis=ax, keepdims=True)
    if q <= 0:
        # zero anywhere along the axis forces the norm to 0
        has_zero = (a == 0).any(axis=ax, keepdims=True)
        safe = np.where(a == 0, 1.0, a)
        if q == 0:
            out = np.exp((w * np.log(safe)).sum(axis=ax, keepdims=True))
        else:
            out = ((w * safe**q).sum(axis=ax, keepdims=True)) ** (1.0 / q)
        return np.where(has_zero, 0.0, out)
    m = a.max(axis=ax, keepdims=True)
    scale = np.where(m == 0, 1.0, m)
    out = m * ((w * (a / scale) ** q).sum(axis=ax, keepdims=True)) ** (1.0 / q)
    return out


def _norm(arr, axes, q, probs):
    for ax in axes:
        arr = _norm_axis(arr, ax, q, probs)
    return arr


def _noise(arr, ax, rho, probs):
    return rho * arr + (1.0 - rho) * _expect(arr, [ax], probs)


def _noise_all(arr, n, rho, probs):
    rhos = np.broadcast_to(np.asarray(rho, dtype=float), (n,))
    for i in range(n):
        arr = _noise(arr, i - n, rhos[i], probs)
    return arr


def _log_norm_full(arr, n, q, probs):
    """``ln ||f||_q`` for every function in the batch (shape = batch shape)."""
    out = _norm(arr, range(-n, 0), q, probs)
    with np.errstate(divide="ignore"):
        return np.log(out.reshape(out.shape[: out.ndim - n]))


def _subset_log_norms(arr, n, q, probs):
    """Yield ``(S, ln ||E(f|S)||_q)`` for every subset ``S`` of ``range(n)``."""
    for mask in range(1 << n):
        S = [i for i in range(n) if mask >> i & 1]
        comp = [i - n for i in range(n) if not mask >> i & 1]
        marg = _expect(arr, comp, probs)
        yield S, _log_norm_full(marg, n, q, probs)


def _subset_weight(lam, n, size):
    return lam**size * (1.0 - lam) ** (n - size)


def _log_rhs_exact(arr, n, q, lam, probs):
    """``E_{S~lam} ln ||E(f|S)||_q`` by enumerating all subsets."""
    total = None
    for S, ln in _subset_log_norms(arr, n, q, probs):
        w = _subset_weight(lam, n, len(S))
        if w == 0:
            continue
        term = w * ln
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class NestedNormSpec:
    """Ordered stages ``(axes, q)``; the first stage is the innermost norm."""

    stages: tuple

    @classmethod
    def of(cls, stages) -> "NestedNormSpec":
        norm = []
        for axes, q in stages:
            if isinstance(axes, (int, np.integer)):
                axes = (int(axes),)
            norm.append((tuple(int(a) for a in axes), float(q)))
        return cls(tuple(norm))

    @classmethod
    def uniform(cls, n: int, q: float) -> "NestedNormSpec":
        return cls.of([(tuple(range(n)), q)])

    def validate(self, n: int) -> None:
        seen = [a for axes, _ in self.stages for a in axes]
        if sorted(seen) != list(range(n)):
            raise AxisCoverage(
                f"stages must cover coordinates 0..{n - 1} exactly once, got {seen}"
            )


class TensorFn:
    """Function ``f: Omega^n -> R`` under the product measure ``dist^n``."""

    def __init__(self, values, dist: FiniteDist, n: int | None = None):
        k = dist.alphabet_size
        v = np.array(values, dtype=float)
        if n is None:
            if v.ndim > 1:
                n = v.ndim
            else:
                n = round(math.log(v.size, k)) if v.size > 1 else 0
        if n < 1:
            raise InputError("a TensorFn needs at least one coordinate")
        if k**n > MAX_VALUES:
            raise TooLarge(f"{k}^{n} values exceed the dense cap {MAX_VALUES}")
        if v.size != k**n:
            raise InputError(f"expected {k}^{n} = {k**n} values, got {v.size}")
        v = v.reshape((k,) * n)
        v.flags.writeable = False
        self.values = v
        self.dist = dist
        self.n = n

    def __repr__(self):
        return f"TensorFn(n={self.n}, dist={self.dist.describe()})"

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def _new(self, arr) -> "TensorFn":
        return TensorFn(arr, self.dist, self.n)

    def _check_coord(self, i):
        if not 0 <= i < self.n:
            raise BadCoordinate(f"coordinate {i} outside 0..{self.n - 1}")

    @classmethod
    def from_csv(cls, path, dist: FiniteDist) -> "TensorFn":
        values = np.loadtxt(path, delimiter=",", ndmin=1)
        return cls(values, dist)

    def to_csv(self, path) -> None:
        np.savetxt(path, self.flat, fmt="%.17g")

    @classmethod
    def indicator(cls, point: Sequence[int], dist: FiniteDist) -> "TensorFn":
        k, n = dist.alphabet_size, len(point)
        v = np.zeros((k,) * n)
        v[tuple(point)] = 1.0
        return cls(v, dist, n)

    def expectation(self) -> float:
        return float(_expect(self.values, range(-self.n, 0), self.dist.probs).ravel()[0])


def q_norm(f: TensorFn, q: float) -> float:
    """``(E|f|^q)^(1/q)``; ``q=0`` is the geometric mean, ``q=inf`` the max.

    For ``q <= 0`` a function vanishing anywhere has norm 0.
    """
    return float(_norm(f.values, range(-f.n, 0), q, f.dist.probs).ravel()[0])


def nested_norm(f: TensorFn, spec: NestedNormSpec) -> float:
    spec.validate(f.n)
    arr = f.values
    for axes, q in spec.stages:
        arr = _norm(arr, [a - f.n for a in axes], q, f.dist.probs)
    return float(arr.ravel()[0])


def noise(f: TensorFn, i: int, rho: float) -> TensorFn:
    """``T_{i,rho} f = rho f + (1 - rho) E_{X_i} f``."""
    f._check_coord(i)
    return f._new(_noise(f.values, i - f.n, rho, f.dist.probs))


def noise_all(f: TensorFn, rho) -> TensorFn:
    """Apply ``T_{i,rho_i}`` on every coordinate; ``rho`` is a scalar or length-n vector."""
    rhos = np.asarray(rho, dtype=float)
    if rhos.ndim and rhos.shape != (f.n,):
        raise BadCoordinate(f"need {f.n} noise rates, got {rhos.shape[0]}")
    return f._new(_noise_all(f.values, f.n, rhos, f.dist.probs))


def cond_exp(f: TensorFn, S) -> TensorFn:
    """``E(f|S)``: average out every coordinate not in ``S``."""
    S = set(S)
    for i in S:
        f._check_coord(i)
    comp = [i - f.n for i in range(f.n) if i not in S]
    marg = _expect(f.values, comp, f.dist.probs)
    return f._new(np.broadcast_to(marg, f.values.shape))


class ErasureFunctional(NamedTuple):
    value: float  # nats; -inf when some weighted norm vanishes
    stderr: float  # 0 in exact mode
    exact: bool
    degenerate: bool  # a log of a zero norm entered with positive weight


def rhs_erasure_functional(
    f: TensorFn,
    q: float,
    lam: float,
    mode: str = "exact",
    trials: int | None = None,
    seed: int | None = None,
) -> ErasureFunctional:
    """``E_{S ~ lam} ln ||E(f|S)||_q`` where ``S`` keeps each coordinate w.p. ``lam``."""
    if not 0.0 <= lam <= 1.0:
        raise InputError(f"lambda must lie in [0, 1], got {lam}")
    n, probs = f.n, f.dist.probs
    if mode == "exact":
        if n > MAX_EXACT_N:
            raise TooLargeForExact(f"n={n} > {MAX_EXACT_N}; use mode='mc'")
        val = float(_log_rhs_exact(f.values, n, q, lam, probs))
        return ErasureFunctional(val, 0.0, True, val == -math.inf)
    if mode != "mc":
        raise InputError(f"unknown mode {mode!r}")
    if trials is None or seed is None:
        raise InputError("Monte Carlo mode needs trials and seed")
    cache: dict[int, float] = {}
    samples = np.empty(trials)
    for t0, rng in _rng.blocks(seed, trials):
        m = min(_rng.BLOCK, trials - t0)
        keep = rng.random((m, n)) < lam
        for j in range(m):
            mask = int(sum(1 << i for i in range(n) if keep[j, i]))
            if mask not in cache:
                comp = [i - n for i in range(n) if not mask >> i & 1]
                marg = _expect(f.values, comp, probs)
                cache[mask] = float(_log_norm_full(marg, n, q, probs))
            samples[t0 + j] = cache[mask]
    degenerate = bool(np.isneginf(samples).any())
    if degenerate:
        return ErasureFunctional(-math.inf, math.nan, False, True)
    se = float(samples.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.nan
    return ErasureFunctional(float(samples.mean()), se, False, False)
