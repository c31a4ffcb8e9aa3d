"""Discrete memoryless channels, Bhattacharyya coefficients and capacities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, InputError, NotStochastic, NotSupported

ROW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Row-stochastic ``transition[x, y] = W(y | x)``.

    ``kind`` is ``"erasure"``, ``"symmetric"`` or ``"generic"``; ``param`` holds
    the erasure or error probability for the first two.
    """

    transition: np.ndarray
    kind: str = "generic"
    param: float | None = None

    @property
    def input_size(self) -> int:
        return self.transition.shape[0]

    @property
    def output_size(self) -> int:
        return self.transition.shape[1]

    def describe(self) -> str:
        if self.kind == "erasure":
            return f"kec:{self.input_size}:{self.param:.12g}"
        if self.kind == "symmetric":
            return f"ksc:{self.input_size}:{self.param:.12g}"
        return f"generic:{self.input_size}x{self.output_size}"


def _check_k(k):
    if int(k) != k or k < 2:
        raise BadParameter(f"alphabet size must be an integer >= 2, got {k}")
    return int(k)


def _check_unit(name, v):
    if not 0.0 <= v <= 1.0:
        raise BadParameter(f"{name} must lie in [0, 1], got {v}")


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def make_kec(k: int, lam: float) -> DiscreteChannel:
    """k-ary erasure channel; output ``k`` is the erasure symbol."""
    k = _check_k(k)
    _check_unit("erasure probability", lam)
    W = np.zeros((k, k + 1))
    W[np.arange(k), np.arange(k)] = 1.0 - lam
    W[:, k] = lam
    return DiscreteChannel(_frozen(W), "erasure", float(lam))


def make_ksc(k: int, eta: float) -> DiscreteChannel:
    """k-ary symmetric channel: symbol kept w.p. ``1 - eta``, else uniform among the rest."""
    k = _check_k(k)
    _check_unit("error probability", eta)
    W = np.full((k, k), eta / (k - 1))
    np.fill_diagonal(W, 1.0 - eta)
    return DiscreteChannel(_frozen(W), "symmetric", float(eta))


def make_generic(matrix) -> DiscreteChannel:
    W = np.array(matrix, dtype=float)
    if W.ndim != 2 or W.shape[0] < 2 or W.shape[1] < 1:
        raise InputError("transition matrix must be k x m with k >= 2")
    if np.any(W < 0) or np.any(np.abs(W.sum(axis=1) - 1.0) > ROW_TOL):
        raise NotStochastic("rows must be nonnegative and sum to 1")
    return DiscreteChannel(_frozen(W), "generic", None)


def bhattacharyya(w: DiscreteChannel) -> float:
    """``max_{x != x'} sum_y sqrt(W(y|x) W(y|x'))``."""
    s = np.sqrt(w.transition)
    G = s @ s.T
    np.fill_diagonal(G, -np.inf)
    return float(min(1.0, G.max()))


def bhattacharyya_posterior(w: DiscreteChannel) -> float:
    """The same quantity via ``E[sqrt(P(X=x'|Y) / P(X=x|Y)) | X=x]`` under uniform input.

    With uniform input the posterior ratio equals ``W(y|x') / W(y|x)``, so the
    expectation collapses to the symmetric sum; this form exists as a cross-check.
    """
    W = w.transition
    k = w.input_size
    best = 0.0
    for x in range(k):
        for xp in range(k):
            if x == xp:
                continue
            total = 0.0
            for y in range(w.output_size):
                if W[x, y] > 0:
                    py = W[:, y].sum() / k
                    post_x, post_xp = W[x, y] / k / py, W[xp, y] / k / py
                    total += W[x, y] * math.sqrt(post_xp / post_x)
            best = max(best, total)
    return best


def z_ksc(k: int, eta: float) -> float:
    """Closed-form Bhattacharyya coefficient of the k-ary symmetric channel."""
    return (k - 2) * eta / (k - 1) + 2.0 * math.sqrt((1.0 - eta) * eta / (k - 1))


def h_k(gamma: float, k: int) -> float:
    """Base-k entropy ``-(1-g) log_k(1-g) - g log_k(g/(k-1))`` with ``0 log 0 = 0``."""
    out = 0.0
    if gamma < 1.0:
        out -= (1.0 - gamma) * math.log1p(-gamma)
    if gamma > 0.0:
        out -= gamma * math.log(gamma / (k - 1))
    return out / math.log(k)


def capacity(w: DiscreteChannel) -> float:
    """Shannon capacity in base-k symbols per use."""
    if w.kind == "erasure":
        return 1.0 - w.param
    if w.kind == "symmetric":
        return 1.0 - h_k(w.param, w.input_size)
    raise NotSupported("capacity is implemented for erasure and symmetric channels only")


def parse_channel(text: str) -> DiscreteChannel:
    """``kec:k:lambda``, ``ksc:k:eta`` or a path to a CSV transition matrix."""
    parts = text.split(":")
    if len(parts) == 3 and parts[0] in ("kec", "ksc"):
        try:
            k, v = int(parts[1]), float(parts[2])
        except ValueError as e:
            raise BadParameter(f"bad channel descriptor {text!r}") from e
        return make_kec(k, v) if parts[0] == "kec" else make_ksc(k, v)
    try:
        matrix = np.loadtxt(text, delimiter=",", ndmin=2)
    except OSError as e:
        raise InputError(f"cannot read channel {text!r}: {e}") from e
    return make_generic(matrix)
