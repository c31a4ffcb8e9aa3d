"""Finite, fully supported probability distributions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyOrSingleton, KTooSmall, NonPositiveEntry, SumOutOfTolerance

SUM_TOL_IN = 1e-9


@dataclass(frozen=True)
class FiniteDist:
    """Probability vector over ``{0, ..., alphabet_size - 1}`` with full support.

    Use :func:`make_dist` or :func:`make_uniform` rather than the constructor.
    """

    probs: np.ndarray
    _min_prob: float = field(repr=False, compare=False)

    @property
    def alphabet_size(self) -> int:
        return len(self.probs)

    def min_prob(self) -> float:
        return self._min_prob

    def min_index(self) -> int:
        """Lowest index attaining the minimum probability."""
        return int(np.argmin(self.probs))

    @property
    def k(self) -> float:
        """Effective alphabet size ``1 / min_prob``."""
        return 1.0 / self._min_prob

    def is_uniform(self) -> bool:
        return bool(np.all(self.probs == self.probs[0]))

    def describe(self) -> str:
        if self.is_uniform():
            return f"uniform:{self.alphabet_size}"
        return ",".join(f"{p:.12g}" for p in self.probs)

    def __eq__(self, other):
        if not isinstance(other, FiniteDist):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.probs.tobytes())


def make_dist(probs) -> FiniteDist:
    p = np.asarray(probs, dtype=float).ravel()
    if p.size < 2:
        raise EmptyOrSingleton("a distribution needs at least two outcomes")
    if not np.all(p > 0):
        raise NonPositiveEntry(f"all probabilities must be > 0, got {p.tolist()}")
    s = p.sum()
    if abs(s - 1.0) > SUM_TOL_IN:
        raise SumOutOfTolerance(f"probabilities sum to {s!r}")
    p = p / s
    p.flags.writeable = False
    return FiniteDist(p, float(p.min()))


def make_uniform(k: int) -> FiniteDist:
    if int(k) != k or k < 2:
        raise KTooSmall(f"uniform distribution needs k >= 2, got {k}")
    k = int(k)
    p = np.full(k, 1.0 / k)
    p.flags.writeable = False
    return FiniteDist(p, 1.0 / k)


def parse_dist(text: str) -> FiniteDist:
    """Parse ``"uniform:k"`` or comma-separated decimals."""
    text = text.strip()
    if text.startswith("uniform:"):
        return make_uniform(int(text.split(":", 1)[1]))
    return make_dist([float(t) for t in text.split(",") if t.strip()])
