"""Optimal contraction constants and the Renyi divergences they control.

``lambda_opt(q, mu_star, rho)`` is the smallest exponent for which
``||T_rho f||_q <= ||f||_1^(1-lambda) ||f||_q^lambda`` holds for every
nonnegative ``f`` on a space whose least likely point has mass ``mu_star``.
It is also the SDPI constant of order-``q`` Renyi divergence under the
kernel ``nu -> rho nu + (1 - rho) mu``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _rng
from .errors import (
    AlphaNonPositive,
    AtomBelowMinusOne,
    ConstantRV,
    InputError,
    MeanNotZero,
    MuStarOutOfRange,
    NuEqualsMu,
    QNotSupported,
    QOutOfRange,
    RhoOutOfRange,
)
from .prob_space import FiniteDist

INF = math.inf


def _check_mu_star(mu_star):
    if not 0.0 < mu_star < 1.0:
        raise MuStarOutOfRange(f"mu_star must lie in (0, 1), got {mu_star}")


def negative_rho_floor(mu_star: float) -> float:
    """Most negative noise rate that keeps nonnegative functions nonnegative."""
    return -mu_star / (1.0 - mu_star)


def lambda_opt(q: float, mu_star: float, rho: float) -> float:
    _check_mu_star(mu_star)
    if not q >= 2:
        raise QOutOfRange(f"q must be >= 2, got {q}")
    lnk = -math.log(mu_star)
    if q == INF:
        if rho < negative_rho_floor(mu_star) or rho > 1:
            raise RhoOutOfRange(
                f"rho must lie in [{negative_rho_floor(mu_star):.6g}, 1] for q=inf, got {rho}"
            )
        if rho >= 0:
            return math.log(rho / mu_star + 1.0 - rho) / lnk
        return -math.log1p(-rho) / math.log1p(-mu_star)
    if not 0.0 <= rho <= 1.0:
        raise RhoOutOfRange(f"rho must lie in [0, 1] for finite q, got {rho}")
    if rho == 1.0:
        return 1.0
    # ln( mu* (1 + rho(1/mu* - 1))^q + (1 - mu*)(1 - rho)^q ), overflow-safe
    a = math.log(mu_star) + q * math.log1p(rho * (1.0 / mu_star - 1.0))
    b = math.log1p(-mu_star) + q * math.log1p(-rho)
    return float(np.logaddexp(a, b)) / ((q - 1.0) * lnk)


def lambda_rho_q2(k: float, rho: float) -> float:
    """``ln(rho^2 k + 1 - rho^2) / ln k`` for real ``k > 1``."""
    return math.log1p(rho * rho * (k - 1.0)) / math.log(k)


def z_of_lambda(k: float, lam: float) -> float:
    """``(k^lam - 1) / (k - 1)``."""
    return math.expm1(lam * math.log(k)) / (k - 1.0)


def renyi_divergence(nu, mu, q: float) -> float:
    """Order-``q`` Renyi divergence ``D_q(nu || mu)`` in nats.

    ``nu`` may contain zeros; ``mu`` is a :class:`FiniteDist` or a positive vector.
    """
    m = np.asarray(mu.probs if isinstance(mu, FiniteDist) else mu, dtype=float)
    v = np.asarray(nu, dtype=float)
    if v.shape != m.shape:
        raise InputError("nu and mu live on different alphabets")
    if not q > 1:
        raise QNotSupported(f"Renyi divergence implemented for q > 1, got {q}")
    pos = v > 0
    if q == INF:
        return float(np.log(np.max(v[pos] / m[pos])))
    terms = q * np.log(v[pos]) - (q - 1.0) * np.log(m[pos])
    top = terms.max()
    s = np.exp(terms - top).sum()
    return max(0.0, float((top + math.log(s)) / (q - 1.0)))


def renyi_entropy(p, q: float, base: float = math.e) -> float:
    """Order-``q`` Renyi entropy, ``q > 1`` or ``inf``."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    if q == INF:
        return float(-np.log(p.max()) / math.log(base))
    return float(np.log((p**q).sum()) / ((1.0 - q) * math.log(base)))


def sdpi_ratio(nu, mu: FiniteDist, q: float, rho: float) -> float:
    """``D_q(rho nu + (1-rho) mu || mu) / D_q(nu || mu)``."""
    v = np.asarray(nu, dtype=float)
    den = renyi_divergence(v, mu, q)
    if den <= 1e-15:
        raise NuEqualsMu("ratio undefined for nu == mu")
    mixed = rho * v + (1.0 - rho) * mu.probs
    return renyi_divergence(mixed, mu, q) / den


@dataclass(frozen=True)
class FiniteRV:
    """Finitely supported real random variable."""

    atoms: tuple
    probs: tuple

    def __post_init__(self):
        if len(self.atoms) != len(self.probs) or not self.atoms:
            raise InputError("atoms and probs need equal, nonzero length")
        p = np.asarray(self.probs, dtype=float)
        if np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-12:
            raise InputError("probs must be positive and sum to 1")

    @classmethod
    def of(cls, atoms, probs) -> "FiniteRV":
        return cls(tuple(float(a) for a in atoms), tuple(float(p) for p in probs))

    def mean(self) -> float:
        return float(np.dot(self.atoms, self.probs))

    def is_constant(self) -> bool:
        return max(self.atoms) - min(self.atoms) == 0

    def in_P_star(self, alpha: float) -> bool:
        return (
            abs(self.mean()) <= 1e-9
            and min(self.atoms) >= -1.0
            and max(self.atoms) <= alpha
            and not self.is_constant()
        )


def _log_moment(atoms, probs, rho, q):
    """``ln E(1 + rho X)^q`` evaluated along the last axis."""
    with np.errstate(divide="ignore"):
        d = np.expm1(q * np.log1p(rho * np.asarray(atoms)))
    return np.log1p((np.asarray(probs) * d).sum(axis=-1))


def r_ratio(X: FiniteRV, q: float, rho: float) -> float:
    """``ln E(1 + rho X)^q / ln E(1 + X)^q``."""
    if X.is_constant():
        raise ConstantRV("X is almost surely constant")
    if abs(X.mean()) > 1e-9:
        raise MeanNotZero(f"E X = {X.mean():.3e}")
    if min(X.atoms) < -1.0:
        raise AtomBelowMinusOne(f"atom {min(X.atoms)} < -1")
    return float(_log_moment(X.atoms, X.probs, rho, q) / _log_moment(X.atoms, X.probs, 1.0, q))


def extremal_rv(alpha: float) -> FiniteRV:
    """Two-point variable on ``{alpha, -1}`` with mean zero."""
    if not alpha > 0:
        raise AlphaNonPositive(f"alpha must be > 0, got {alpha}")
    return FiniteRV((float(alpha), -1.0), (1.0 / (1.0 + alpha), alpha / (1.0 + alpha)))


def binary_log_moment(rho, x, y, q):
    """``ln N_q(rho, x, y)`` for the mean-zero variable on ``{x, -x y}``.

    The variable takes ``x`` w.p. ``y / (1 + y)`` and ``-x y`` w.p. ``1 / (1 + y)``.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    with np.errstate(divide="ignore"):
        hi = q * np.log1p(rho * x)
        lo = q * np.log1p(-rho * x * y)
    # N - 1 written to avoid cancellation when the variable is nearly constant
    nm1 = (y * np.expm1(hi) + np.expm1(lo)) / (1.0 + y)
    return np.log1p(nm1)


def binary_r(rho, x, y, q):
    """``R_q(rho, x, y) = ln N_q(rho, x, y) / ln N_q(1, x, y)``."""
    return binary_log_moment(rho, x, y, q) / binary_log_moment(1.0, x, y, q)


class SupSearchResult(NamedTuple):
    rv: FiniteRV
    value: float


def _binary_grid(alpha, grid):
    ys = np.concatenate(([-1.0], np.linspace(-1.0, -1e-3, grid)[1:]))
    p_hi = -ys / (alpha - ys)
    return ys, p_hi


def ternary_sample(alpha: float, samples: int, seed: int):
    """Random mean-zero ternary variables with atoms in ``[-1, alpha]``.

    Returns ``(atoms, probs)`` arrays of shape ``(m, 3)``.
    """
    rng = _rng.stream(seed, 0)
    a = -rng.uniform(1e-3, 1.0, samples)
    c = rng.uniform(1e-3, 1.0, samples) * alpha
    b = a + (c - a) * rng.uniform(0.0, 1.0, samples)
    pb = rng.uniform(0.0, 1.0, samples)
    # remaining mass split between a and c so that the mean is zero
    pc = (-pb * b - (1.0 - pb) * a) / (c - a)
    pa = 1.0 - pb - pc
    ok = (pa > 1e-12) & (pb > 1e-12) & (pc > 1e-12) & (b > a) & (b < c)
    atoms = np.stack([a, b, c], axis=1)[ok]
    probs = np.stack([pa, pb, pc], axis=1)[ok]
    return atoms, probs


def sup_search(
    q: float, rho: float, alpha: float, grid: int = 1000, seed: int = 0, ternary: int | None = None
) -> SupSearchResult:
    """Brute-force maximum of :func:`r_ratio` over mean-zero variables bounded by ``alpha``.

    Scans two-point variables on ``{y, alpha}`` with ``y`` on a uniform grid in
    ``[-1, -1e-3]`` (the endpoint ``-1`` included exactly) plus a seeded sample
    of three-point variables. Ties go to the lowest ``y``.
    """
    if grid < 100:
        raise InputError("grid needs at least 100 points")
    if not alpha > 0:
        raise AlphaNonPositive(f"alpha must be > 0, got {alpha}")
    ys, p_hi = _binary_grid(alpha, grid)
    atoms = np.stack([np.full_like(ys, alpha), ys], axis=1)
    probs = np.stack([p_hi, 1.0 - p_hi], axis=1)
    vals = _log_moment(atoms, probs, rho, q) / _log_moment(atoms, probs, 1.0, q)
    order = np.lexsort((ys, -vals))
    best = int(order[0])
    best_val, best_atoms, best_probs = vals[best], atoms[best], probs[best]
    t_atoms, t_probs = ternary_sample(alpha, ternary if ternary is not None else 10 * grid, seed)
    if len(t_atoms):
        t_vals = _log_moment(t_atoms, t_probs, rho, q) / _log_moment(t_atoms, t_probs, 1.0, q)
        j = int(np.argmax(t_vals))
        if t_vals[j] > best_val:
            best_val, best_atoms, best_probs = t_vals[j], t_atoms[j], t_probs[j]
    return SupSearchResult(FiniteRV.of(best_atoms, best_probs), float(best_val))


def ternary_max(q: float, rho: float, alpha: float, samples: int, seed: int) -> float:
    """Largest :func:`r_ratio` among a seeded sample of three-point variables."""
    atoms, probs = ternary_sample(alpha, samples, seed)
    vals = _log_moment(atoms, probs, rho, q) / _log_moment(atoms, probs, 1.0, q)
    return float(vals.max())
