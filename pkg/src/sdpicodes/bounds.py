"""Bounds relating code statistics on the erasure channel to other channels.

Entropies are in bits. Validity windows are reported as flags on
:class:`BoundReport` so parameter sweeps do not abort.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .channel import h_k
from .code import LinearCode, WeightDistribution, erasure_entropy, weight_distribution
from .errors import CNotLessThanOne, InputError, NoRoot
from .sdpi import z_of_lambda

BISECT_TOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    name: str
    bound_value: float
    actual_value: float | None = None
    valid: bool = True  # parameters inside the bound's stated window
    tolerance: float = 1e-9
    inputs: dict = field(default_factory=dict)
    direction: str = "upper"  # "lower" means actual >= bound

    @property
    def holds(self) -> bool | None:
        if self.actual_value is None or not self.valid:
            return None
        if self.direction == "lower":
            return self.bound_value <= self.actual_value + self.tolerance
        return self.actual_value <= self.bound_value + self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["holds"] = self.holds
        return d


def weight_enumerator(wd: WeightDistribution, z: float) -> float:
    """``sum_i a_i z^i``."""
    return float(sum(a * z**i for i, a in enumerate(wd.counts)))


def weight_bound_margin(code: LinearCode, lam: float):
    """``(log2 sum_i a_i z_k(lam)^i, H(X|Y))``; the first never exceeds the second."""
    wd = weight_distribution(code)
    lhs = math.log2(weight_enumerator(wd, z_of_lambda(code.k, lam)))
    rhs = erasure_entropy(code, lam)
    return lhs, rhs


def F_weight(k: int, gamma: float, theta: float) -> float:
    lo = (k - 1) * (1.0 - theta) / k
    hi = (k - 1) * (1.0 + theta) / k
    if gamma < lo:
        return (1.0 - theta) ** gamma * (1.0 + (k - 1) * theta) ** (1.0 - gamma)
    if gamma > hi:
        return (1.0 + theta) ** gamma * (1.0 - (k - 1) * theta) ** (1.0 - gamma)
    return k ** (1.0 - h_k(gamma, k))


def ai_bounds(code: LinearCode, lam: float, i: int, h_bits: float | None = None,
              h_dual_bits: float | None = None):
    """``(primal, dual)`` upper bounds on the number of weight-``i`` codewords."""
    if not 0.0 < lam <= 1.0:
        raise InputError(f"lambda must lie in (0, 1], got {lam}")
    theta = z_of_lambda(code.k, lam)
    if h_bits is None:
        h_bits = erasure_entropy(code, lam)
    if h_dual_bits is None:
        h_dual_bits = erasure_entropy(code.dual(), lam)
    primal = theta ** (-i) * 2.0**h_bits
    dual = code.size * 2.0**h_dual_bits / F_weight(code.k, i / code.n, theta) ** code.n
    return primal, dual


def block_error_bound(d: int, Z: float, k: int, lam: float, h_bits: float) -> float:
    """``2^H c^d / (1 - c)`` with ``c = Z (k - 1) / (k^lam - 1)``."""
    if Z == 0:
        return 0.0
    den = math.expm1(lam * math.log(k))
    c = math.inf if den == 0 else Z * (k - 1) / den
    if not c < 1.0:
        raise CNotLessThanOne(f"c = {c:.6g} >= 1; the bound is vacuous")
    return 2.0**h_bits * c**d / (1.0 - c)


def union_bhattacharyya_sum(wd: WeightDistribution, Z: float) -> float:
    """``sum_{i >= 1} a_i Z^i``."""
    return float(sum(a * Z**i for i, a in enumerate(wd.counts) if i >= 1))


def eta_star(k: int, lam: float) -> float:
    """Error rate in ``[0, (k-1)/k]`` at which the k-SC Bhattacharyya coefficient equals ``z_k(lam)``.

    ``Z`` is flat at ``(k-1)/k``, so the crossing is located through
    ``sqrt(1 - Z) = sqrt(1 - eta) - sqrt(eta / (k - 1))``, which has nonzero
    slope there and no cancellation.
    """
    if not 0.0 < lam <= 1.0:
        raise NoRoot(f"no crossing for lambda={lam}; need 0 < lambda <= 1")
    target = math.sqrt(-k * math.expm1((lam - 1.0) * math.log(k)) / (k - 1))
    lo, hi = 0.0, (k - 1) / k
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if math.sqrt(1.0 - mid) - math.sqrt(mid / (k - 1)) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gk_curve(k: int, c_values):
    """Rows ``(c_e, eta_star(k, 1 - c_e), 1 - h_k(eta_star))``."""
    rows = []
    for c in c_values:
        c = float(c)
        if not 0.0 < c <= 1.0:
            raise InputError(f"c_e must lie in (0, 1], got {c}")
        eta = 0.0 if c == 1.0 else eta_star(k, 1.0 - c)
        rows.append((c, eta, 1.0 - h_k(eta, k)))
    return rows


def p_ue_exact(wd: WeightDistribution, k: int, eta: float) -> float:
    """Undetected-error probability on the k-SC, ``sum_{i>=1} a_i (eta/(k-1))^i (1-eta)^(n-i)``."""
    n = wd.n
    return float(sum(a * (eta / (k - 1)) ** i * (1.0 - eta) ** (n - i)
                     for i, a in enumerate(wd.counts) if i >= 1))


def p_ue_via_dual(dual_wd: WeightDistribution, code_size: int, k: int, eta: float) -> float:
    """Same quantity from the dual weight distribution, with ``alpha = 1 - k eta/(k-1)``."""
    n = dual_wd.n
    alpha = 1.0 - k * eta / (k - 1)
    return code_size / k**n * weight_enumerator(dual_wd, alpha) - (1.0 - eta) ** n


def p_ue_via_dual_pue(wd: WeightDistribution, dual_wd: WeightDistribution, k: int,
                      eta: float) -> float:
    """Rewrite in terms of the dual code's own undetected-error probability (``eta <= (k-1)/k``)."""
    if not 0.0 <= eta <= (k - 1) / k:
        raise InputError("identity requires 0 <= eta <= (k-1)/k")
    n, size = wd.n, wd.code_size
    eta_p = (k - 1) / k * (1.0 - k * eta / (k - 1)) / (1.0 - eta)
    return size / k**n + size * (1.0 - eta) ** n * p_ue_exact(dual_wd, k, eta_p) - (1.0 - eta) ** n


def p_ue_bounds(code: LinearCode, lam: float, eta: float) -> dict:
    """Lower bound and the two entropy upper bounds, each with a validity flag."""
    if not (0.0 <= lam <= 1.0 and 0.0 <= eta <= 1.0):
        raise InputError("lambda and eta must lie in [0, 1]")
    k, n = code.k, code.n
    wd = weight_distribution(code)
    actual = p_ue_exact(wd, k, eta)
    rate = code.size / k**n
    h = erasure_entropy(code, lam)
    h_dual = erasure_entropy(code.dual(), lam)
    inputs = {"lambda": lam, "eta": eta, "k": k, "n": n, "dim": code.dim}
    tail = (1.0 - eta) ** n
    eps = 1e-15
    return {
        "lower": BoundReport(
            "lower", rate - tail, actual, eta <= (k - 1) / k + eps, inputs=inputs,
            direction="lower"),
        "dual_entropy": BoundReport(
            "dual_entropy", rate * 2.0**h_dual, actual,
            1.0 - k ** (lam - 1.0) - eps <= eta <= min(1.0, 1.0 - 2.0 / k + k ** (lam - 1.0)) + eps,
            inputs=inputs),
        "primal": BoundReport(
            "primal", rate + tail * 2.0**h, actual, eta <= 1.0 - k ** (-lam) + eps, inputs=inputs),
    }

