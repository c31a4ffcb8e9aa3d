import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sdpicodes.errors import (
    AlphaNonPositive,
    AtomBelowMinusOne,
    ConstantRV,
    MeanNotZero,
    MuStarOutOfRange,
    NuEqualsMu,
    QNotSupported,
    QOutOfRange,
    RhoOutOfRange,
)
from sdpicodes.prob_space import make_dist, make_uniform
from sdpicodes.sdpi import (
    FiniteRV,
    extremal_rv,
    lambda_opt,
    lambda_rho_q2,
    negative_rho_floor,
    r_ratio,
    renyi_divergence,
    renyi_entropy,
    sdpi_ratio,
    sup_search,
    ternary_max,
    z_of_lambda,
)

QS = [2.0, 3.5, 10.0, math.inf]


def test_frozen_values():
    # ln(0.5 * 1.5^2 + 0.5 * 0.5^2) / ln 2 = log2(1.25)
    assert lambda_opt(2, 0.5, 0.5) == pytest.approx(math.log2(1.25), abs=1e-15)
    assert lambda_opt(math.inf, 1 / 3, 0.5) == pytest.approx(math.log(2) / math.log(3), abs=1e-15)


def test_endpoints():
    for q in QS:
        assert lambda_opt(q, 0.3, 0.0) == pytest.approx(0.0, abs=1e-15)
        assert lambda_opt(q, 0.3, 1.0) == pytest.approx(1.0)


def test_negative_rho_q_inf():
    mu = 0.25
    rho = -0.2
    assert lambda_opt(math.inf, mu, rho) == pytest.approx(-math.log(1 - rho) / math.log(1 - mu))
    # the floor maps to lambda = 1
    assert lambda_opt(math.inf, mu, negative_rho_floor(mu)) == pytest.approx(1.0)
    with pytest.raises(RhoOutOfRange):
        lambda_opt(math.inf, mu, negative_rho_floor(mu) - 1e-3)
    with pytest.raises(RhoOutOfRange):
        lambda_opt(2.0, mu, -0.1)


@pytest.mark.parametrize("args,err", [
    ((2, 0.0, 0.5), MuStarOutOfRange),
    ((2, 1.0, 0.5), MuStarOutOfRange),
    ((1.5, 0.5, 0.5), QOutOfRange),
    ((2, 0.5, 1.1), RhoOutOfRange),
])
def test_lambda_errors(args, err):
    with pytest.raises(err):
        lambda_opt(*args)


@given(st.integers(2, 50), st.floats(0.0, 1.0))
def test_q2_matches_closed_form(k, rho):
    assert lambda_opt(2, 1 / k, rho) == pytest.approx(lambda_rho_q2(k, rho), abs=1e-12)


@given(st.integers(2, 12), st.sampled_from([2.0, 3.0, 7.5, math.inf]), st.floats(0.0, 1.0))
def test_one_minus_lambda_is_renyi_entropy(k, q, rho):
    p = np.full(k, (1 - rho) / k)
    p[0] += rho
    assert 1 - lambda_opt(q, 1 / k, rho) == pytest.approx(renyi_entropy(p, q, base=k), abs=1e-12)


def test_large_q_approaches_infinity_branch():
    assert lambda_opt(1e6, 0.2, 0.4) == pytest.approx(lambda_opt(math.inf, 0.2, 0.4), abs=1e-5)


def test_overflow_safe_for_huge_q():
    lam = lambda_opt(1e9, 0.01, 0.9)
    assert 0 < lam < 1 and math.isfinite(lam)


@given(st.lists(st.floats(0.05, 1.0), min_size=2, max_size=6), st.sampled_from(QS),
       st.floats(0.01, 0.99))
def test_point_mass_attains_lambda(ws, q, rho):
    mu = make_dist(np.asarray(ws) / np.sum(ws))
    assume(mu.min_prob() < 0.5 - 1e-9)
    nu = np.zeros(mu.alphabet_size)
    nu[mu.min_index()] = 1.0
    want = lambda_opt(q, mu.min_prob(), rho)
    assert sdpi_ratio(nu, mu, q, rho) == pytest.approx(want, rel=1e-9)


@settings(max_examples=200)
@given(st.lists(st.floats(0.05, 1.0), min_size=2, max_size=6),
       st.lists(st.floats(0.0, 1.0), min_size=6, max_size=6),
       st.sampled_from(QS), st.floats(0.0, 1.0))
def test_sdpi_ratio_never_exceeds_lambda(ws, vs, q, rho):
    mu = make_dist(np.asarray(ws) / np.sum(ws))
    nu = np.asarray(vs[: mu.alphabet_size])
    assume(nu.sum() > 0)
    nu = nu / nu.sum()
    assume(renyi_divergence(nu, mu, q) > 1e-6)
    assert sdpi_ratio(nu, mu, q, rho) <= lambda_opt(q, mu.min_prob(), rho) + 1e-9


def test_renyi_hand_values():
    mu = make_uniform(2)
    nu = [1.0, 0.0]
    assert renyi_divergence(nu, mu, 2) == pytest.approx(math.log(2))
    assert renyi_divergence(nu, mu, math.inf) == pytest.approx(math.log(2))
    assert renyi_divergence([0.5, 0.5], mu, 3) == pytest.approx(0.0, abs=1e-15)
    # D_2 = ln sum nu^2 / mu
    assert renyi_divergence([0.25, 0.75], mu, 2) == pytest.approx(math.log(2 * (0.0625 + 0.5625)))


def test_renyi_errors():
    with pytest.raises(QNotSupported):
        renyi_divergence([0.5, 0.5], make_uniform(2), 1.0)
    with pytest.raises(NuEqualsMu):
        sdpi_ratio([0.5, 0.5], make_uniform(2), 2, 0.5)


def test_z_of_lambda():
    assert z_of_lambda(5, 0.0) == 0.0
    assert z_of_lambda(5, 1.0) == pytest.approx(1.0)
    assert z_of_lambda(2, 0.5) == pytest.approx(math.sqrt(2) - 1)


@given(st.sampled_from([2.0, 3.0, 5.0, 10.0]), st.floats(0.01, 0.99), st.floats(0.05, 20.0))
def test_extremal_rv_matches_lambda(q, rho, alpha):
    X = extremal_rv(alpha)
    assert X.mean() == pytest.approx(0.0, abs=1e-12)
    assert r_ratio(X, q, rho) == pytest.approx(lambda_opt(q, 1 / (1 + alpha), rho), rel=1e-9)


@settings(max_examples=200)
@given(st.sampled_from([2.0, 3.0, 5.0]), st.floats(0.05, 0.95), st.floats(0.2, 5.0),
       st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.0, 1.0))
def test_r_ratio_bounded_by_lambda(q, rho, alpha, a, c, w):
    # ternary mean-zero variable with atoms in [-1, alpha]
    lo, hi = -a, c * alpha
    mid = lo + w * (hi - lo)
    pm = 0.3
    ph = (-pm * mid - (1 - pm) * lo) / (hi - lo)
    pl = 1 - pm - ph
    assume(pl > 1e-6 and ph > 1e-6 and hi - lo > 1e-6)
    X = FiniteRV.of([lo, mid, hi], [pl, pm, ph])
    assert r_ratio(X, q, rho) <= lambda_opt(q, 1 / (1 + alpha), rho) + 1e-9


def test_r_ratio_errors():
    with pytest.raises(ConstantRV):
        r_ratio(FiniteRV.of([0.0], [1.0]), 2, 0.5)
    with pytest.raises(MeanNotZero):
        r_ratio(FiniteRV.of([1.0, -0.5], [0.5, 0.5]), 2, 0.5)
    with pytest.raises(AtomBelowMinusOne):
        r_ratio(FiniteRV.of([2.0, -2.0], [0.5, 0.5]), 2, 0.5)
    with pytest.raises(AlphaNonPositive):
        extremal_rv(0.0)


def test_in_P_star():
    assert extremal_rv(2.0).in_P_star(2.0)
    assert not extremal_rv(2.0).in_P_star(1.0)


def test_near_constant_ratio_is_stable():
    X = FiniteRV.of([1e-9, -1e-9], [0.5, 0.5])
    # second-order expansion gives rho^2
    assert r_ratio(X, 2, 0.5) == pytest.approx(0.25, rel=1e-6)


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("rho", [0.3, 0.7])
@pytest.mark.parametrize("alpha", [0.5, 1, 3])
def test_sup_search_finds_extremal(q, rho, alpha):
    res = sup_search(q, rho, alpha, grid=1000, seed=0)
    assert sorted(res.rv.atoms) == pytest.approx([-1.0, alpha])
    assert res.value == pytest.approx(r_ratio(extremal_rv(alpha), q, rho), abs=1e-6)
    assert res.value == pytest.approx(lambda_opt(q, 1 / (1 + alpha), rho), abs=1e-6)


def test_sup_search_deterministic_and_ternary_below():
    a = sup_search(3, 0.4, 2.0, grid=200, seed=5)
    b = sup_search(3, 0.4, 2.0, grid=200, seed=5)
    assert a == b
    assert ternary_max(3, 0.4, 2.0, 5000, seed=1) < lambda_opt(3, 1 / 3, 0.4)
