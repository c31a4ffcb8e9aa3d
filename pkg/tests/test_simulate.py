import itertools
import math

import numpy as np
import pytest

import _corpus
from sdpicodes.channel import bhattacharyya, make_generic, make_kec, make_ksc
from sdpicodes.code import make_code, min_distance, weight_distribution
from sdpicodes.errors import CodeTooLargeForMAP, InputError, TooLarge
from sdpicodes.gf import make_field
from sdpicodes.simulate import SimResult, erasure_exact, monte_carlo_pb

F3 = make_field(3)


def _exact_map_pb(code, channel):
    """``1 - (1/|C|) sum_y max_c W(y|c)`` by enumerating every output word."""
    cws = code.all_codewords()
    W = channel.transition
    total = 0.0
    for y in itertools.product(range(channel.output_size), repeat=code.n):
        total += max(np.prod(W[c, y]) for c in cws)
    return 1.0 - total / len(cws)


def test_erasure_exact_repetition():
    rep = _corpus.repetition(3)
    for lam in np.arange(1, 10) / 10:
        amb, pb = erasure_exact(rep, lam)
        assert amb == pytest.approx(lam**3, abs=1e-12)
        assert pb == pytest.approx(lam**3 / 2, abs=1e-12)


def test_erasure_exact_endpoints(small_corpus):
    for code in small_corpus:
        assert erasure_exact(code, 0.0) == (0.0, 0.0)
        assert erasure_exact(code, 1.0)[1] == pytest.approx(1 - code.k ** (-code.dim), abs=1e-12)


def test_erasure_exact_sandwich(small_corpus):
    for code in small_corpus:
        k = code.k
        for lam in (0.2, 0.5, 0.8):
            amb, pb = erasure_exact(code, lam)
            assert (k - 1) / k * amb - 1e-12 <= pb <= amb + 1e-12


def test_erasure_exact_matches_brute_force(hamming):
    for lam in (0.3, 0.6):
        assert erasure_exact(hamming, lam)[1] == pytest.approx(
            _exact_map_pb(hamming, make_kec(2, lam)), abs=1e-12)


def test_erasure_exact_errors():
    with pytest.raises(TooLarge):
        erasure_exact(make_code(make_field(2), [[1] * 21]), 0.5)
    with pytest.raises(InputError):
        erasure_exact(_corpus.repetition(3), -0.1)


def test_noiseless_zero(hamming):
    assert monte_carlo_pb(hamming, make_ksc(2, 0.0), 5000, 1).p_b_estimate == 0.0


def test_kec_repetition_mc():
    r = monte_carlo_pb(_corpus.repetition(3), make_kec(2, 0.5), 10**5, 2)
    assert r.exact == pytest.approx(0.0625, abs=1e-12)
    assert abs(r.p_b_estimate - r.exact) <= 4 * r.stderr
    assert r.stderr == pytest.approx(math.sqrt(r.p_b_estimate * (1 - r.p_b_estimate) / 10**5))


@pytest.mark.parametrize("code,channel", [
    (_corpus.repetition(3), make_ksc(2, 0.2)),
    (_corpus.parity(3, 3), make_ksc(3, 0.15)),
    (make_code(make_field(2), [[1, 1, 0, 1], [0, 1, 1, 1]]), make_ksc(2, 0.1)),
    (_corpus.repetition(3, 3), make_generic([[0.7, 0.2, 0.1], [0.1, 0.6, 0.3], [0.2, 0.2, 0.6]])),
])
def test_mc_matches_brute_force(code, channel):
    exact = _exact_map_pb(code, channel)
    r = monte_carlo_pb(code, channel, 50000, 9)
    assert abs(r.p_b_estimate - exact) <= 4 * r.stderr + 1e-12


def test_determinism(hamming):
    a = monte_carlo_pb(hamming, make_ksc(2, 0.05), 10000, 42)
    b = monte_carlo_pb(hamming, make_ksc(2, 0.05), 10000, 42)
    assert a == b
    assert isinstance(a, SimResult) and a.to_dict()["seed"] == 42
    c = monte_carlo_pb(hamming, make_ksc(2, 0.05), 10000, 43)
    assert c != a


def test_tie_breaks_agree():
    # the erasure channel produces many ties
    rep = _corpus.repetition(3)
    w = make_kec(2, 0.6)
    a = monte_carlo_pb(rep, w, 50000, 5, tie_break="first")
    b = monte_carlo_pb(rep, w, 50000, 5, tie_break="last")
    assert abs(a.p_b_estimate - b.p_b_estimate) <= 4 * math.hypot(a.stderr, b.stderr)


@pytest.mark.parametrize("channel", [make_ksc(2, 0.1), make_kec(2, 0.4)])
def test_zero_codeword_agrees(hamming, channel):
    a = monte_carlo_pb(hamming, channel, 50000, 6, transmit="uniform")
    b = monte_carlo_pb(hamming, channel, 50000, 7, transmit="zero")
    assert abs(a.p_b_estimate - b.p_b_estimate) <= 4 * math.hypot(a.stderr, b.stderr)


def test_union_consistency(small_corpus):
    for code in small_corpus[:20]:
        if code.k > 3 or code.dim == 0:
            continue
        wd = weight_distribution(code)
        d = min_distance(code)
        for w in (make_ksc(code.k, 0.02), make_kec(code.k, 0.1)):
            Z = bhattacharyya(w)
            union = sum(a * Z**i for i, a in enumerate(wd.counts) if i >= d)
            if union >= 1:
                continue
            r = monte_carlo_pb(code, w, 20000, 11)
            assert r.p_b_estimate <= union + 4 * r.stderr + 1e-12


def test_errors(hamming):
    with pytest.raises(CodeTooLargeForMAP):
        monte_carlo_pb(make_code(make_field(2), np.eye(17, dtype=int)), make_ksc(2, 0.1), 10, 1)
    with pytest.raises(InputError):
        monte_carlo_pb(hamming, make_ksc(3, 0.1), 10, 1)
    with pytest.raises(InputError):
        monte_carlo_pb(hamming, make_ksc(2, 0.1), 0, 1)
    with pytest.raises(InputError):
        monte_carlo_pb(hamming, make_ksc(2, 0.1), 10, 1, tie_break="random")
