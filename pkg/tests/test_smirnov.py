import cmath
import math

import numpy as np
import pytest

from conftest import C0, C1, D0, D1, EX1, EX2, EX3, geometric_inverse, max_coeff_diff, random_series
from fock_smirnov.fockops import left_mult_matrix
from fock_smirnov.series import FreeSeries, cauchy_product, evaluate, fock_norm_sq, invert, scale
from fock_smirnov.smirnov import (
    a_inverse,
    canonical_pair,
    fejer_riesz_degree1,
    gram_symbol,
    graph_representer,
    isometry_residual,
    reachable_words,
    sample_ball_tuples,
    symbol_matrix,
    verify_pair,
)
from fock_smirnov.words import enumerate_words


def test_fejer_riesz():
    assert fejer_riesz_degree1(3, 1) == pytest.approx((C0, C1), abs=1e-15)
    d0, d1 = fejer_riesz_degree1(2.5, 0.5)
    assert (d0, d1) == pytest.approx((D0, D1), abs=1e-15)
    assert d0 * d1 == pytest.approx(0.5, abs=1e-15)
    assert d0**2 + d1**2 == pytest.approx(2.5, abs=1e-15)
    assert fejer_riesz_degree1(1, 0) == (1.0, 0.0)


def test_fejer_riesz_reproduces_symbol_on_circle():
    r0, r1 = 4.0, 1.2 - 0.9j
    c0, c1 = fejer_riesz_degree1(r0, r1)
    phase = r1 / abs(r1)
    for t in np.linspace(0, 2 * np.pi, 17):
        z = cmath.exp(1j * t)
        symbol = r0 + r1 * z + np.conj(r1) * np.conj(z)
        assert abs(c0 + c1 * phase * z) ** 2 == pytest.approx(symbol.real, abs=1e-13)


@pytest.mark.parametrize("r0,r1", [(2, 1), (1, 0.7), (0, 0)])
def test_fejer_riesz_rejects_nonpositive(r0, r1):
    with pytest.raises(ValueError):
        fejer_riesz_degree1(r0, r1)


def test_gram_symbol_examples():
    assert gram_symbol([EX1]) == pytest.approx({(): 2.0})
    tau = gram_symbol([EX2])
    assert tau == pytest.approx({(): 2.0, (2,): 1.0})
    tau = gram_symbol([EX3])
    assert tau == pytest.approx({(): 1.5, (2,): 0.5})


def test_symbol_matrix_equals_dense_gram(rng):
    from fock_smirnov.fockops import gram_defect

    for _ in range(10):
        d = int(rng.integers(1, 4))
        Hs = [random_series(rng, d, 2) for _ in range(2)]
        N = 3
        dense = gram_defect(Hs, N)
        S = symbol_matrix(gram_symbol(Hs), enumerate_words(d, N), N, shift=1.0).toarray()
        assert np.max(np.abs(dense - S)) < 1e-12


def test_representer_examples():
    c = graph_representer([EX1], 6)
    assert c.words() == [()] and c.constant == pytest.approx(1 / 3, abs=1e-15)
    c = graph_representer([FreeSeries.zero(2)], 6)
    assert c == FreeSeries.one(2)


def test_representer_example2_tridiagonal():
    N = 8
    c = graph_representer([EX2], N)
    assert set(c.coeffs) == {(2,) * k for k in range(N + 1)}
    ck = [c[(2,) * k].real for k in range(N + 1)]
    # 3 c_k + c_{k-1} + c_{k+1} = delta_k0, with c_{-1} = c_{N+1} = 0
    for k in range(N + 1):
        lhs = 3 * ck[k] + (ck[k - 1] if k > 0 else 0) + (ck[k + 1] if k < N else 0)
        assert lhs == pytest.approx(1.0 if k == 0 else 0.0, abs=1e-14)
    assert all(ck[k] * ck[k + 1] < 0 for k in range(N))
    assert all(abs(ck[k]) > abs(ck[k + 1]) for k in range(N))
    # infinite-system solution c = C^{-1} / c0
    assert ck[0] == pytest.approx(1 / C0**2, abs=1e-8)


def test_dense_and_sparse_representers_agree(rng):
    for _ in range(12):
        d = int(rng.integers(1, 4))
        Hs = [random_series(rng, d, 2, density=0.4) for _ in range(int(rng.integers(1, 3)))]
        N = 3 if d == 3 else 4
        dense = graph_representer(Hs, N, method="dense")
        sparse = graph_representer(Hs, N)
        assert max_coeff_diff(dense, sparse) < 1e-12


def test_reachable_words_closed():
    tau = {(): 1.0, (1, 2): 0.3, (2,): 0.1}
    words = reachable_words(tau, 5)
    ws = set(words)
    for w in words:
        for g in [(1, 2), (2,)]:
            if len(g) + len(w) <= 5:
                assert g + w in ws
            if w[: len(g)] == g:
                assert w[len(g):] in ws


def test_canonical_pair_example1():
    for N in range(2, 11):
        pair = canonical_pair([EX1], N)
        assert max_coeff_diff(pair.A, FreeSeries(2, {(): 3**-0.5})) < 1e-15
        assert max_coeff_diff(pair.B_list[0], scale(3**-0.5, EX1)) < 1e-15
        assert pair.representer_norm_sq == pytest.approx(1 / 3, abs=1e-15)


def test_canonical_pair_zero():
    pair = canonical_pair([FreeSeries.zero(2)], 5)
    assert pair.A == FreeSeries.one(2)
    assert pair.B_list[0].is_zero()
    pair = canonical_pair([], 5, d=2)
    assert pair.A == FreeSeries.one(2) and pair.B_list == ()


@pytest.mark.parametrize("H,c0,c1", [(EX2, C0, C1), (EX3, D0, D1)], ids=["ex2", "ex3"])
def test_canonical_pair_matches_closed_form(H, c0, c1):
    N = 30
    pair = canonical_pair([H], N)
    assert max_coeff_diff(pair.A, geometric_inverse(c0, c1, N)) < 1e-8
    expect_B = cauchy_product(H, geometric_inverse(c0, c1, N), N + 2)
    assert max_coeff_diff(pair.B_list[0], expect_B) < 1e-8


def test_example2_numerator_factors():
    N = 30
    pair = canonical_pair([EX2], N)
    X1 = FreeSeries.variable(2, 1)
    one_plus_x2 = FreeSeries(2, {(): 1, (2,): 1})
    expect_B = cauchy_product(cauchy_product(X1, one_plus_x2), geometric_inverse(C0, C1, N), N + 2)
    assert max_coeff_diff(pair.B_list[0], expect_B) < 1e-8


def test_oracle_equivalence_with_fejer_riesz():
    N = 30
    c0, c1 = fejer_riesz_degree1(3, 1)
    C = FreeSeries(2, {(): c0, (2,): c1})
    pair = canonical_pair([EX2], N)
    assert max_coeff_diff(pair.A, invert(C, N)) < 1e-8


@pytest.mark.parametrize("H,c0,c1,target", [(EX1, 3**0.5, 0, 3.0), (EX2, C0, C1, 3.0), (EX3, D0, D1, 2.5)])
def test_a_inverse_norm(H, c0, c1, target):
    pair = canonical_pair([H], 30)
    inv = a_inverse(pair)
    assert max_coeff_diff(inv, FreeSeries(2, {(): c0, (2,): c1})) < 1e-8
    assert fock_norm_sq(inv) == pytest.approx(target, abs=1e-8)
    assert fock_norm_sq(inv) == pytest.approx(1 + fock_norm_sq(H), abs=1e-8)


def test_phase_convention_and_uniqueness(rng):
    for _ in range(10):
        H = random_series(rng, 2, 2)
        pair = canonical_pair([H], 4)
        assert pair.A.constant.imag == 0 and pair.A.constant.real > 0
        assert 0 < pair.representer_norm_sq <= 1
        theta = rng.uniform(0, 2 * math.pi)
        rotated = canonical_pair([scale(cmath.exp(1j * theta), H)], 4)
        assert max_coeff_diff(pair.A, rotated.A) < 1e-12
        assert max_coeff_diff(scale(cmath.exp(1j * theta), pair.B_list[0]), rotated.B_list[0]) < 1e-12
        again = canonical_pair([H], 4)
        assert again.A == pair.A


def test_outer_triangularity(rng):
    H = random_series(rng, 2, 2)
    pair = canonical_pair([H], 4)
    op = left_mult_matrix(pair.A, 3)
    for k in range(4):
        blk = op.block(k, k)
        assert np.allclose(blk, pair.a_empty * np.eye(blk.shape[0]), atol=0)


def test_isometry_dense_matches_matrix_route(rng):
    H = random_series(rng, 2, 2)
    pair = canonical_pair([H], 6)
    K = 3
    blocks = [left_mult_matrix(F, K).matrix for F in (pair.A,) + pair.B_list]
    gram = sum(b.conj().T @ b for b in blocks)
    direct = np.max(np.abs(np.linalg.eigvalsh(gram - np.eye(gram.shape[0]))))
    residual, method = isometry_residual(pair, K)
    assert method == "dense"
    assert residual == pytest.approx(direct, rel=1e-9, abs=1e-14)


def test_symbol_bound_dominates_exact(rng, monkeypatch):
    import fock_smirnov.smirnov as sm

    H = random_series(rng, 2, 2)
    pair = canonical_pair([H], 6)
    exact, _ = isometry_residual(pair, 3)
    monkeypatch.setattr(sm, "DENSE_ISOMETRY_LIMIT", 0)
    bound, method = isometry_residual(pair, 3)
    assert method == "symbol-bound"
    assert bound >= exact - 1e-15


def test_verify_pair_examples():
    rep = verify_pair([EX1], canonical_pair([EX1], 4), tol=1e-12)
    assert rep.isometry_residual <= 1e-12
    assert rep.factorization_residual <= 1e-12
    assert rep.norm_identity_residual <= 1e-12
    assert rep.invertibility_margin == pytest.approx(3**-0.5, abs=1e-12)
    assert rep.passed(1e-12)

    zero = FreeSeries.zero(2)
    rep = verify_pair([zero], canonical_pair([zero], 4))
    assert rep.isometry_residual == 0 and rep.invertibility_margin == pytest.approx(1.0, abs=1e-15)

    rep = verify_pair([EX2], canonical_pair([EX2], 30))
    assert rep.passed(1e-8)
    assert rep.isometry_residual <= 1e-8 and rep.factorization_residual <= 1e-8


def test_verify_pair_detects_bad_pair():
    good = canonical_pair([EX2], 10)
    from fock_smirnov.smirnov import SmirnovPair

    bad = SmirnovPair(A=scale(1.1, good.A), B_list=good.B_list, N=10, representer_norm_sq=1.0)
    rep = verify_pair([EX2], bad)
    assert not rep.passed(1e-8)
    assert rep.isometry_residual > 1e-2 and rep.factorization_residual > 1e-2


def test_verify_is_deterministic():
    pair = canonical_pair([EX3], 12)
    assert verify_pair([EX3], pair, seed=5).to_json() == verify_pair([EX3], pair, seed=5).to_json()


def test_sequence_common_denominator():
    H_list = [FreeSeries.variable(2, 1), EX3]
    pair = canonical_pair(H_list, 12)
    for H, B in zip(H_list, pair.B_list):
        assert max_coeff_diff(cauchy_product(H, pair.A, 12 + H.degree), B) < 1e-15
    rep = verify_pair(H_list, pair)
    assert rep.factorization_residual < 1e-12
    norms = [fock_norm_sq(a_inverse(canonical_pair(H_list, N))) for N in range(2, 14)]
    assert norms[-1] == pytest.approx(1 + 1 + 1.5, abs=1e-6)
    assert all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))


def test_pointwise_invertibility_random(rng):
    for k in range(10):
        d = int(rng.integers(1, 4))
        H = random_series(rng, d, 2, density=0.5)
        pair = canonical_pair([H], 3 if d == 3 else 4)
        for X in sample_ball_tuples(d, 6, seed=k):
            assert np.linalg.svd(evaluate(pair.A, X), compute_uv=False)[-1] > 0
