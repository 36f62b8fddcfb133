import numpy as np
import pytest

from fgverify.errors import IndexOutOfWindow, NotSelfOrthogonal, ZeroArgument, ZeroPivot
from fgverify.laurent import (BilateralSeries2, Pivot, UnivariateSeries, coeff_slice,
                              construct_orthogonal_to, construct_self_orthogonal,
                              cross_implies_self, cross_orth_coeff_residual, cross_orth_scan,
                              eval_series, nonzero_pivots, pair_series, pivot_scan,
                              pivot_self_orth_residual, self_orth_coeff_residual,
                              self_orth_scan, series_from_function, theta_pair_series)
from fgverify.pairs import ParamEnv, builtin_pairs, orthogonality_residual, FunctionPair
from fgverify.qseries import qpochhammer_inf, theta

M = 3


def xy_series(window=M):
    return BilateralSeries2.from_dict({(1, 0): 1, (0, 1): -1}, window)


def rand_series(rng, window):
    return UnivariateSeries(window, rng.normal(size=2 * window + 1)
                            + 1j * rng.normal(size=2 * window + 1))


def test_difference_series_self_orthogonal():
    s = xy_series()
    for q in [(0, 0, 1, 1), (1, 0, 0, 1), (1, 1, 0, 0), (-2, 1, 0, 3)]:
        assert self_orth_coeff_residual(s, *q) == 0


def test_non_antisymmetric_series_detected():
    s = BilateralSeries2.from_dict({(1, 0): 1, (0, 1): -1, (2, 0): 1}, M)
    assert self_orth_coeff_residual(s, 2, 0, 1, 0) != 0


def test_index_out_of_window():
    s = xy_series()
    with pytest.raises(IndexOutOfWindow):
        self_orth_coeff_residual(s, 4, 0, 0, 0)
    with pytest.raises(IndexOutOfWindow):
        coeff_slice(s, -4)


def test_random_construction_sampled_quadruples():
    rng = np.random.default_rng(0)
    s = construct_self_orthogonal(rand_series(rng, 6), rand_series(rng, 6))
    scale = np.abs(s.coeffs).max() ** 2
    idx = rng.integers(-6, 7, size=(1000, 4))
    worst = max(abs(self_orth_coeff_residual(s, *map(int, q))) for q in idx)
    assert worst <= 1e-12 * scale
    assert s.is_antisymmetric(0.0)


def test_exhaustive_scans_window_6():
    rng = np.random.default_rng(1)
    s = construct_self_orthogonal(rand_series(rng, 6), rand_series(rng, 6))
    r, scale, count = self_orth_scan(s)
    assert count == 13 ** 4
    assert r <= 1e-12 * scale


def test_sampled_scan_above_threshold():
    rng = np.random.default_rng(2)
    s = construct_self_orthogonal(rand_series(rng, 8), rand_series(rng, 8))
    r, scale, count = self_orth_scan(s)
    assert count == 10_000
    assert r <= 1e-12 * scale


def test_cross_residual_examples():
    g = xy_series()
    assert cross_orth_coeff_residual(g, g, 1, 0, 2, -1) == 0
    f = BilateralSeries2.from_dict({(1, 2): 1}, M)  # x y^2
    assert cross_orth_coeff_residual(g, f, 1, 0, 0, 1) == 0
    assert cross_orth_coeff_residual(g, f, 1, 0, 2, 1) != 0


def test_construct_orthogonal_to_quadratic():
    # g = (x - y)(1 - xy) = x - y - x^2 y + x y^2
    g = BilateralSeries2.from_dict({(1, 0): 1, (0, 1): -1, (2, 1): -1, (1, 2): 1}, 6)
    rng = np.random.default_rng(3)
    P, Q = rand_series(rng, 6), rand_series(rng, 6)
    for p in nonzero_pivots(g):
        f = construct_orthogonal_to(g, P, Q, p)
        r, scale, _ = cross_orth_scan(g, f)
        assert r <= 1e-12 * scale
        idx = rng.integers(-6, 7, size=(200, 4))
        worst = max(abs(cross_orth_coeff_residual(g, f, *map(int, q))) for q in idx)
        assert worst <= 1e-12 * scale


def test_construct_orthogonal_to_special_choices():
    g = xy_series()
    one = UnivariateSeries.from_dict({0: 1}, M)
    zero = UnivariateSeries.from_dict({}, M)
    p = Pivot(1, 0)
    f = construct_orthogonal_to(g, one, zero, p)
    # f = [x^1] g / c(1, 0): a function of y alone
    assert np.allclose(f.coeffs[M], coeff_slice(g, 1).coeffs)
    assert np.count_nonzero(f.coeffs) == 1
    r, scale, _ = cross_orth_scan(g, f)
    assert r <= 1e-12 * scale
    # p_i = c(i, k0), q_i = c(i, m0) reproduces g itself
    Pg = UnivariateSeries(M, g.coeffs[:, p.k0 + M])
    Qg = UnivariateSeries(M, g.coeffs[:, p.m0 + M])
    assert np.allclose(construct_orthogonal_to(g, Pg, Qg, p).coeffs, g.coeffs)


def test_construct_orthogonal_to_errors():
    g = xy_series()
    one = UnivariateSeries.from_dict({0: 1}, M)
    with pytest.raises(ZeroPivot):
        construct_orthogonal_to(g, one, one, Pivot(2, 2))
    bad = g.with_coeff(2, 2, 1.0)
    with pytest.raises(NotSelfOrthogonal):
        construct_orthogonal_to(bad, one, one, Pivot(1, 0))


def test_pivot_criterion():
    g = xy_series()
    for i in range(-M, M + 1):
        for j in range(-M, M + 1):
            assert pivot_self_orth_residual(g, Pivot(1, 0), i, j) == 0
    env = ParamEnv({"d": 2.0})
    s2 = [p for p in builtin_pairs() if p.name == "S2"][0]
    _, gs = pair_series(s2, env, 4)
    for p in nonzero_pivots(gs):
        r, scale = pivot_scan(gs, p)
        assert r <= 1e-14 * max(scale, 1.0)
    bad = g.with_coeff(2, 2, g(2, 2) + 1)
    r, scale = pivot_scan(bad, Pivot(1, 0))
    assert r > 0.5


def test_cross_implies_self_for_builtin_pairs():
    for pair in builtin_pairs():
        if pair.name == "S4":
            continue
        fs, gs = pair_series(pair, pair.env(), 5)
        ok, pivots, worst = cross_implies_self(gs, fs)
        assert ok and pivots > 0
        assert worst <= 1e-12


def test_constructions_trivial():
    x = UnivariateSeries.from_dict({1: 1}, M)
    one = UnivariateSeries.from_dict({0: 1}, M)
    assert np.allclose(construct_self_orthogonal(x, one).coeffs, xy_series().coeffs)
    assert not np.any(construct_self_orthogonal(x, x).coeffs)


def test_coeff_slice():
    g = xy_series()
    assert coeff_slice(g, 1)[0] == 1 and np.count_nonzero(coeff_slice(g, 1).coeffs) == 1
    assert coeff_slice(g, 0)[1] == -1 and np.count_nonzero(coeff_slice(g, 0).coeffs) == 1
    rng = np.random.default_rng(4)
    h = construct_self_orthogonal(rand_series(rng, M), rand_series(rng, M))
    rebuilt = np.array([coeff_slice(h, i).coeffs for i in range(-M, M + 1)])
    assert np.array_equal(rebuilt, h.coeffs)


def test_theta_series_matches_product():
    q = 0.3
    s = theta_pair_series(q, 12)
    r, scale, _ = self_orth_scan(s)
    assert r <= 1e-12 * scale
    rng = np.random.default_rng(5)
    for _ in range(40):
        x = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
        y = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
        exact = y * theta(x * y, q) * theta(x / y, q)
        assert abs(eval_series(s, x, y) - exact) <= 1e-8 * max(1.0, abs(exact))


def test_theta_series_coefficient_sign():
    # the coefficient of x^0 y^1 of y theta(xy) theta(x/y) is +1/(q;q)^2
    q = 0.3
    s = theta_pair_series(q, 8)
    fft = series_from_function(lambda x, y: y * theta(x * y, q) * theta(x / y, q), 8, 48)
    assert abs(s(0, 1) - fft(0, 1)) <= 1e-12
    assert s(0, 1) == pytest.approx(1 / qpochhammer_inf(q, q) ** 2, rel=1e-13)


def test_eval_series():
    assert eval_series(xy_series(), 2, 3) == -1
    rng = np.random.default_rng(6)
    h = construct_self_orthogonal(rand_series(rng, M), rand_series(rng, M))
    assert abs(eval_series(h, 0.7 + 0.2j, 0.7 + 0.2j)) <= 1e-13
    with pytest.raises(ZeroArgument):
        eval_series(h, 0, 1)


def test_functional_consistency_with_pointwise_orthogonality():
    rng = np.random.default_rng(7)
    g = construct_self_orthogonal(rand_series(rng, 4), rand_series(rng, 4))
    f = construct_orthogonal_to(g, rand_series(rng, 4), rand_series(rng, 4), nonzero_pivots(g)[0])
    pair = FunctionPair("series", lambda x, y, e: eval_series(f, x, y),
                        lambda x, y, e: eval_series(g, x, y))
    env = ParamEnv({})
    for _ in range(100):
        a, b, c, x = (rng.uniform(0.7, 1.3) * np.exp(2j * np.pi * rng.uniform()) for _ in range(4))
        terms = [pair.g(a, b, env) * pair.f(x, c, env), pair.g(a, c, env) * pair.f(x, b, env),
                 pair.g(b, c, env) * pair.f(x, a, env)]
        scale = max(abs(t) for t in terms)
        assert abs(orthogonality_residual(pair, env, a, b, c, x)) <= 1e-11 * scale


def test_json_roundtrip_and_validation():
    rng = np.random.default_rng(8)
    h = construct_self_orthogonal(rand_series(rng, 2), rand_series(rng, 2))
    assert np.array_equal(BilateralSeries2.from_json(h.to_json()).coeffs, h.coeffs)
    with pytest.raises(ValueError):
        BilateralSeries2(2, np.full((5, 5), np.nan))
    with pytest.raises(ValueError):
        BilateralSeries2(2, np.zeros((4, 4)))
