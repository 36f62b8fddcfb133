import pytest

from fgverify.errors import ConfigError, PoleError, UnknownTarget
from fgverify.pairs import (FunctionPair, ParamEnv, antisymmetry_residual, broken_pair,
                            builtin_pairs, check_pair, cross_factorization_residual,
                            default_sampler, orthogonality_residual, pair_by_name)
from fgverify.sampling import Sampler


def _pair(name):
    return pair_by_name(name)


def test_seven_builtin_pairs():
    names = [p.name for p in builtin_pairs()]
    assert names == ["S1", "S2", "S3", "S4", "C1", "C2", "C3"]


def test_difference_pair_orthogonality_vanishes():
    p = _pair("S1")
    env = p.env()
    assert orthogonality_residual(p, env, 1.3, -0.2j, 2.0, 0.7 + 0.1j) == pytest.approx(0, abs=1e-15)
    # (-2)(-2) - (-1)(-3) - (-1)(-1) = 0
    assert cross_factorization_residual(p, env, 1, 2, 3, 4) == 0


def test_broken_pair_hand_values():
    p = broken_pair()
    env = p.env()
    # g(1,2)f(4,3) - g(1,3)f(4,2) + g(2,3)f(4,1) = -36 + 32 - 4
    assert orthogonality_residual(p, env, 1, 2, 3, 4) == -8
    assert cross_factorization_residual(p, env, 1, 2, 3, 4) != 0


def test_c2_random_sample():
    p = _pair("C2")
    env = p.env(a=0.5, b=0.25)
    s = Sampler(1)
    a, b, c, x = s.scalars(4)
    assert abs(orthogonality_residual(p, env, a, b, c, x)) <= 1e-12


@pytest.mark.parametrize("name", ["S1", "S2", "S3", "S4", "C1", "C2", "C3"])
def test_cross_factorization_random(name):
    p = _pair(name)
    env = p.env()
    s = Sampler(2)
    worst = 0.0
    for _ in range(100):
        try:
            worst = max(worst, abs(cross_factorization_residual(p, env, *s.scalars(4))))
        except PoleError:
            continue
    assert worst <= 1e-11


@pytest.mark.parametrize("name", ["S1", "S2", "S3", "S4", "C1", "C2", "C3"])
def test_antisymmetry(name):
    p = _pair(name)
    env = p.env()
    s = Sampler(4)
    for _ in range(50):
        x, y = s.scalars(2)
        g = p.g(x, y, env)
        # theta products accumulate rounding over 2 * product_terms factors
        rel = 1e-13 if p.truncation_limited else 1e-15
        assert abs(antisymmetry_residual(p, env, x, y)) <= rel * max(1.0, abs(g))


@pytest.mark.parametrize("name", ["S1", "S2", "S3", "S4", "C1", "C2", "C3"])
def test_check_pair_passes(name):
    p = _pair(name)
    r = check_pair(p, default_sampler(p, seed=7), 1000, 1e-9)
    assert r.status == "pass", r.detail
    assert r.samples_run == 1000


def test_check_pair_broken_fails():
    p = broken_pair()
    r = check_pair(p, default_sampler(p, seed=7), 200, 1e-9)
    assert r.status == "fail"
    assert r.max_rel_residual >= 1


def test_theta_pair_tolerance_is_truncation_budget():
    p = _pair("S4")
    env = p.env()
    assert p.tolerance(1e-9, env) == pytest.approx(1e-10)
    assert p.tolerance(1e-15, env) == 1e-15


def test_rejection_rate_gate():
    # every draw is a pole: the check must not abort but must fail
    p = FunctionPair("always_pole", lambda x, y, e: x - y, lambda x, y, e: x - y,
                     pole_predicate=lambda x, y, e: True)
    r = check_pair(p, default_sampler(p), 10, 1e-9)
    assert r.status == "fail"
    assert r.rejections > 0


def test_unbound_parameter():
    p = _pair("S2")
    with pytest.raises(ConfigError):
        check_pair(p, default_sampler(p).__class__(ParamEnv({}), 0), 10, 1e-9)
    with pytest.raises(ConfigError):
        ParamEnv({})["d"]


def test_pair_by_name():
    with pytest.raises(UnknownTarget):
        pair_by_name("BROKEN")
    assert pair_by_name("BROKEN", adversarial=True).name == "BROKEN"


def test_determinism():
    p = _pair("C3")
    r1 = check_pair(p, default_sampler(p, seed=3), 100, 1e-9)
    r2 = check_pair(p, default_sampler(p, seed=3), 100, 1e-9)
    assert r1.max_rel_residual == r2.max_rel_residual
    assert r1.detail == r2.detail
