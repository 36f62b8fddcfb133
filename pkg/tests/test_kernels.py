"""Both kernel backends must agree with each other and with plain loops."""
import numpy as np
import pytest

from fgverify import kernels
from fgverify import _pykernels

BACKENDS = kernels.available_backends()


def _loop_self(L):
    n = L.shape[0]
    worst = 0.0
    for m in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    r = L[m, i] * L[k, j] - L[k, i] * L[m, j] + L[k, m] * L[i, j]
                    worst = max(worst, abs(r))
    return worst


def _loop_cross(C, L):
    n = C.shape[0]
    worst = 0.0
    for m in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    r = C[m, i] * L[k, j] - C[m, j] * L[k, i] + C[i, j] * L[k, m]
                    worst = max(worst, abs(r))
    return worst


def test_backend_reported():
    assert kernels.BACKEND in BACKENDS
    assert "python" in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_qprod_and_theta(name):
    mod = BACKENDS[name]
    a, q = 0.4 + 0.3j, 0.5 - 0.2j
    direct = np.prod([1 - a * q ** i for i in range(7)])
    assert abs(mod.qprod(a, q, 7) - direct) <= 1e-15
    assert mod.qprod(a, q, 0) == 1
    x = 0.8 - 0.1j
    assert abs(mod.theta_prod(x, q, 40) - mod.qprod(x, q, 40) * mod.qprod(q / x, q, 40)) <= 1e-15


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_jacobi_sum(name):
    mod = BACKENDS[name]
    x, q = 1.1 + 0.3j, 0.3 + 0.1j
    direct = sum((-1) ** i * q ** (i * (i - 1) // 2) * x ** i for i in range(-12, 13))
    assert abs(mod.jacobi_sum(x, q, 12) - direct) <= 1e-13


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_scans_match_loops(name):
    mod = BACKENDS[name]
    rng = np.random.default_rng(3)
    L = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    C = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert mod.self_orth_max(L) == pytest.approx(_loop_self(L), rel=1e-12)
    assert mod.cross_orth_max(C, L) == pytest.approx(_loop_cross(C, L), rel=1e-12)


def test_backends_agree():
    rng = np.random.default_rng(11)
    L = rng.normal(size=(13, 13)) + 1j * rng.normal(size=(13, 13))
    C = rng.normal(size=(13, 13)) + 1j * rng.normal(size=(13, 13))
    ref = _pykernels
    for mod in BACKENDS.values():
        assert mod.self_orth_max(L) == pytest.approx(ref.self_orth_max(L), rel=1e-12)
        assert mod.cross_orth_max(C, L) == pytest.approx(ref.cross_orth_max(C, L), rel=1e-12)
        assert abs(mod.qprod(0.3, 0.6, 50) - ref.qprod(0.3, 0.6, 50)) <= 1e-15
