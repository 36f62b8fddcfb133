"""Pure-Python / numpy implementations of the hot kernels.

This module mirrors ``_ckernels`` function for function.  It is used when the
compiled extension is unavailable or when FGVERIFY_PURE_PYTHON is set.
"""
import numpy as np


def qprod(a, q, n):
    """Return prod_{i=0}^{n-1} (1 - a q^i) for n >= 0."""
    a = complex(a)
    q = complex(q)
    r = 1.0 + 0.0j
    t = a
    for _ in range(n):
        r *= 1.0 - t
        t *= q
    return r


def theta_prod(x, q, n):
    x = complex(x)
    q = complex(q)
    return qprod(x, q, n) * qprod(q / x, q, n)


def jacobi_sum(x, q, N):
    """Sum_{i=-N}^{N} (-1)^i q^{i(i-1)/2} x^i, built by term ratios."""
    x = complex(x)
    q = complex(q)
    total = 1.0 + 0.0j
    t = 1.0 + 0.0j
    qi = 1.0 + 0.0j
    for _ in range(N):
        # t_{i+1} = -x q^i t_i
        t = -x * qi * t
        qi *= q
        total += t
    t = 1.0 + 0.0j
    qi = 1.0 / q
    for _ in range(N):
        # t_{i-1} = -t_i / (x q^{i-1})
        t = -t / (x * qi)
        qi /= q
        total += t
    return total


def self_orth_max(lam):
    """Max |lam(m,i)lam(k,j) - lam(k,i)lam(m,j) + lam(k,m)lam(i,j)| over all quadruples."""
    L = np.asarray(lam, dtype=complex)
    T = L.T
    r = (L[:, :, None, None] * T[None, None, :, :]
         - T[None, :, None, :] * L[:, None, :, None]
         + T[:, None, None, :] * L[None, :, :, None])
    return float(np.abs(r).max())


def cross_orth_max(c, lam):
    """Max |c(m,i)lam(k,j) - c(m,j)lam(k,i) + c(i,j)lam(k,m)| over all quadruples."""
    C = np.asarray(c, dtype=complex)
    L = np.asarray(lam, dtype=complex)
    LT = L.T
    r = (C[:, :, None, None] * LT[None, None, :, :]
         - C[:, None, :, None] * LT[None, :, None, :]
         + C[None, :, :, None] * LT[:, None, None, :])
    return float(np.abs(r).max())
