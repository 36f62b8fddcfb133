"""q-shifted factorials, the three-case product convention, theta functions.

All scalars are Python complex numbers.  Infinite products are truncated at a
fixed number of factors and the truncation is only accepted when the last
retained factor is within ``tail_tol`` of 1.
"""
from dataclasses import dataclass

from . import kernels
from .errors import (BaseNotContracting, PoleError, TruncationInsufficient,
                     ZeroArgument)

# Factors whose modulus falls below this are treated as exact zeros.
ZERO_EPS = 1e-300


@dataclass(frozen=True)
class Truncation:
    product_terms: int = 80
    series_terms: int = 60
    tail_tol: float = 1e-12

    def __post_init__(self):
        if self.product_terms < 1 or self.series_terms < 1:
            raise ValueError("truncation sizes must be positive")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")

    def doubled(self):
        return Truncation(2 * self.product_terms, 2 * self.series_terms,
                          self.tail_tol)


DEFAULT_TRUNCATION = Truncation()


def qpochhammer(a, q, n):
    """(a; q)_n, with the reciprocal extension for negative n.

    >>> qpochhammer(0.5, 0.3, 2)
    (0.425+0j)
    """
    a = complex(a)
    q = complex(q)
    n = int(n)
    if n >= 0:
        return kernels.qprod(a, q, n)
    den = 1.0 + 0.0j
    for j in range(1, -n + 1):
        fac = 1.0 - a * q ** (-j)
        if abs(fac) <= ZERO_EPS:
            raise PoleError(f"(a;q)_{n}: factor 1 - a q^-{j} vanishes")
        den *= fac
    return 1.0 / den


def qpochhammer_inf(a, q, tr=DEFAULT_TRUNCATION):
    """Truncated (a; q)_inf with a tail check on the last retained factor."""
    a = complex(a)
    q = complex(q)
    if abs(q) >= 1:
        raise BaseNotContracting(f"|q| = {abs(q)} is not < 1")
    N = tr.product_terms
    tail = abs(a) * abs(q) ** (N - 1)
    if tail > tr.tail_tol:
        raise TruncationInsufficient(
            f"|a q^{N - 1}| = {tail:.3g} exceeds tail_tol {tr.tail_tol:.3g}")
    return kernels.qprod(a, q, N)


def qpoch_inf_many(args, q, tr=DEFAULT_TRUNCATION):
    """Product of (t; q)_inf over t in args."""
    r = 1.0 + 0.0j
    for t in args:
        r *= qpochhammer_inf(t, q, tr)
    return r


def gen_product(factor, k, m):
    """Product A_k ... A_m under the three-case convention.

    m >= k gives the ordinary product, m = k-1 gives 1 and m <= k-2 gives
    1 / (A_{m+1} ... A_{k-1}).
    """
    if m >= k:
        r = 1.0 + 0.0j
        for j in range(k, m + 1):
            r *= factor(j)
        return r
    if m == k - 1:
        return 1.0 + 0.0j
    den = 1.0 + 0.0j
    for j in range(m + 1, k):
        v = factor(j)
        if abs(v) <= ZERO_EPS:
            raise PoleError(f"reciprocal product: factor at j={j} vanishes")
        den *= v
    return 1.0 / den


def theta(x, q, tr=DEFAULT_TRUNCATION):
    """theta(x) = (x; q)_inf (q/x; q)_inf."""
    x = complex(x)
    q = complex(q)
    if x == 0:
        raise ZeroArgument("theta(0) is undefined")
    if abs(q) >= 1:
        raise BaseNotContracting(f"|q| = {abs(q)} is not < 1")
    N = tr.product_terms
    qn = abs(q) ** (N - 1)
    tail = max(abs(x), abs(q / x)) * qn
    if tail > tr.tail_tol:
        raise TruncationInsufficient(
            f"theta tail {tail:.3g} exceeds tail_tol {tr.tail_tol:.3g}")
    return kernels.theta_prod(x, q, N)


def jacobi_lhs(x, q, N):
    """Sum_{i=-N}^{N} (-1)^i q^{binom(i,2)} x^i."""
    return kernels.jacobi_sum(complex(x), complex(q), int(N))


def jacobi_triple_residual(x, q, tr=DEFAULT_TRUNCATION):
    x = complex(x)
    q = complex(q)
    if x == 0:
        raise ZeroArgument("x must be nonzero")
    lhs = jacobi_lhs(x, q, tr.series_terms)
    rhs = theta(x, q, tr) * qpochhammer_inf(q, q, tr)
    return abs(lhs - rhs)
