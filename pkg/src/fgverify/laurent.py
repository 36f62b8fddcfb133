"""Truncated bilateral Laurent series in one and two variables.

A ``BilateralSeries2`` stores lambda(i, j) for i, j in [-M, M]; entry
``coeffs[i + M, j + M]`` is the coefficient of x^i y^j.
"""
from dataclasses import dataclass
import json

import numpy as np

from . import kernels
from .errors import IndexOutOfWindow, NotSelfOrthogonal, ZeroArgument, ZeroPivot
from .qseries import DEFAULT_TRUNCATION, qpochhammer_inf

EXHAUSTIVE_MAX_WINDOW = 6
SAMPLED_QUADRUPLES = 10_000


@dataclass(frozen=True)
class UnivariateSeries:
    window: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if self.window < 1 or c.shape != (2 * self.window + 1,):
            raise ValueError("coefficient array does not match the window")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficient")
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, i):
        if abs(i) > self.window:
            raise IndexOutOfWindow(f"index {i} outside [-{self.window}, {self.window}]")
        return self.coeffs[i + self.window]

    @classmethod
    def from_dict(cls, terms, window):
        c = np.zeros(2 * window + 1, dtype=complex)
        for i, v in terms.items():
            if abs(i) > window:
                raise IndexOutOfWindow(f"index {i} outside window {window}")
            c[i + window] = v
        return cls(window, c)

    def __call__(self, x):
        x = complex(x)
        if x == 0 and np.any(self.coeffs[:self.window] != 0):
            raise ZeroArgument("negative powers at x = 0")
        return complex(sum(self.coeffs[i + self.window] * x ** i
                           for i in range(-self.window, self.window + 1)))


@dataclass(frozen=True)
class Pivot:
    m0: int
    k0: int


@dataclass(frozen=True)
class BilateralSeries2:
    window: int
    coeffs: np.ndarray

    def __post_init__(self):
        n = 2 * self.window + 1
        c = np.asarray(self.coeffs, dtype=complex)
        if self.window < 1 or c.shape != (n, n):
            raise ValueError("coefficient array does not match the window")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficient")
        object.__setattr__(self, "coeffs", c)

    def _check(self, *idx):
        for i in idx:
            if abs(i) > self.window:
                raise IndexOutOfWindow(f"index {i} outside [-{self.window}, {self.window}]")

    def __call__(self, i, j):
        """The coefficient lambda(i, j)."""
        self._check(i, j)
        M = self.window
        return self.coeffs[i + M, j + M]

    @property
    def indices(self):
        return range(-self.window, self.window + 1)

    @classmethod
    def zeros(cls, window):
        n = 2 * window + 1
        return cls(window, np.zeros((n, n), dtype=complex))

    @classmethod
    def from_dict(cls, terms, window):
        n = 2 * window + 1
        c = np.zeros((n, n), dtype=complex)
        for (i, j), v in terms.items():
            if abs(i) > window or abs(j) > window:
                raise IndexOutOfWindow(f"({i}, {j}) outside window {window}")
            c[i + window, j + window] = v
        return cls(window, c)

    def with_coeff(self, i, j, value):
        self._check(i, j)
        c = self.coeffs.copy()
        c[i + self.window, j + self.window] = value
        return BilateralSeries2(self.window, c)

    def is_antisymmetric(self, tol=0.0):
        return float(np.abs(self.coeffs + self.coeffs.T).max()) <= tol

    def to_json(self):
        rows = [[float(z.real), float(z.imag)] for z in self.coeffs.ravel()]
        return json.dumps({"window": self.window, "coeffs": rows})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        M = d["window"]
        n = 2 * M + 1
        flat = np.array([complex(re, im) for re, im in d["coeffs"]])
        return cls(M, flat.reshape(n, n))


# -- coefficient criteria -----------------------------------------------------

def self_orth_coeff_residual(s, m, i, j, k):
    """lambda(m,i)lambda(k,j) - lambda(k,i)lambda(m,j) + lambda(k,m)lambda(i,j)."""
    s._check(m, i, j, k)
    return complex(s(m, i) * s(k, j) - s(k, i) * s(m, j) + s(k, m) * s(i, j))


def cross_orth_coeff_residual(g, f, m, i, j, k):
    """c(m,i)lambda(k,j) - c(m,j)lambda(k,i) + c(i,j)lambda(k,m), c from g, lambda from f."""
    g._check(m, i, j, k)
    f._check(m, i, j, k)
    return complex(g(m, i) * f(k, j) - g(m, j) * f(k, i) + g(i, j) * f(k, m))


def pivot_coefficient(g, p):
    c = g(p.m0, p.k0)
    if c == 0:
        raise ZeroPivot(f"c({p.m0}, {p.k0}) = 0")
    return c


def pivot_self_orth_residual(g, p, i, j):
    """c(m0,k0)c(i,j) - c(m0,i)c(k0,j) + c(m0,j)c(k0,i)."""
    c0 = pivot_coefficient(g, p)
    g._check(i, j)
    m0, k0 = p.m0, p.k0
    return complex(c0 * g(i, j) - g(m0, i) * g(k0, j) + g(m0, j) * g(k0, i))


def _scale(*series):
    s = 1.0
    for x in series:
        s *= float(np.abs(x.coeffs).max())
    return s


def _quadruples(M, rng, count):
    n = 2 * M + 1
    return rng.integers(0, n, size=(count, 4))


def self_orth_scan(s, rng=None, samples=SAMPLED_QUADRUPLES):
    """Max |self-orthogonality residual|, the scale lambda_max^2 and #quadruples.

    Exhaustive for window <= 6, otherwise ``samples`` random quadruples.
    """
    M = s.window
    if M <= EXHAUSTIVE_MAX_WINDOW:
        n = 2 * M + 1
        return kernels.self_orth_max(s.coeffs), _scale(s, s), n ** 4
    rng = np.random.default_rng(0) if rng is None else rng
    L = s.coeffs
    m, i, j, k = _quadruples(M, rng, samples).T
    r = L[m, i] * L[k, j] - L[k, i] * L[m, j] + L[k, m] * L[i, j]
    return float(np.abs(r).max()), _scale(s, s), samples


def cross_orth_scan(g, f, rng=None, samples=SAMPLED_QUADRUPLES):
    if g.window != f.window:
        raise ValueError("series windows differ")
    M = g.window
    if M <= EXHAUSTIVE_MAX_WINDOW:
        n = 2 * M + 1
        return kernels.cross_orth_max(g.coeffs, f.coeffs), _scale(g, f), n ** 4
    rng = np.random.default_rng(0) if rng is None else rng
    C, L = g.coeffs, f.coeffs
    m, i, j, k = _quadruples(M, rng, samples).T
    r = C[m, i] * L[k, j] - C[m, j] * L[k, i] + C[i, j] * L[k, m]
    return float(np.abs(r).max()), _scale(g, f), samples


def pivot_scan(g, p):
    """Max over the window of |pivot residual| and the scale c_max^2."""
    c0 = pivot_coefficient(g, p)
    M = g.window
    C = g.coeffs
    rm = C[p.m0 + M]
    rk = C[p.k0 + M]
    r = c0 * C - np.outer(rm, rk) + np.outer(rk, rm)
    return float(np.abs(r).max()), _scale(g, g)


def nonzero_pivots(g, rel=1e-12):
    M = g.window
    cmax = float(np.abs(g.coeffs).max())
    out = []
    for a in range(2 * M + 1):
        for b in range(2 * M + 1):
            if abs(g.coeffs[a, b]) > rel * cmax:
                out.append(Pivot(a - M, b - M))
    return out


def cross_implies_self(g, f, tol=1e-12):
    """Check the implication: f orthogonal to g (scan) => g self-orthogonal at every pivot.

    Returns (cross_passed, pivots_checked, worst_pivot_ratio).
    """
    r, sc, _ = cross_orth_scan(g, f)
    if not np.any(f.coeffs) or r > tol * sc:
        return False, 0, float("nan")
    worst = 0.0
    pivots = nonzero_pivots(g)
    for p in pivots:
        rp, scp = pivot_scan(g, p)
        worst = max(worst, rp / scp)
    return True, len(pivots), worst


# -- constructions -------------------------------------------------------------

def _common(P, Q):
    if P.window != Q.window:
        raise ValueError("P and Q must share a window")
    return P.window


def construct_self_orthogonal(P, Q):
    """lambda(i,j) = p_i q_j - p_j q_i, i.e. f(x,y) = P(x)Q(y) - P(y)Q(x)."""
    M = _common(P, Q)
    A = np.outer(P.coeffs, Q.coeffs)
    # A - A.T keeps lambda(i,j) = -lambda(j,i) bit for bit
    return BilateralSeries2(M, A - A.T)


def coeff_slice(g, m0):
    """j -> c(m0, j), the coefficient of x^{m0} in g(x, y)."""
    g._check(m0)
    return UnivariateSeries(g.window, g.coeffs[m0 + g.window].copy())


def construct_orthogonal_to(g, P, Q, p, tol=1e-12):
    """lambda(i,j) = (p_i c(m0,j) - q_i c(k0,j)) / c(m0,k0)."""
    c0 = pivot_coefficient(g, p)
    r, sc = pivot_scan(g, p)
    if r > tol * sc:
        raise NotSelfOrthogonal(f"pivot criterion residual {r:.3g} (scale {sc:.3g})")
    M = g.window
    if P.window != M or Q.window != M:
        raise ValueError("P, Q and g must share a window")
    cm = coeff_slice(g, p.m0).coeffs
    ck = coeff_slice(g, p.k0).coeffs
    lam = (np.outer(P.coeffs, cm) - np.outer(Q.coeffs, ck)) / c0
    return BilateralSeries2(M, lam)


def theta_pair_series(q, window, tr=DEFAULT_TRUNCATION):
    """Series of y theta(xy) theta(x/y) from its P, Q factorisation.

    p_{2m} = q^{m^2-m}/(q;q)^2 and, after dividing by q_1 = -1/(q;q)^2,
    Q_{2m+1} = q^{m^2}; all other coefficients vanish.
    """
    if window < 4:
        raise ValueError("window must be at least 4")
    q = complex(q)
    qq2 = qpochhammer_inf(q, q, tr) ** 2
    M = window
    p = np.zeros(2 * M + 1, dtype=complex)
    Qc = np.zeros(2 * M + 1, dtype=complex)
    for i in range(-M, M + 1):
        if i % 2 == 0:
            m = i // 2
            p[i + M] = q ** (m * m - m) / qq2
        else:
            m = (i - 1) // 2
            Qc[i + M] = q ** (m * m)
    return construct_self_orthogonal(UnivariateSeries(M, p), UnivariateSeries(M, Qc))


def eval_series(s, x, y):
    x = complex(x)
    y = complex(y)
    if x == 0 or y == 0:
        raise ZeroArgument("series with negative powers evaluated at 0")
    ks = np.arange(-s.window, s.window + 1)
    xp = x ** ks.astype(float)
    yp = y ** ks.astype(float)
    return complex(xp @ s.coeffs @ yp)


def series_from_function(fn, window, grid=None):
    """Laurent coefficients of fn(x, y) on the unit torus by a 2-D FFT.

    Exact (to rounding) for Laurent polynomials supported in the window; for
    other functions the result carries aliasing from outside the grid.
    """
    N = grid or 4 * window + 4
    w = np.exp(2j * np.pi * np.arange(N) / N)
    F = np.empty((N, N), dtype=complex)
    for s in range(N):
        for t in range(N):
            F[s, t] = fn(w[s], w[t])
    C = np.fft.fft2(F) / (N * N)
    M = window
    idx = np.arange(-M, M + 1) % N
    return BilateralSeries2(M, C[np.ix_(idx, idx)])


def pair_series(pair, env, window):
    """(f-series, g-series) of a pair without poles on the unit torus."""
    fs = series_from_function(lambda x, y: pair.f(x, y, env), window)
    gs = series_from_function(lambda x, y: pair.g(x, y, env), window)
    return fs, gs
