"""The (f,g)-inversion: finite matrix windows, the zero-sum identity,
the bilateral limit h(M) and Schlosser's bilateral matrix pair.
"""
from dataclasses import dataclass, field
import json
import math
import time
from typing import Callable

import numpy as np

from .errors import (IndexOutOfWindow, NonconvergentLimit, PoleError,
                     TruncationInsufficient)
from .qseries import (DEFAULT_TRUNCATION, gen_product, qpoch_inf_many,
                      qpochhammer, theta)
from .report import VerificationReport, cnum, status_for

POLE_GUARD = 1e-300


# -- sequences ---------------------------------------------------------------

@dataclass(frozen=True)
class IndexedSequence:
    """A map k -> Scalar, optionally restricted to [lo, hi]."""
    kind: str
    params: tuple = ()
    lo: int = None
    hi: int = None
    fn: Callable = field(default=None, compare=False, repr=False)

    def __call__(self, k):
        if (self.lo is not None and k < self.lo) or (self.hi is not None and k > self.hi):
            raise IndexOutOfWindow(f"{self.kind} sequence has no index {k}")
        return complex(self.fn(k))

    @classmethod
    def geometric(cls, alpha, ratio):
        alpha, ratio = complex(alpha), complex(ratio)
        return cls("geometric", (alpha, ratio), fn=lambda k: alpha * ratio ** k)

    @classmethod
    def affine(cls, alpha, beta):
        alpha, beta = complex(alpha), complex(beta)
        return cls("affine", (alpha, beta), fn=lambda k: alpha + beta * k)

    @classmethod
    def constant(cls, value):
        value = complex(value)
        return cls("constant", (value,), fn=lambda k: value)

    @classmethod
    def theta_geometric(cls, alpha, ratio, q, tr=DEFAULT_TRUNCATION):
        alpha, ratio = complex(alpha), complex(ratio)
        return cls("theta", (alpha, ratio, complex(q)),
                   fn=lambda k: theta(alpha * ratio ** k, q, tr))

    @classmethod
    def table(cls, values, lo=0):
        vals = tuple(complex(v) for v in values)
        return cls("table", vals, lo, lo + len(vals) - 1, fn=lambda k: vals[k - lo])

    @classmethod
    def custom(cls, fn, label="custom"):
        return cls(label, (), fn=fn)


def geometric_phase(alpha, rho, phi):
    """alpha * (rho e^{i phi})^k, the generic complex sequences used in tests."""
    return IndexedSequence.geometric(alpha, rho * complex(math.cos(phi), math.sin(phi)))


# -- matrix windows --------------------------------------------------------------

@dataclass(frozen=True)
class MatrixWindow:
    rows: tuple
    cols: tuple
    entries: np.ndarray

    def __post_init__(self):
        nr = self.rows[1] - self.rows[0] + 1
        nc = self.cols[1] - self.cols[0] + 1
        e = np.asarray(self.entries, dtype=complex)
        if e.shape != (nr, nc):
            raise ValueError("entries do not match the row/column ranges")
        object.__setattr__(self, "entries", e)

    def __call__(self, n, k):
        return self.entries[n - self.rows[0], k - self.cols[0]]

    def to_json(self):
        return json.dumps({"rows": list(self.rows), "cols": list(self.cols),
                           "entries": [[cnum(z) for z in row] for row in self.entries]})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        e = np.array([[complex(re, im) for re, im in row] for row in d["entries"]])
        return cls(tuple(d["rows"]), tuple(d["cols"]), e)


def _nonzero(v, what):
    if abs(v) <= POLE_GUARD or not np.isfinite(v):
        raise PoleError(what)
    return v


def build_F(pair, env, xs, bs, rows, cols):
    """f_{n,k} = prod_{i=k}^{n-1} f(x_i,b_k) / prod_{i=k+1}^{n} g(b_i,b_k), zero above the diagonal."""
    f, g = pair.f, pair.g
    r0, r1 = rows
    c0, c1 = cols
    E = np.zeros((r1 - r0 + 1, c1 - c0 + 1), dtype=complex)
    for k in range(c0, c1 + 1):
        bk = bs(k)
        for n in range(max(k, r0), r1 + 1):
            num = gen_product(lambda i: f(xs(i), bk, env), k, n - 1)

            def gfac(i):
                return _nonzero(g(bs(i), bk, env), f"g(b_{i}, b_{k}) vanishes")
            den = gen_product(gfac, k + 1, n)
            E[n - r0, k - c0] = num / den
    return MatrixWindow((r0, r1), (c0, c1), E)


def build_G(pair, env, xs, bs, rows, cols):
    """g_{n,k} = f(x_k,b_k)/f(x_n,b_n) prod_{i=k+1}^{n} f(x_i,b_n) / prod_{i=k}^{n-1} g(b_i,b_n)."""
    f, g = pair.f, pair.g
    r0, r1 = rows
    c0, c1 = cols
    E = np.zeros((r1 - r0 + 1, c1 - c0 + 1), dtype=complex)
    for n in range(r0, r1 + 1):
        bn = bs(n)
        fnn = _nonzero(f(xs(n), bn, env), f"f(x_{n}, b_{n}) vanishes")
        for k in range(c0, min(n, c1) + 1):
            ratio = f(xs(k), bs(k), env) / fnn
            num = gen_product(lambda i: f(xs(i), bn, env), k + 1, n)

            def gfac(i):
                return _nonzero(g(bs(i), bn, env), f"g(b_{i}, b_{n}) vanishes")
            den = gen_product(gfac, k, n - 1)
            E[n - r0, k - c0] = ratio * num / den
    return MatrixWindow((r0, r1), (c0, c1), E)


def _product_residual(A, B):
    """Entrywise |(AB) - I| and the per-entry scale max_i |A_{n,i} B_{i,k}|."""
    P = A[:, :, None] * B[None, :, :]
    prod = P.sum(axis=1)
    scale = np.abs(P).max(axis=1)
    err = np.abs(prod - np.eye(A.shape[0]))
    rel = np.where(scale > 1e-14, err / np.where(scale > 0, scale, 1.0), err)
    return err, rel


def verify_inverse(F, G, tol, name="inverse", seed=0):
    """Check FG = I and GF = I on a common square window."""
    t0 = time.perf_counter()
    if F.rows != F.cols or G.rows != G.cols or F.rows != G.rows:
        raise ValueError("F and G must be square on the same window")
    worst_abs = worst_rel = off_rel = 0.0
    detail = {}
    n0 = F.rows[0]
    for label, A, B in (("FG", F.entries, G.entries), ("GF", G.entries, F.entries)):
        err, rel = _product_residual(A, B)
        i, j = np.unravel_index(int(np.argmax(rel)), rel.shape)
        worst_abs = max(worst_abs, float(err.max()))
        mask = ~np.eye(rel.shape[0], dtype=bool)
        if mask.any():
            off_rel = max(off_rel, float(rel[mask].max()))
        if rel[i, j] >= worst_rel:
            worst_rel = float(rel[i, j])
            detail = {"product": label, "n": int(i + n0), "k": int(j + n0)}
    detail["max_offdiag_rel"] = off_rel
    detail["tolerance"] = tol
    return VerificationReport(name, status_for(worst_rel, tol), worst_abs, worst_rel,
                              samples_run=1, seed=seed,
                              elapsed_ms=int(1000 * (time.perf_counter() - t0)),
                              detail=detail)


def random_sequences(pair, env, sampler, lo, hi, guard=1e-3, max_tries=1000):
    """Random table sequences xs, bs on [lo, hi] keeping all inversion denominators away from 0."""
    for _ in range(max_tries):
        xs = IndexedSequence.table(sampler.scalars(hi - lo + 1), lo)
        bs = IndexedSequence.table(sampler.scalars(hi - lo + 1), lo)
        ok = True
        for i in range(lo, hi + 1):
            for k in range(lo, hi + 1):
                if pair.is_pole(xs(i), bs(k), env) or pair.is_pole(bs(i), bs(k), env):
                    ok = False
                    break
                if i != k and abs(pair.g(bs(i), bs(k), env)) < guard:
                    ok = False
                    break
            if not ok or abs(pair.f(xs(i), bs(i), env)) < guard:
                ok = False
                break
        if ok:
            return xs, bs
    raise PoleError("could not draw pole-free sequences")


# -- zero-sum identity --------------------------------------------------------------

def zero_sum_terms(pair, env, as_, bs, m, n):
    """Summands of the zero-sum identity over k = -n .. m."""
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    f, g = pair.f, pair.g
    bm, bneg = bs(m), bs(-n)
    terms = []
    for k in range(-n, m + 1):
        t = f(as_(k), bs(k), env)
        t *= gen_product(lambda j: g(bs(j), bm, env), m, k - 1)
        t /= gen_product(lambda j: f(as_(j), bm, env), m, k)
        t *= gen_product(lambda j: f(as_(j), bneg, env), 1, k - 1)
        t /= gen_product(lambda j: g(bs(j), bneg, env), 1, k)
        terms.append(complex(t))
    return terms


def zero_sum_residual(pair, env, as_, bs, m, n):
    return complex(sum(zero_sum_terms(pair, env, as_, bs, m, n)))


# -- bilateral inversion -----------------------------------------------------------

def _ratio_products(pair, env, as_, bs, AM, y, tr):
    """The two doubly-infinite product ratios, truncated to product_terms factors a side."""
    f, g = pair.f, pair.g
    J = tr.product_terms
    r1 = 1.0 + 0.0j
    last1 = 0.0
    for j in range(1, J + 1):
        fac = f(as_(j), AM, env) / f(as_(j), y, env) * g(bs(j), y, env) / g(bs(j), AM, env)
        r1 *= fac
        last1 = abs(fac - 1)
    r2 = 1.0 + 0.0j
    last2 = 0.0
    for j in range(0, -J, -1):
        fac = f(as_(j), y, env) / f(as_(j), AM, env) * g(bs(j), AM, env) / g(bs(j), y, env)
        r2 *= fac
        last2 = abs(fac - 1)
    return r1, r2, max(last1, last2)


def bilateral_hypothesis_gap(pair, env, as_, bs, A, M, N, tr=DEFAULT_TRUNCATION):
    """Relative difference of the two product ratios at (A_M, A_N); zero when the hypothesis holds."""
    r1, r2, _ = _ratio_products(pair, env, as_, bs, A(M), A(N), tr)
    return abs(r1 - r2) / max(abs(r1), abs(r2))


def bilateral_h_info(pair, env, as_, bs, A, M, tr=DEFAULT_TRUNCATION,
                     eps0=1e-2, levels=6):
    """h(M) by symmetric epsilon-perturbation and Richardson extrapolation in eps^2.

    Returns (value, last_change, tail) where last_change is the relative change
    of the extrapolant between the last two levels.
    """
    AM = A(M)
    tail = 0.0

    def h_at(eps):
        nonlocal tail
        vals = []
        for s in (eps, -eps):
            y = AM * (1 + s)
            r1, r2, t = _ratio_products(pair, env, as_, bs, AM, y, tr)
            tail = max(tail, t)
            vals.append((r1 - r2) / pair.g(AM, y, env))
        return 0.5 * (vals[0] + vals[1])

    T = []
    eps = eps0
    for lvl in range(levels + 1):
        row = [h_at(eps)]
        for j in range(1, lvl + 1):
            fac = 4.0 ** j
            row.append(row[j - 1] + (row[j - 1] - T[lvl - 1][j - 1]) / (fac - 1))
        T.append(row)
        eps /= 2
    value = T[-1][-1]
    prev = T[-2][-2]
    change = abs(value - prev) / max(abs(value), 1e-300)
    if tail > tr.tail_tol:
        raise TruncationInsufficient(f"product tail {tail:.3g} exceeds {tr.tail_tol:.3g}")
    if not np.isfinite(value) or change > 1e-6:
        raise NonconvergentLimit(f"extrapolants disagree by {change:.3g}")
    return complex(value), change, tail


def bilateral_h(pair, env, as_, bs, A, M, tr=DEFAULT_TRUNCATION):
    return bilateral_h_info(pair, env, as_, bs, A, M, tr)[0]


# -- Schlosser's bilateral pair -------------------------------------------------------

def schlosser_setup(a, b, c, q):
    """Pair, env and sequences realising Schlosser's inversion as a bilateral (f,g)-inversion.

    f = g = (y - x)(1 - (a/bc) x y), a_j = b q^j, b_j = c q^j, A_n = q^{-n}.
    """
    from .pairs import builtin_pairs
    s2 = [p for p in builtin_pairs() if p.name == "S2"][0]
    env = s2.env(d=b * c / a)
    as_ = IndexedSequence.geometric(b, q)
    bs = IndexedSequence.geometric(c, q)
    A = IndexedSequence.geometric(1.0, 1.0 / q)
    return s2, env, as_, bs, A


def _schlosser_prefactor(a, b, c, q, tr):
    num = qpoch_inf_many([a * q / b, b * q / a, a * q / c, c * q / a,
                          b * q, q / b, c * q, q / c], q, tr)
    den = qpoch_inf_many([q, q, a * q, q / a, a * q / (b * c), b * c * q / a,
                          c * q / b, b * q / c], q, tr)
    return num / den


def schlosser_entries(a, b, c, q, n, k, tr=DEFAULT_TRUNCATION):
    """(A_{n,k}, B_{n,k}) of Schlosser's bilateral matrix inversion."""
    a, b, c, q = complex(a), complex(b), complex(c), complex(q)
    qp = qpochhammer
    pre = _schlosser_prefactor(a, b, c, q, tr)
    A_nk = (pre * (1 - b * c * q ** (2 * n) / a) / (1 - b * c / a)
            * qp(b, q, n + k) * qp(a / c, q, k - n)
            / (qp(c * q, q, n + k) * qp(a * q / b, q, k - n)))
    B_nk = ((1 - a * q ** (2 * n)) / (1 - a)
            * qp(c, q, n + k) * qp(a / b, q, n - k)
            / (qp(b * q, q, n + k) * qp(a * q / c, q, n - k)) * q ** (n - k))
    return complex(A_nk), complex(B_nk)


def schlosser_biorthogonality(a, b, c, q, N=3, K=25, tr=DEFAULT_TRUNCATION):
    """max |sum_{k=-K}^{K} A_{n,k} B_{k,m} - delta_{n,m}| over |n|, |m| <= N.

    Also returns the decay gate value max |A_{n,k} B_{k,m}| at |k| = K and the
    same quantity relative to the largest term of each sum.
    """
    ks = range(-K, K + 1)
    Avals = {}
    Bvals = {}
    for n in range(-N, N + 1):
        for k in ks:
            Avals[n, k] = schlosser_entries(a, b, c, q, n, k, tr)[0]
            Bvals[k, n] = schlosser_entries(a, b, c, q, k, n, tr)[1]
    worst = gate_abs = gate_rel = 0.0
    where = None
    for n in range(-N, N + 1):
        for m in range(-N, N + 1):
            terms = [Avals[n, k] * Bvals[k, m] for k in ks]
            s = sum(terms)
            r = abs(s - (1.0 if n == m else 0.0))
            if r > worst:
                worst, where = r, (n, m)
            edge = max(abs(terms[0]), abs(terms[-1]))
            gate_abs = max(gate_abs, edge)
            gate_rel = max(gate_rel, edge / max(abs(t) for t in terms))
    return {"max_residual": worst, "worst": where, "gate_abs": gate_abs,
            "gate_rel": gate_rel, "K": K, "N": N}


def schlosser_gated_K(a, b, c, q, N=3, gate=1e-10, K0=25, K_max=60, tr=DEFAULT_TRUNCATION):
    """Smallest K >= K0 whose edge terms pass the absolute decay gate."""
    for K in range(K0, K_max + 1):
        info = schlosser_biorthogonality(a, b, c, q, N, K, tr)
        if info["gate_abs"] <= gate:
            return info
    raise TruncationInsufficient(f"decay gate {gate:g} not met for K <= {K_max}")


def schlosser_h_printed(a, b, c, q, M, tr=DEFAULT_TRUNCATION):
    """The closed form for h(M) exactly as displayed alongside Schlosser's inversion."""
    a, b, c, q = complex(a), complex(b), complex(c), complex(q)
    pre = qpoch_inf_many([q, q, a * q, q / a, a * q / (b * c), b * c * q / a,
                          c * q / b, b * q / c], q, tr)
    return complex(pre * q ** (3 * M) * (1 - b * c / a) * (1 - a / (c * q ** M))
                   * (1 - a / (b * q ** M))
                   / ((1 - b) * (1 - a) * (1 - a / b) * (1 - a / c)
                      * (1 - b * c * q ** (2 * M) / a)))


def schlosser_h_closed(a, b, c, q, M, tr=DEFAULT_TRUNCATION):
    """h(M) in closed form as it follows from the bilateral sum (corrected display)."""
    a, b, c, q = complex(a), complex(b), complex(c), complex(q)
    ratio = 1.0 / _schlosser_prefactor(a, b, c, q, tr)
    return complex((1 - a) * (c - b) * (1 - b * c / a) * q ** (3 * M) * ratio
                   / ((1 - b) * (1 - c) * (1 - a / b) * (1 - a / c)
                      * (1 - b * c * q ** (2 * M) / a)))


def bilateral_sum_h(pair, env, as_, bs, A, M, N, K):
    """Direct truncated sum_k P_{M,k} G_{k,N}; equals delta_{M,N} h(M)."""
    f, g = pair.f, pair.g
    AM, AN = A(M), A(N)
    s = 0.0 + 0.0j
    for k in range(-K, K + 1):
        P = (f(as_(k), bs(k), env)
             * gen_product(lambda j: f(as_(j), AM, env), 1, k - 1)
             / gen_product(lambda j: g(bs(j), AM, env), 1, k))
        G = (gen_product(lambda j: g(bs(j), AN, env), 1, k - 1)
             / gen_product(lambda j: f(as_(j), AN, env), 1, k))
        s += P * G
    if not np.isfinite(s):
        raise NonconvergentLimit(f"truncated bilateral sum overflowed at K={K}")
    return complex(s)


# -- the closing three-term product identity ----------------------------------------------

def _th(x, q, tr):
    return theta(x, q, tr)


def transformation_521_terms(a, b, c, d, q, tr=DEFAULT_TRUNCATION):
    """(L1, L2, R) with L1 - L2 = R:

    theta(1/b)theta(1/c)theta(1/d)theta(bcd/a^2) - theta(b/a)theta(c/a)theta(d/a)theta(a/bcd)
      = -theta(a)theta(bc/a)theta(bd/a)theta(cd/a) / (bcd).
    """
    a, b, c, d, q = (complex(v) for v in (a, b, c, d, q))
    L1 = _th(1 / b, q, tr) * _th(1 / c, q, tr) * _th(1 / d, q, tr) * _th(b * c * d / a ** 2, q, tr)
    L2 = _th(b / a, q, tr) * _th(c / a, q, tr) * _th(d / a, q, tr) * _th(a / (b * c * d), q, tr)
    R = -(_th(a, q, tr) * _th(b * c / a, q, tr) * _th(b * d / a, q, tr)
          * _th(c * d / a, q, tr)) / (b * c * d)
    return L1, L2, R


def _rel3(L1, L2, R):
    scale = max(abs(L1), abs(L2), abs(R))
    d = abs(L1 - L2 - R)
    return d / scale if scale > 1e-14 else d


def transformation_521_residual(a, b, c, d, q, tr=DEFAULT_TRUNCATION):
    """Relative residual |L1 - L2 - R| / max(|L1|, |L2|, |R|) of the three-term identity."""
    return _rel3(*transformation_521_terms(a, b, c, d, q, tr))


def transformation_521_printed_terms(a, b, c, d, q, tr=DEFAULT_TRUNCATION):
    """The three products in the form displayed next to Schlosser's inversion."""
    a, b, c, d, q = (complex(v) for v in (a, b, c, d, q))
    P = lambda *args: qpoch_inf_many(args, q, tr)  # noqa: E731
    L1 = (P(a * q / b, b * q / a, a * q / c, c * q / a, b * q, q / b, c * q, q / c)
          * P(1 / b, 1 / c, 1 / d, b * c * d / a ** 2))
    L2 = P(a * q / b, a * q / c, a * q / d, b * c * d * q / a) * P(b / a, c / a, d / a, a / (b * c * d))
    R = P(a * q, q / a, a * q / (b * c), b * c * q / a, a * q / (b * d), b * d * q / a,
          c * d * q / a, a * q / (c * d))
    return L1, L2, R


def transformation_521_printed_residual(a, b, c, d, q, tr=DEFAULT_TRUNCATION):
    return _rel3(*transformation_521_printed_terms(a, b, c, d, q, tr))
