"""The general bilateral (f, g) summation and its catalog of specialisations.

For an orthogonal pair (f, g) and sequences a, b, c, d the finite sum

    sum_{k=-n}^{m} f(a_k,b_k) g(c_k,d_k)
        * prod_{j=1}^{k-1} f(a_j,c_j) / prod_{j=1}^{k} f(a_j,d_j)
        * prod_{j=1}^{k-1} g(b_j,d_j) / prod_{j=1}^{k} g(b_j,c_j)

equals  prod_{j=1}^{m} R_j - prod_{j=-n}^{0} 1/R_j  with
R_j = f(a_j,c_j) g(b_j,d_j) / (f(a_j,d_j) g(b_j,c_j)).  Products use the
empty/reciprocal convention of ``gen_product``.
"""
from dataclasses import dataclass, field, replace
import time
from typing import Callable

from . import references as refs
from .errors import ConfigError, PoleError, UnknownTarget
from .inversion import IndexedSequence, geometric_phase
from .pairs import ParamEnv, builtin_pairs, one_xy_pair
from .qseries import DEFAULT_TRUNCATION, gen_product
from .report import VerificationReport, cnum, rel_residual, status_for

POLE_GUARD = 1e-300
DEFAULT_M = 3
DEFAULT_N = 2


@dataclass(frozen=True)
class SummationInstance:
    name: str
    pair: object
    env: ParamEnv
    a: IndexedSequence
    b: IndexedSequence
    c: IndexedSequence
    d: IndexedSequence
    m: int = DEFAULT_M
    n: int = DEFAULT_N
    reference_form: Callable = field(default=None, compare=False, repr=False)
    env_seq: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    aux: dict = field(default_factory=dict, compare=False, repr=False)
    max_n: int = None
    description: str = ""
    anchor: str = ""

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")
        self.check_poles()

    def check_poles(self):
        """Raise PoleError if a denominator of the sum or the products vanishes."""
        F = _Factors(self)
        for j in range(1, self.m + 1):
            for key in ("ad", "bc"):
                _nz(F.get(key, j), f"{self.name}: {key} factor vanishes at j={j}")
        for j in range(-self.n, 1):
            for key in ("ac", "bd"):
                _nz(F.get(key, j), f"{self.name}: {key} factor vanishes at j={j}")

    def at(self, m, n):
        if m < 0 or n < 0:
            raise ValueError("m and n must be non-negative")
        return replace(self, m=m, n=n)

    def env_at(self, j):
        """Parameter environment for index j (index-dependent parameters bound)."""
        if not self.env_seq:
            return self.env
        return self.env.with_(**{k: s(j) for k, s in self.env_seq.items()})

    @property
    def unilateral(self):
        return self.max_n == 0


# -- the generic sum ------------------------------------------------------------

def _nz(v, what):
    if abs(v) <= POLE_GUARD:
        raise PoleError(what)
    return v


class _Factors:
    """Cached factor values f(a_j,c_j), f(a_j,d_j), g(b_j,d_j), g(b_j,c_j)."""

    def __init__(self, inst):
        self.inst = inst
        self.cache = {}

    def get(self, which, j):
        key = (which, j)
        if key not in self.cache:
            s = self.inst
            env = s.env_at(j)
            f, g = s.pair.f, s.pair.g
            if which == "ac":
                v = f(s.a(j), s.c(j), env)
            elif which == "ad":
                v = f(s.a(j), s.d(j), env)
            elif which == "bd":
                v = g(s.b(j), s.d(j), env)
            else:
                v = g(s.b(j), s.c(j), env)
            self.cache[key] = complex(v)
        return self.cache[key]

    def fn(self, which):
        return lambda j: self.get(which, j)


def _ratio_product(F, num_keys, den_keys, lo, hi, label):
    """prod_{j=lo}^{hi} num/den for hi >= lo - 1, guarding zero denominators."""
    num = den = 1.0 + 0.0j
    for j in range(lo, hi + 1):
        for key in num_keys:
            num *= F.get(key, j)
        for key in den_keys:
            den *= _nz(F.get(key, j), f"{label}: factor {key} vanishes at j={j}")
    return num / den


def _parts(fn, k, m):
    """gen_product(fn, k, m) as (numerator, denominator), without dividing.

    Keeping the two apart lets a vanishing factor of a reciprocal product
    land in the numerator of the summand (a zero term) instead of a pole.
    """
    if m >= k - 1:
        return gen_product(fn, k, m), 1.0 + 0.0j
    den = 1.0 + 0.0j
    for j in range(m + 1, k):
        den *= fn(j)
    return 1.0 + 0.0j, den


def summand(inst, k, _F=None):
    """The k-th term of the general sum."""
    F = _F or _Factors(inst)
    env = inst.env_at(k)
    head = inst.pair.f(inst.a(k), inst.b(k), env) * inst.pair.g(inst.c(k), inst.d(k), env)
    if head == 0:
        return 0j
    n_ac, d_ac = _parts(F.fn("ac"), 1, k - 1)
    n_bd, d_bd = _parts(F.fn("bd"), 1, k - 1)
    n_ad, d_ad = _parts(F.fn("ad"), 1, k)
    n_bc, d_bc = _parts(F.fn("bc"), 1, k)
    num = head * n_ac * n_bd * d_ad * d_bc
    if num == 0:
        return 0j
    den = _nz(d_ac * d_bd * n_ad * n_bc, f"{inst.name}: denominator vanishes at k={k}")
    return complex(num / den)


def lhs_sum(inst, _F=None):
    F = _F or _Factors(inst)
    return complex(sum(summand(inst, k, F) for k in range(-inst.n, inst.m + 1)))


def rhs_products(inst, _F=None):
    """prod_{j=1}^{m} R_j - prod_{j=-n}^{0} R_j^{-1}."""
    F = _F or _Factors(inst)
    first = _ratio_product(F, ("ac", "bd"), ("ad", "bc"), 1, inst.m, inst.name)
    second = _ratio_product(F, ("ad", "bc"), ("ac", "bd"), -inst.n, 0, inst.name)
    return complex(first - second)


def telescoping_residual(inst, m):
    """|(rhs(m) - rhs(m-1)) - summand(m)| relative to the larger side, m >= 1."""
    if m < 1:
        raise ValueError("telescoping needs m >= 1")
    hi = inst.at(m, inst.n)
    lo = inst.at(m - 1, inst.n)
    delta = rhs_products(hi) - rhs_products(lo)
    return rel_residual(delta, summand(hi, m))[1]


def verify_summation(inst, tol=1e-12):
    """Compare the sum with the telescoped products and with the display form.

    The reference display is scaled once by K = lhs / display_lhs at
    (m, n) = (0, 0); at every other point both the display identity itself and
    rhs = K * display_rhs are checked.
    """
    t0 = time.perf_counter()
    tol_eff = inst.pair.tolerance(tol, inst.env)
    detail = {"m": inst.m, "n": inst.n, "tolerance": tol_eff}
    if inst.max_n is not None and inst.n > inst.max_n:
        detail["reason"] = f"defined only for n <= {inst.max_n}"
        return VerificationReport(inst.name, "skipped", 0.0, 0.0, detail=detail)
    try:
        F = _Factors(inst)
        lhs = lhs_sum(inst, F)
        rhs = rhs_products(inst, F)
    except PoleError as exc:
        detail["reason"] = f"pole: {exc}"
        return VerificationReport(inst.name, "fail", float("inf"), float("inf"),
                                  detail=detail)
    d = abs(lhs - rhs)
    rel = d / max(abs(lhs), abs(rhs), 1e-30)
    detail.update(lhs=cnum(lhs), rhs=cnum(rhs))
    worst_rel, worst_abs = rel, d
    if inst.reference_form is not None:
        disp = inst.reference_form(inst)
        if disp is not None:
            base = inst.at(0, 0)
            bl = inst.reference_form(base)[0]
            K = lhs_sum(base) / bl
            dl, dr = disp
            a1, r1 = rel_residual(dl, dr)
            a2, r2 = rel_residual(rhs, K * dr)
            detail.update(display_lhs=cnum(dl), display_rhs=cnum(dr), K=cnum(K),
                          display_residual=r1, link_residual=r2)
            worst_rel = max(worst_rel, r1, r2)
            worst_abs = max(worst_abs, a1, a2)
        else:
            detail["reference"] = "not applicable at this (m, n)"
    return VerificationReport(
        name=inst.name, status=status_for(worst_rel, tol_eff),
        max_abs_residual=float(worst_abs), max_rel_residual=float(worst_rel),
        samples_run=1, elapsed_ms=int(1000 * (time.perf_counter() - t0)), detail=detail)


def verify_grid(inst, tol=1e-12, m_max=6, n_max=4):
    """verify_summation over 0 <= m <= m_max, 0 <= n <= n_max (skips count as neither)."""
    t0 = time.perf_counter()
    worst = None
    points = skipped = displays = 0
    failures = []
    for m in range(m_max + 1):
        for n in range(n_max + 1):
            r = verify_summation(inst.at(m, n), tol)
            if r.status == "skipped":
                skipped += 1
                continue
            points += 1
            displays += "display_residual" in r.detail
            if r.status != "pass":
                failures.append([m, n])
            if worst is None or r.max_rel_residual > worst.max_rel_residual:
                worst = r
    status = "pass" if points and not failures else "fail"
    detail = {"points": points, "skipped": skipped, "display_checks": displays,
              "failures": failures,
              "worst": worst.detail if worst else {}}
    return VerificationReport(
        name=inst.name, status=status,
        max_abs_residual=worst.max_abs_residual if worst else 0.0,
        max_rel_residual=worst.max_rel_residual if worst else 0.0,
        samples_run=points, elapsed_ms=int(1000 * (time.perf_counter() - t0)),
        detail=detail)


def unilateral_instance(pair, env, as_, bs, x, m, name="unilateral"):
    """c_k = b_0 and d_k = x: the sum starts at k = 0 because g(b_0, b_0) = 0."""
    b0 = bs(0)
    return SummationInstance(
        name, pair, env, as_, bs, IndexedSequence.constant(b0), IndexedSequence.constant(x),
        m=m, n=0, reference_form=refs.ref_unilateral, max_n=0,
        aux={"a": as_, "b": bs, "x": complex(x)},
        description="unilateral case c = b_0, d = x")


# -- catalog --------------------------------------------------------------------

DEFAULTS = {"p": 0.35, "q": 0.45, "a": 0.6, "b": 0.15, "d": 1.7, "e": 0.8,
            "x": 1.3, "y": 0.7}


def _generic():
    return {"a": geometric_phase(0.3, 1.05, 0.4), "b": geometric_phase(0.5, 0.95, -0.3),
            "c": geometric_phase(1.2, 1.04, 0.2), "d": geometric_phase(1.6, 0.97, -0.25)}


def _seq(fn, label):
    return IndexedSequence.custom(fn, label)


def _pairs():
    return {p.name: p for p in builtin_pairs()}


def _plain(name, pair, env, seqs, ref, P, description, anchor, **kw):
    return SummationInstance(name, pair, env, seqs["a"], seqs["b"], seqs["c"], seqs["d"],
                             reference_form=ref, params=P, aux=seqs,
                             description=description, anchor=anchor, **kw)


def _one_xy(P, tr):
    return _plain("one_xy", one_xy_pair(), ParamEnv({}, tr), _generic(), refs.ref_one_xy,
                  P, "f = 1, g = x - y", "basic telescoping sum")


def _subbarao_verma_31(P, tr):
    X, Y, Z = (geometric_phase(0.4, 1.03, 0.3), geometric_phase(0.7, 0.98, -0.2),
               geometric_phase(0.55, 1.02, 0.5))
    a = P["a"]

    def t(k):
        return X(k) / (a * Z(k))

    seqs = {"a": IndexedSequence.constant(0), "b": _seq(t, "t"),
            "c": _seq(lambda k: (t(k) - 1) / (1 - Y(k)), "c"),
            "d": _seq(lambda k: (t(k) - 1) / (1 - a * Z(k)), "d")}
    inst = _plain("subbarao_verma_31", one_xy_pair(), ParamEnv({}, tr), seqs,
                  refs.ref_subbarao_verma_31, P, "f = 1, g = x - y with t = x/(az)",
                  "Subbarao-Verma type sum")
    return replace(inst, aux={"x": X, "y": Y, "z": Z})


def _xy_xy(P, tr):
    return _plain("xy_xy", _pairs()["S1"], ParamEnv({}, tr), _generic(), refs.ref_xy_xy,
                  P, "f = g = x - y", "difference pair sum")


def _subbarao_verma_21(P, tr):
    U, V, W, Z = (geometric_phase(0.4, 1.03, 0.3), geometric_phase(0.7, 0.98, -0.2),
                  geometric_phase(0.55, 1.02, 0.5), geometric_phase(0.35, 0.99, -0.45))
    seqs = {"a": _seq(lambda k: U(k) * V(k) + 1 / (U(k) * V(k)), "a"),
            "b": _seq(lambda k: W(k) * Z(k) + 1 / (W(k) * Z(k)), "b"),
            "c": _seq(lambda k: U(k) / V(k) + V(k) / U(k), "c"),
            "d": _seq(lambda k: W(k) / Z(k) + Z(k) / W(k), "d")}
    inst = _plain("subbarao_verma_21", _pairs()["S1"], ParamEnv({}, tr), seqs,
                  refs.ref_subbarao_verma_21, P, "f = g = x - y in symmetric variables",
                  "Subbarao-Verma type sum")
    return replace(inst, aux={"u": U, "v": V, "w": W, "z": Z})


def _ab_form(P, tr):
    A1, A2, B1, B2 = (geometric_phase(0.45, 1.02, 0.35), geometric_phase(0.8, 0.99, -0.15),
                      geometric_phase(0.25, 1.03, 0.6), geometric_phase(1.3, 0.98, 0.25))
    seqs = {"a": _seq(lambda k: 1 / A2(k), "a"), "b": _seq(lambda k: 1 / B2(k), "b"),
            "c": _seq(lambda k: A1(k) / A2(k), "c"), "d": _seq(lambda k: B1(k) / B2(k), "d")}
    inst = _plain("ab_form", _pairs()["S1"], ParamEnv({}, tr), seqs, refs.ref_ab_form, P,
                  "f = g = x - y written with A, B sequences", "difference pair sum")
    return replace(inst, aux={"A1": A1, "A2": A2, "B1": B1, "B2": B2})


def _krattenthaler_chu(P, tr):
    g = _generic()
    A, B = g["a"], g["b"]
    b0 = B(0)
    seqs = {"a": A, "b": _seq(lambda k: b0 / B(k), "b0/b"),
            "c": IndexedSequence.constant(1), "d": IndexedSequence.constant(P["x"])}
    inst = _plain("krattenthaler_chu", _pairs()["S1"], ParamEnv({}, tr), seqs,
                  refs.ref_krattenthaler_chu, P, "unilateral f = g = x - y",
                  "Krattenthaler and Chu", max_n=0, n=0)
    return replace(inst, aux={"a": A, "b": B})


def _chu_theorem_A(P, tr):
    ca, cb, cc, cd = (geometric_phase(0.7, 1.02, 0.3), geometric_phase(1.1, 0.98, -0.4),
                      geometric_phase(0.5, 1.03, 0.15), geometric_phase(0.9, 0.99, 0.5))
    seqs = {"a": _seq(lambda i: ca(i - 1) / cb(i - 1), "a"),
            "b": _seq(lambda i: cc(i - 1) / cd(i - 1), "b"),
            "c": IndexedSequence.constant(-P["x"]), "d": IndexedSequence.constant(-P["y"])}
    inst = _plain("chu_theorem_A", _pairs()["S1"], ParamEnv({}, tr), seqs,
                  refs.ref_chu_theorem_A, P, "f = g = x - y with phi/psi products",
                  "Chu's bilateral theorem")
    return replace(inst, aux={"ca": ca, "cb": cb, "cc": cc, "cd": cd})


def _c2_env(P, tr):
    return ParamEnv({"a": P["a"], "b": P["b"]}, tr)


def _pair_C2(P, tr):
    return _plain("pair_C2", _pairs()["C2"], _c2_env(P, tr), _generic(), refs.ref_pair_C2,
                  P, "f = (1-axy)(1-bx/y), g = (x-y)(1-b/(axy))", "bibasic pair sum")


def _gasper_rahman(P, tr):
    p, q, d, x = P["p"], P["q"], P["d"], P["x"]
    seqs = {"a": IndexedSequence.geometric(1, p), "b": IndexedSequence.geometric(d, q),
            "c": IndexedSequence.constant(1), "d": IndexedSequence.constant(d / x)}
    return _plain("gasper_rahman", _pairs()["C2"], _c2_env(P, tr), seqs,
                  refs.ref_gasper_rahman, P, "bilateral bibasic sum", "Gasper-Rahman")


def _gosper(P, tr):
    p, q, x = P["p"], P["q"], P["x"]
    seqs = {"a": IndexedSequence.geometric(1, p), "b": IndexedSequence.geometric(1, q),
            "c": IndexedSequence.constant(1), "d": IndexedSequence.constant(x)}
    env = ParamEnv({"a": P["a"], "b": 0.0}, tr)
    return _plain("gosper", _pairs()["C2"], env, seqs, refs.ref_gosper, P,
                  "bibasic sum with b = 0", "Gosper", max_n=0, n=0)


def _gasper(P, tr):
    p, q, x = P["p"], P["q"], P["x"]
    seqs = {"a": IndexedSequence.geometric(1, p), "b": IndexedSequence.geometric(1, q),
            "c": IndexedSequence.constant(1), "d": IndexedSequence.constant(1 / x)}
    return _plain("gasper", _pairs()["C2"], _c2_env(P, tr), seqs, refs.ref_gasper, P,
                  "unilateral bibasic sum", "Gasper", max_n=0, n=0)


def _pair_C3(P, tr):
    return _plain("pair_C3", _pairs()["C3"], _c2_env(P, tr), _generic(), refs.ref_pair_C3,
                  P, "f = (x+y)(x+b/(ay)), g = (x-y)(1-b/(axy))", "sum-type pair")


def _s2_env(d, tr):
    return ParamEnv({"d": d}, tr)


def _pair_S2(P, tr):
    return _plain("pair_S2", _pairs()["S2"], _s2_env(P["d"], tr), _generic(),
                  refs.ref_pair_S2, P, "f = g = (y-x)(1-xy/d)", "quadratic pair sum")


def _chu_gasper_rahman(P, tr):
    g = _generic()
    A, B = g["a"], g["b"]
    d, x = P["d"], P["x"]
    b0 = B(0)
    seqs = {"a": A, "b": _seq(lambda k: B(k) * d / b0, "b d/b0"),
            "c": IndexedSequence.constant(1), "d": IndexedSequence.constant(x)}
    inst = _plain("chu_gasper_rahman", _pairs()["S2"], _s2_env(d, tr), seqs,
                  refs.ref_chu_gasper_rahman, P, "unilateral quadratic sum",
                  "Chu and Gasper-Rahman", max_n=0, n=0)
    return replace(inst, aux={"a": A, "b": B})


def _macdonald_432(P, tr):
    g = _generic()
    A, B = g["a"], g["b"]
    d, e, x = P["d"], P["e"], P["x"]
    seqs = {"a": A, "b": _seq(lambda k: d * e * B(k), "d e b"),
            "c": IndexedSequence.constant(1), "d": IndexedSequence.constant(x / e)}
    inst = _plain("macdonald_432", _pairs()["S2"], _s2_env(d, tr), seqs,
                  refs.ref_macdonald_432, P, "quadratic sum with parameter e", "Macdonald")
    return replace(inst, aux={"a": A, "b": B})


def _macdonald_general(P, tr):
    g = _generic()
    A, B, C, D = g["a"], g["b"], g["c"], g["d"]
    e = P["e"]
    seqs = {"a": A, "b": _seq(lambda k: D(k) * e * B(k), "d_k e b_k"),
            "c": IndexedSequence.constant(1), "d": _seq(lambda k: C(k) / e, "c_k/e")}
    inst = _plain("macdonald_general", _pairs()["S2"], _s2_env(1.0, tr), seqs,
                  refs.ref_macdonald_general, P,
                  "quadratic sum with index-dependent d_k", "Macdonald",
                  env_seq={"d": D})
    return replace(inst, aux={"a": A, "b": B, "c": C, "d": D})


def _elliptic_theta(P, tr):
    env = ParamEnv({"q": P["q"]}, tr)
    return _plain("elliptic_theta", _pairs()["S4"], env, _generic(), refs.ref_elliptic_theta,
                  P, "f = g = y theta(xy) theta(x/y)", "elliptic theta sum")


BUILDERS = {
    "one_xy": (_one_xy, ()),
    "subbarao_verma_31": (_subbarao_verma_31, ("a",)),
    "xy_xy": (_xy_xy, ()),
    "subbarao_verma_21": (_subbarao_verma_21, ()),
    "ab_form": (_ab_form, ()),
    "krattenthaler_chu": (_krattenthaler_chu, ("x",)),
    "chu_theorem_A": (_chu_theorem_A, ("x", "y")),
    "pair_C2": (_pair_C2, ("a", "b")),
    "gasper_rahman": (_gasper_rahman, ("p", "q", "a", "b", "d", "x")),
    "gosper": (_gosper, ("p", "q", "a", "x")),
    "gasper": (_gasper, ("p", "q", "a", "b", "x")),
    "pair_C3": (_pair_C3, ("a", "b")),
    "pair_S2": (_pair_S2, ("d",)),
    "chu_gasper_rahman": (_chu_gasper_rahman, ("d", "x")),
    "macdonald_432": (_macdonald_432, ("d", "e", "x")),
    "macdonald_general": (_macdonald_general, ("e",)),
    "elliptic_theta": (_elliptic_theta, ("q",)),
}


def instance_names():
    return list(BUILDERS)


def build_instance(name, overrides=None, truncation=DEFAULT_TRUNCATION):
    """Build one catalog instance; ``overrides`` may set its parameters and m, n."""
    if name not in BUILDERS:
        raise UnknownTarget(name)
    builder, names = BUILDERS[name]
    overrides = dict(overrides or {})
    mn = {k: int(overrides.pop(k)) for k in ("m", "n") if k in overrides}
    bad = [k for k in overrides if k not in names]
    if bad:
        raise ConfigError(f"instance {name} has no parameter(s) {bad}")
    P = {k: DEFAULTS[k] for k in names}
    P.update(overrides)
    inst = builder(P, truncation)
    if mn:
        inst = inst.at(mn.get("m", inst.m), mn.get("n", inst.n))
    return inst


def catalog(overrides=None, truncation=DEFAULT_TRUNCATION):
    """All catalog instances; ``overrides`` maps instance name -> {param: value}."""
    overrides = overrides or {}
    unknown = [k for k in overrides if k not in BUILDERS]
    if unknown:
        raise UnknownTarget(unknown[0])
    return [build_instance(n, overrides.get(n), truncation) for n in BUILDERS]
