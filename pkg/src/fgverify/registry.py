"""Named verification targets shared by the CLI and the acceptance tests."""
from dataclasses import dataclass, field
import ast
import time
from typing import Callable

import numpy as np

from . import catalog as cat
from . import inversion as inv
from . import laurent as lr
from .errors import ConfigError, PoleError, UnknownTarget
from .pairs import broken_pair, builtin_pairs, check_pair, default_sampler
from .qseries import DEFAULT_TRUNCATION, Truncation, jacobi_triple_residual, theta
from .report import VerificationReport, status_for
from .sampling import Sampler

SCHLOSSER = {"a": 0.31, "b": 0.17, "c": 0.23, "q": 0.4}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 1000
    tol: float = None
    truncation: Truncation = DEFAULT_TRUNCATION
    window: int = 12
    overrides: dict = field(default_factory=dict)
    adversarial: bool = False

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.window < 1:
            raise ConfigError("window must be positive")

    def tolerance(self, default):
        return default if self.tol is None else self.tol

    def section(self, *prefix):
        """Overrides under a dotted prefix, e.g. section('pair', 'S2') -> {'d': 2.5}."""
        n = len(prefix)
        out = {}
        for key, v in self.overrides.items():
            parts = key.split(".")
            if len(parts) == n + 1 and tuple(parts[:n]) == prefix:
                out[parts[n]] = v
        return out


def parse_value(text):
    """A scalar, tuple or boolean from an override string."""
    text = text.strip()
    try:
        v = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        try:
            return complex(text.replace(" ", ""))
        except ValueError:
            raise ConfigError(f"cannot parse value {text!r}") from None
    if isinstance(v, (int, float, complex, tuple, list, bool)):
        return tuple(v) if isinstance(v, list) else v
    raise ConfigError(f"unsupported value {text!r}")


@dataclass(frozen=True)
class Target:
    name: str
    kind: str
    description: str
    anchor: str
    run: Callable = field(repr=False)


def _report(name, status, abs_res, rel_res, cfg, t0, samples=1, rejections=0, detail=None):
    return VerificationReport(name, status, float(abs_res), float(rel_res), samples,
                              rejections, cfg.seed, int(1000 * (time.perf_counter() - t0)),
                              detail or {})


# -- pair targets ----------------------------------------------------------------

def _pair_env_overrides(pair, cfg):
    ov = cfg.section("pair", pair.name)
    bad = [k for k in ov if k not in pair.param_names]
    if bad:
        raise ConfigError(f"pair {pair.name} has no parameter(s) {bad}")
    return ov


def _pair_target(pair):
    def run(cfg):
        s = default_sampler(pair, cfg.seed, cfg.truncation, **_pair_env_overrides(pair, cfg))
        return check_pair(pair, s, cfg.samples, cfg.tolerance(1e-9))
    return Target(pair.name, "pair", pair.description, pair.anchor, run)


def _inverse_target(pair, draws=10):
    def run(cfg):
        t0 = time.perf_counter()
        env = pair.env(cfg.truncation, **_pair_env_overrides(pair, cfg))
        tol = pair.tolerance(cfg.tolerance(1e-7), env)
        sampler = Sampler(cfg.seed)
        W = cfg.window
        worst = None
        for _ in range(draws):
            xs, bs = inv.random_sequences(pair, env, sampler, 0, W - 1)
            F = inv.build_F(pair, env, xs, bs, (0, W - 1), (0, W - 1))
            G = inv.build_G(pair, env, xs, bs, (0, W - 1), (0, W - 1))
            r = inv.verify_inverse(F, G, tol, f"inverse_{pair.name}", cfg.seed)
            if worst is None or r.max_rel_residual > worst.max_rel_residual:
                worst = r
        return _report(f"inverse_{pair.name}", status_for(worst.max_rel_residual, tol),
                       worst.max_abs_residual, worst.max_rel_residual, cfg, t0, draws,
                       detail=dict(worst.detail, window=W, tolerance=tol))
    return Target(f"inverse_{pair.name}", "inversion",
                  f"FG = GF = I on a square window (10 draws) for {pair.name}",
                  "(f,g)-matrix inversion", run)


def _zero_sum(cfg, pairs=None):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-9)
    worst, where, count = 0.0, None, 0
    sampler = Sampler(cfg.seed)
    for pair in pairs or builtin_pairs():
        env = pair.env(cfg.truncation, **_pair_env_overrides(pair, cfg))
        tol_p = pair.tolerance(tol, env)
        xs, bs = inv.random_sequences(pair, env, sampler, -6, 6)
        for m in range(0, 7):
            for n in range(1, 7):
                terms = inv.zero_sum_terms(pair, env, xs, bs, m, n)
                scale = max(abs(t) for t in terms)
                r = abs(sum(terms)) / scale
                count += 1
                if r / tol_p > worst:
                    worst, where = r / tol_p, {"pair": pair.name, "m": m, "n": n,
                                               "relative": r}
    rel = where["relative"] if where else 0.0
    return _report("zero_sum", "pass" if worst <= 1 else "fail", rel, rel, cfg, t0, count,
                   detail=dict(where or {}, tolerance=tol))


# -- catalog targets ---------------------------------------------------------------

def _catalog_overrides(cfg, name):
    return cfg.section("catalog", name)


def _summation_target(name):
    def run(cfg):
        inst = cat.build_instance(name, _catalog_overrides(cfg, name), cfg.truncation)
        r = cat.verify_grid(inst, cfg.tolerance(1e-9), 6, 4)
        r.seed = cfg.seed
        return r
    probe = cat.build_instance(name)
    return Target(name, "summation", probe.description, probe.anchor, run)


def broken_instance(truncation=DEFAULT_TRUNCATION):
    g = cat._generic()
    return cat.SummationInstance("sum_BROKEN", broken_pair(), cat.ParamEnv({}, truncation),
                                 g["a"], g["b"], g["c"], g["d"],
                                 description="general sum with a non-orthogonal pair")


def _broken_summation(cfg):
    return cat.verify_grid(broken_instance(cfg.truncation), cfg.tolerance(1e-9), 6, 4)


def _telescoping(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-12)
    worst, where, count = 0.0, None, 0
    for name in cat.instance_names():
        inst = cat.build_instance(name, _catalog_overrides(cfg, name), cfg.truncation)
        tol_i = inst.pair.tolerance(tol, inst.env)
        for m in range(1, 7):
            r = cat.telescoping_residual(inst.at(m, inst.n), m)
            count += 1
            if r / tol_i > worst:
                worst, where = r / tol_i, {"instance": name, "m": m, "relative": r}
    rel = where["relative"]
    return _report("telescoping", "pass" if worst <= 1 else "fail", rel, rel, cfg, t0, count,
                   detail=dict(where, tolerance=tol))


# -- series targets --------------------------------------------------------------------

def _random_series(rng, M):
    z = rng.normal(size=2 * M + 1) + 1j * rng.normal(size=2 * M + 1)
    return lr.UnivariateSeries(M, z)


def _self_orth_construction(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-12)
    rng = np.random.default_rng(cfg.seed)
    M = min(cfg.window, lr.EXHAUSTIVE_MAX_WINDOW)
    worst, count = 0.0, 0
    for _ in range(5):
        s = lr.construct_self_orthogonal(_random_series(rng, M), _random_series(rng, M))
        r, sc, n = lr.self_orth_scan(s)
        worst = max(worst, r / sc)
        count += n
    return _report("self_orthogonal_construction", status_for(worst, tol), worst, worst,
                   cfg, t0, count, detail={"window": M, "tolerance": tol})


def _orth_to_construction(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-12)
    rng = np.random.default_rng(cfg.seed)
    M = min(cfg.window, lr.EXHAUSTIVE_MAX_WINDOW)
    g = lr.construct_self_orthogonal(_random_series(rng, M), _random_series(rng, M))
    worst, count, pivots = 0.0, 0, 0
    for p in lr.nonzero_pivots(g):
        f = lr.construct_orthogonal_to(g, _random_series(rng, M), _random_series(rng, M), p)
        r, sc, n = lr.cross_orth_scan(g, f)
        worst = max(worst, r / sc)
        count += n
        pivots += 1
    return _report("orthogonal_to_construction", status_for(worst, tol), worst, worst, cfg,
                   t0, count, detail={"window": M, "pivots": pivots, "tolerance": tol})


def _cross_implies_self(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-12)
    M = min(cfg.window, lr.EXHAUSTIVE_MAX_WINDOW)
    worst, pivots, detail = 0.0, 0, {}
    for pair in builtin_pairs():
        if pair.name == "S4":
            continue
        env = pair.env(cfg.truncation)
        fs, gs = lr.pair_series(pair, env, M)
        ok, n, w = lr.cross_implies_self(gs, fs, tol)
        if not ok:
            worst = float("inf")
            detail = {"pair": pair.name, "reason": "cross-orthogonality scan failed"}
            break
        pivots += n
        if w > worst:
            worst, detail = w, {"pair": pair.name}
    detail.update(window=M, pivots=pivots, tolerance=tol)
    return _report("cross_implies_self", status_for(worst, tol), worst, worst, cfg, t0,
                   pivots, detail=detail)


def _theta_series(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-8)
    q = 0.3
    W = max(cfg.window, 4)
    s = lr.theta_pair_series(q, W, cfg.truncation)
    sampler = Sampler(cfg.seed)
    worst = worst_abs = 0.0
    for _ in range(50):
        x = sampler.scalar(0.5, 1.5)
        y = sampler.scalar(0.5, 1.5)
        exact = y * theta(x * y, q, cfg.truncation) * theta(x / y, q, cfg.truncation)
        d = abs(lr.eval_series(s, x, y) - exact)
        worst_abs = max(worst_abs, d)
        worst = max(worst, d / max(abs(exact), 1e-14))
    return _report("theta_series", status_for(worst, tol), worst_abs, worst, cfg, t0, 50,
                   detail={"window": W, "q": q, "tolerance": tol})


def _jacobi(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-10)
    sampler = Sampler(cfg.seed)
    worst = 0.0
    for _ in range(100):
        q = sampler.base(0.05, 0.5)
        x = sampler.scalar(0.5, 2.0)
        worst = max(worst, jacobi_triple_residual(x, q, cfg.truncation))
    return _report("jacobi_triple", status_for(worst, tol), worst, worst, cfg, t0, 100,
                   detail={"tolerance": tol})


# -- bilateral targets -------------------------------------------------------------------

def _schlosser_params(cfg):
    P = dict(SCHLOSSER)
    ov = cfg.section("schlosser")
    bad = [k for k in ov if k not in P]
    if bad:
        raise ConfigError(f"schlosser has no parameter(s) {bad}")
    P.update(ov)
    return P


def _schlosser_bio(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-6)
    P = _schlosser_params(cfg)
    info = inv.schlosser_biorthogonality(P["a"], P["b"], P["c"], P["q"], 3, 25, cfg.truncation)
    r = info["max_residual"]
    return _report("schlosser_biorthogonality", status_for(r, tol), r, r, cfg, t0, 49,
                   detail=dict(info, tolerance=tol))


def _schlosser_gate(cfg):
    t0 = time.perf_counter()
    P = _schlosser_params(cfg)
    info = inv.schlosser_biorthogonality(P["a"], P["b"], P["c"], P["q"], 3, 25, cfg.truncation)
    g = info["gate_abs"]
    return _report("schlosser_decay_gate", status_for(g, 1e-10), g, info["gate_rel"], cfg,
                   t0, 49, detail=dict(info, tolerance=1e-10))


def _h_values(cfg, closed):
    P = _schlosser_params(cfg)
    a, b, c, q = P["a"], P["b"], P["c"], P["q"]
    pair, env, as_, bs, A = inv.schlosser_setup(a, b, c, q)
    env = env.with_truncation(cfg.truncation)
    out = []
    for M in (-2, -1, 0, 1, 2):
        h, change, _ = inv.bilateral_h_info(pair, env, as_, bs, A, M, cfg.truncation)
        ref = closed(a, b, c, q, M, cfg.truncation)
        out.append((M, h, ref, change))
    return out


def _schlosser_h(name, closed, description):
    def run(cfg):
        t0 = time.perf_counter()
        tol = cfg.tolerance(1e-6)
        worst, where = 0.0, None
        for M, h, ref, change in _h_values(cfg, closed):
            r = abs(h - ref) / max(abs(h), abs(ref))
            if r >= worst:
                worst, where = r, {"M": M, "h": [h.real, h.imag],
                                   "closed_form": [ref.real, ref.imag],
                                   "extrapolation_change": change}
        return _report(name, status_for(worst, tol), abs(complex(*where["h"]) -
                                                         complex(*where["closed_form"])),
                       worst, cfg, t0, 5, detail=dict(where, tolerance=tol))
    return Target(name, "bilateral", description, "Schlosser's bilateral inversion", run)


def _transformation(cfg):
    t0 = time.perf_counter()
    tol = cfg.tolerance(1e-9)
    sampler = Sampler(cfg.seed)
    worst, where = 0.0, None
    for _ in range(50):
        q = sampler.base(0.05, 0.4)
        a, b, c, d = sampler.scalars(4, 0.5, 2.0)
        r = inv.transformation_521_residual(a, b, c, d, q, cfg.truncation)
        if r >= worst:
            worst, where = r, {"a": [a.real, a.imag], "q": [q.real, q.imag]}
    return _report("transformation_521", status_for(worst, tol), worst, worst, cfg, t0, 50,
                   detail=dict(where, tolerance=tol))


def _simple(name, kind, fn, description, anchor):
    return Target(name, kind, description, anchor, fn)


def targets(adversarial=False):
    """All targets sorted by name; the broken pair appears only when adversarial."""
    out = [_pair_target(p) for p in builtin_pairs()]
    out += [_inverse_target(p) for p in builtin_pairs()]
    out += [_summation_target(n) for n in cat.instance_names()]
    out += [
        _simple("zero_sum", "inversion", _zero_sum,
                "zero-sum identity for every pair, m <= 6, 1 <= n <= 6",
                "zero-sum lemma for (f,g)-inversion"),
        _simple("telescoping", "property", _telescoping,
                "isolated k = m summand for every catalog instance, m = 1..6",
                "telescoping of the general sum"),
        _simple("self_orthogonal_construction", "series", _self_orth_construction,
                "P(x)Q(y) - P(y)Q(x) passes the exhaustive self-orthogonality scan",
                "self-orthogonal characterisation"),
        _simple("orthogonal_to_construction", "series", _orth_to_construction,
                "pivot construction of f orthogonal to g at every pivot",
                "orthogonal partner characterisation"),
        _simple("cross_implies_self", "series", _cross_implies_self,
                "f orthogonal to g implies g self-orthogonal (pivot criterion)",
                "orthogonality implies self-orthogonality"),
        _simple("theta_series", "series", _theta_series,
                "Laurent series of y theta(xy) theta(x/y) against the product",
                "theta addition formula"),
        _simple("jacobi_triple", "theta", _jacobi,
                "Jacobi triple product on 100 random (x, q)", "Jacobi triple product"),
        _simple("schlosser_biorthogonality", "bilateral", _schlosser_bio,
                "truncated sum_k A_{n,k} B_{k,m} = delta for |n|, |m| <= 3, K = 25",
                "Schlosser's bilateral inversion"),
        _simple("schlosser_decay_gate", "bilateral", _schlosser_gate,
                "edge terms |A_{n,k} B_{k,m}| at |k| = 25 below 1e-10",
                "Schlosser's bilateral inversion"),
        _schlosser_h("schlosser_h", inv.schlosser_h_printed,
                     "extrapolated h(M) against the displayed closed form"),
        _schlosser_h("schlosser_h_corrected", inv.schlosser_h_closed,
                     "extrapolated h(M) against the closed form derived from the sum"),
        _simple("transformation_521", "bilateral", _transformation,
                "three-term theta product identity on 50 random tuples",
                "theta product transformation"),
    ]
    if adversarial:
        bp = broken_pair()
        out += [_pair_target(bp), _inverse_target(bp),
                _simple("sum_BROKEN", "summation", _broken_summation,
                        "general sum with f = x y^2, g = x - y", "negative control")]
    return sorted(out, key=lambda t: t.name)


def get_target(name, adversarial=False):
    for t in targets(adversarial):
        if t.name == name:
            return t
    raise UnknownTarget(name)


def check_overrides(cfg):
    """Reject override keys that no target understands."""
    pair_names = {p.name: p for p in builtin_pairs() + [broken_pair()]}
    for key in cfg.overrides:
        parts = key.split(".")
        if parts[0] == "pair" and len(parts) == 3 and parts[1] in pair_names:
            if parts[2] not in pair_names[parts[1]].param_names:
                raise ConfigError(f"unknown override {key}")
        elif parts[0] == "catalog" and len(parts) == 3:
            cat.build_instance(parts[1], {parts[2]: cfg.overrides[key]})
        elif parts[0] == "schlosser" and len(parts) == 2 and parts[1] in SCHLOSSER:
            pass
        else:
            raise ConfigError(f"unknown override {key}")


def run_target(target, cfg):
    """Run one target, turning stray poles into a failed report instead of a crash."""
    t0 = time.perf_counter()
    try:
        return target.run(cfg)
    except (PoleError, ArithmeticError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        return _report(target.name, "fail", float("inf"), float("inf"), cfg, t0,
                       detail={"error": type(exc).__name__, "message": str(exc)})
